#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "shull/fekete.hpp"

namespace shull {

enum class BasisRoute { Direct, Reusable };

/// Nodal, modal and orthonormal basis functions on one hull, built from a
/// FeketeSet. Immutable after construction; evaluation is pure.
class HullBasis {
 public:
  HullBasis(FeketeSet fekete, BasisRoute route, double sigma_min_floor);

  const FeketeSet& fekete() const { return fek_; }
  const MonomialSpec& spec() const { return fek_.spec; }
  const Polygon& poly() const { return fek_.poly; }
  int size() const { return fek_.size(); }
  BasisRoute route() const { return route_; }

  const Eigen::MatrixXd& coefficients() const { return a_; }     ///< nodal coefficient matrix
  const Eigen::MatrixXd& modal_factor() const { return modal_; } ///< V S^-1
  const Eigen::MatrixXd& left_factor() const { return U_; }      ///< unitary U of the restricted SVD
  const Eigen::VectorXd& singular_values() const { return fek_.svdS; }
  double fnorm() const { return fnorm_; }  ///< sqrt of the moment norm integral

  /// True when pt sits inside the normalization box; evaluation outside is
  /// permitted (neighbor edge quadrature needs it) but counts as
  /// extrapolation.
  bool inside_box(const Vec2& pt) const;

  /// Cardinal values psi_j(pt); sets *extrapolated when pt leaves the box.
  Eigen::VectorXd eval_nodal(const Vec2& pt, bool* extrapolated = nullptr) const;

  /// Gradients of the nodal basis with respect to the (normalized) hull
  /// coordinates.
  void eval_nodal_grad(const Vec2& pt, Eigen::VectorXd& dx, Eigen::VectorXd& dy) const;

  /// First k_m modal values psi-bar; modes are ordered by descending
  /// singular value, lowest frequency first.
  Eigen::VectorXd eval_modal(const Vec2& pt, int k_m) const;
  void eval_modal_grad(const Vec2& pt, int k_m, Eigen::VectorXd& dx, Eigen::VectorXd& dy) const;

  /// First k_m orthonormal values psi-tilde = f V_(k) / ||f||.
  Eigen::VectorXd eval_orthonormal(const Vec2& pt, int k_m) const;

 private:
  FeketeSet fek_;
  BasisRoute route_;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd modal_;
  Eigen::MatrixXd U_;
  double fnorm_ = 0.0;
};

/// Build the nodal coefficients by the direct (a = V S^-1 U^T) or reusable
/// (a = P0 V1 S1^-1 U1^T) formula. `sigma_min_floor` rejects degenerate node
/// sets; the default only rejects exactly singular ones, since legitimate
/// high-degree bases carry sigma_min far below any fixed absolute floor.
HullBasis build_basis(FeketeSet fekete, BasisRoute route = BasisRoute::Direct,
                      double sigma_min_floor = 0.0);

/// Generalized Fourier coefficients of the orthogonal expansion.
struct GfcVector {
  Eigen::VectorXd w;  ///< first k_m entries of U^T u
  int k_m = 0;
};

/// w = U^T u restricted to the first k_m columns.
GfcVector gfc_transform(const HullBasis& b, const Eigen::VectorXd& u_nodal, int k_m);

/// Reconstruction at the nodes from the first k_m GFCs, plus the l2 norm of
/// the eliminated tail (the a posteriori error estimator).
std::pair<Eigen::VectorXd, double> filter_modes(const HullBasis& b, const Eigen::VectorXd& u_nodal,
                                                int k_m);

struct GfcDecayReport {
  Eigen::VectorXd w;      ///< GFCs
  Eigen::VectorXd sigma;  ///< singular values
  double u_breve_norm = 0.0;      ///< ||Vhat^-1 u|| with x-breve at the Fekete nodes
  double envelope_constant = 0.0; ///< max_k |w_k| / (sigma_k ||u-breve||)
  bool bound_holds = false;       ///< |w_k| <= sigma_k ||u-breve|| + 1e-10 for all k
};

GfcDecayReport gfc_decay_check(const HullBasis& b, const Eigen::VectorXd& u_nodal);

/// Closed-form bound ||f|| / sigma_min from the stored restricted SVD.
double lebesgue_bound(const HullBasis& b);

/// max over samples of sum_i |psi_i(x)|.
double lebesgue_estimate(const HullBasis& b, const std::vector<Vec2>& samples);

/// Monte-Carlo estimate of the L2 operator norm of nodal interpolation:
/// sqrt of the largest eigenvalue of (area/n) sum psi psi^T over the samples.
double sampled_l2_operator_norm(const HullBasis& b, const std::vector<Vec2>& samples);

/// Indices sorted by descending |W . V_(k)| (ties to the lower k), the match
/// ordering of the orthonormal expansion.
std::vector<int> weierstrass_permutation(const HullBasis& b, const Eigen::VectorXd& W);

}  // namespace shull
