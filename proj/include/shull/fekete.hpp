#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "shull/candidates.hpp"
#include "shull/geometry.hpp"
#include "shull/moments.hpp"

namespace shull {

/// Output of the iterated SVD preconditioning of a Vandermonde matrix.
/// After one application V1 equals the left unitary factor of the input, so
/// its singular values sit at 1 to machine precision.
struct SvdPrecondition {
  Eigen::MatrixXd V1;  ///< M x N preconditioned Vandermonde
  Eigen::MatrixXd P;   ///< N x N accumulated right preconditioner (V0 S0^-1 at s=1)
  /// Factors of the input with column equilibration folded into V0, so
  /// vmat * (V0 S0^-1) = U0 and U0 has orthonormal columns. S0 is the
  /// spectrum of the unit-column matrix, the quantity the rank test reads.
  Eigen::MatrixXd U0;
  Eigen::VectorXd S0;
  Eigen::MatrixXd V0;
  int iterations = 0;
};

/// Precondition vmat by s rounds of V <- V * (V S^-1). Requires full column
/// rank: sigma_min > 1e-15 * sigma_max, calibrated so that legitimate
/// high-degree monomial Vandermondes pass while exact deficiencies fail.
/// Throws std::runtime_error naming the deficient column count otherwise.
SvdPrecondition svd_precondition(const Eigen::MatrixXd& vmat, int s = 1);

/// QR-based variant: P = R^-1 with R from one classical Gram-Schmidt pass.
/// One pass loses orthogonality at high condition numbers (a second pass
/// would be needed), which is the behavior the route comparison studies.
SvdPrecondition gram_schmidt_precondition(const Eigen::MatrixXd& vmat, int s = 1);

struct SupportSelection {
  std::vector<Eigen::Index> indices;  ///< N selected candidate indices
  Eigen::VectorXd weights;            ///< solves V1^T(:,sel) w = mu
};

/// Column-pivoted Householder QR on V1^T; the first N pivots are the
/// support. Pivot-norm ties within 1e-12 relative resolve to the lowest
/// candidate index so selections are reproducible.
SupportSelection select_support_qr(const Eigen::MatrixXd& V1, const Eigen::VectorXd& mu);

/// Orthogonal matching pursuit on the columns of V1^T against mu: exactly N
/// atoms, least-squares refit on the support each step.
SupportSelection select_support_omp(const Eigen::MatrixXd& V1, const Eigen::VectorXd& mu);

enum class SelectMethod { QR, OMP };

/// N interpolation points with quadrature weights on a normalized hull,
/// together with the SVD of the N x N Vandermonde restricted to them.
struct FeketeSet {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
  Eigen::MatrixXd svdU;  ///< factors of the restricted Vandermonde
  Eigen::VectorXd svdS;
  Eigen::MatrixXd svdV;
  Eigen::MatrixXd precond;  ///< P from the selection stage (identity for prescribed nodes)
  MonomialSpec spec;
  Polygon poly;
  Eigen::VectorXd moments;

  int size() const { return static_cast<int>(points.size()); }
};

/// Full pipeline: moments, Vandermonde, one-iteration SVD preconditioning,
/// greedy support selection, weights from the restricted SVD pseudo-inverse.
/// Refuses polygons whose bounding box exceeds |x_i| <= tanh(1/2) + 1e-9;
/// callers keep control of the normalization map.
FeketeSet approximate_fekete(const Polygon& poly, const MonomialSpec& spec, const PointSet& cands,
                             SelectMethod method = SelectMethod::QR);

/// FeketeSet on prescribed interpolation nodes (no selection). Used for
/// Lagrange bases on triangles and for synthetic node studies.
FeketeSet fekete_from_nodes(const Polygon& poly, const MonomialSpec& spec,
                            std::vector<Vec2> nodes);

struct CompareRow {
  int p = 0;
  std::string method;  // "svd" or "qr"
  double lebesgue_estimate = 0.0;
  double sum_abs_w = 0.0;
  double sum_w = 0.0;
  double interp_error = 0.0;  // rms error of the cos(3 pi x) cos(3 pi y) reconstruction
};

/// Per-degree comparison of the SVD preconditioner against the one-pass
/// Gram-Schmidt QR preconditioner, both with s = 1: weights, Lebesgue
/// estimate, and reconstruction error through each route's reusable-form
/// nodal basis.
std::vector<CompareRow> compare_svd_qr(const Polygon& poly, Space space,
                                       const std::vector<int>& p_values, double oversample = 10.0);

}  // namespace shull
