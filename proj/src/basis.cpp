#include "shull/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shull {

HullBasis::HullBasis(FeketeSet fekete, BasisRoute route, double sigma_min_floor)
    : fek_(std::move(fekete)), route_(route) {
  const Eigen::VectorXd& S = fek_.svdS;
  if (S(S.size() - 1) <= sigma_min_floor)
    throw std::runtime_error("degenerate point set: sigma_min at or below the configured floor");

  if (route == BasisRoute::Direct) {
    a_ = fek_.svdV * S.cwiseInverse().asDiagonal() * fek_.svdU.transpose();
  } else {
    // a = P0 V1 S1^-1 U1^T with U1 S1 V1^T the SVD of the preconditioned
    // restricted Vandermonde.
    const Eigen::MatrixXd Vr = vandermonde(fek_.spec, fek_.points);
    const Eigen::MatrixXd V1r = Vr * fek_.precond;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(V1r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    a_ = fek_.precond * svd.matrixV() *
         svd.singularValues().cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  }
  modal_ = fek_.svdV * S.cwiseInverse().asDiagonal();
  U_ = fek_.svdU;
  fnorm_ = std::sqrt(moment_norm_sq(fek_.poly, fek_.spec));
}

bool HullBasis::inside_box(const Vec2& pt) const {
  const double a = normalization_half_width() + 1e-9;
  return std::abs(pt.x) <= a && std::abs(pt.y) <= a;
}

Eigen::VectorXd HullBasis::eval_nodal(const Vec2& pt, bool* extrapolated) const {
  if (extrapolated) *extrapolated = !inside_box(pt);
  return (eval_monomials(fek_.spec, pt) * a_).transpose();
}

void HullBasis::eval_nodal_grad(const Vec2& pt, Eigen::VectorXd& dx, Eigen::VectorXd& dy) const {
  Eigen::RowVectorXd fx, fy;
  eval_monomial_gradient(fek_.spec, pt, fx, fy);
  dx = (fx * a_).transpose();
  dy = (fy * a_).transpose();
}

Eigen::VectorXd HullBasis::eval_modal(const Vec2& pt, int k_m) const {
  if (k_m < 1 || k_m > size()) throw std::invalid_argument("k_m out of range");
  return (eval_monomials(fek_.spec, pt) * modal_.leftCols(k_m)).transpose();
}

void HullBasis::eval_modal_grad(const Vec2& pt, int k_m, Eigen::VectorXd& dx,
                                Eigen::VectorXd& dy) const {
  if (k_m < 1 || k_m > size()) throw std::invalid_argument("k_m out of range");
  Eigen::RowVectorXd fx, fy;
  eval_monomial_gradient(fek_.spec, pt, fx, fy);
  dx = (fx * modal_.leftCols(k_m)).transpose();
  dy = (fy * modal_.leftCols(k_m)).transpose();
}

Eigen::VectorXd HullBasis::eval_orthonormal(const Vec2& pt, int k_m) const {
  if (k_m < 1 || k_m > size()) throw std::invalid_argument("k_m out of range");
  return (eval_monomials(fek_.spec, pt) * fek_.svdV.leftCols(k_m)).transpose() / fnorm_;
}

HullBasis build_basis(FeketeSet fekete, BasisRoute route, double sigma_min_floor) {
  return HullBasis(std::move(fekete), route, sigma_min_floor);
}

GfcVector gfc_transform(const HullBasis& b, const Eigen::VectorXd& u_nodal, int k_m) {
  if (u_nodal.size() != b.size()) throw std::invalid_argument("u_nodal length mismatch");
  if (k_m < 1 || k_m > b.size()) throw std::invalid_argument("k_m out of range");
  return {b.left_factor().leftCols(k_m).transpose() * u_nodal, k_m};
}

std::pair<Eigen::VectorXd, double> filter_modes(const HullBasis& b, const Eigen::VectorXd& u_nodal,
                                                int k_m) {
  if (u_nodal.size() != b.size()) throw std::invalid_argument("u_nodal length mismatch");
  if (k_m < 1 || k_m > b.size()) throw std::invalid_argument("k_m out of range");
  const Eigen::MatrixXd& U = b.left_factor();
  // psi-bar evaluated at the nodes equals U, so the filtered reconstruction
  // at the nodes is the rank-k_m projection U_km U_km^T u.
  const Eigen::VectorXd w = U.leftCols(k_m).transpose() * u_nodal;
  const Eigen::VectorXd filtered = U.leftCols(k_m) * w;
  const double tail = (U.rightCols(b.size() - k_m).transpose() * u_nodal).norm();
  return {filtered, tail};
}

GfcDecayReport gfc_decay_check(const HullBasis& b, const Eigen::VectorXd& u_nodal) {
  if (u_nodal.size() != b.size()) throw std::invalid_argument("u_nodal length mismatch");
  GfcDecayReport rep;
  rep.w = b.left_factor().transpose() * u_nodal;
  rep.sigma = b.singular_values();
  const FeketeSet& f = b.fekete();
  const Eigen::VectorXd u_breve =
      f.svdV * f.svdS.cwiseInverse().asDiagonal() * (f.svdU.transpose() * u_nodal);
  rep.u_breve_norm = u_breve.norm();
  rep.bound_holds = true;
  rep.envelope_constant = 0.0;
  for (Eigen::Index k = 0; k < rep.w.size(); ++k) {
    const double bound = rep.sigma(k) * rep.u_breve_norm;
    if (std::abs(rep.w(k)) > bound + 1e-10) rep.bound_holds = false;
    if (bound > 0.0)
      rep.envelope_constant = std::max(rep.envelope_constant, std::abs(rep.w(k)) / bound);
  }
  return rep;
}

double lebesgue_bound(const HullBasis& b) {
  return b.fnorm() / b.singular_values()(b.size() - 1);
}

double lebesgue_estimate(const HullBasis& b, const std::vector<Vec2>& samples) {
  double best = 0.0;
  for (const Vec2& p : samples) best = std::max(best, b.eval_nodal(p).lpNorm<1>());
  return best;
}

double sampled_l2_operator_norm(const HullBasis& b, const std::vector<Vec2>& samples) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  const double area = std::abs(signed_area(b.poly()));
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(b.size(), b.size());
  for (const Vec2& p : samples) {
    const Eigen::VectorXd psi = b.eval_nodal(p);
    G.selfadjointView<Eigen::Lower>().rankUpdate(psi);
  }
  G = G.selfadjointView<Eigen::Lower>();
  G *= area / static_cast<double>(samples.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

std::vector<int> weierstrass_permutation(const HullBasis& b, const Eigen::VectorXd& W) {
  if (W.size() != b.size()) throw std::invalid_argument("W length mismatch");
  if (!W.allFinite()) throw std::invalid_argument("W must be finite");
  const Eigen::VectorXd wt = b.fekete().svdV.transpose() * W;  // W . V_(k)
  std::vector<int> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
    const double ai = std::abs(wt(i)), aj = std::abs(wt(j));
    if (ai != aj) return ai > aj;
    return i < j;
  });
  return perm;
}

}  // namespace shull
