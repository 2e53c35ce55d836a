#include "shull/fekete.hpp"

#include <cmath>
#include <stdexcept>

namespace shull {

namespace {

// Thin SVD taken on the column-equilibrated matrix, with the scaling folded
// into the right factor: vmat * (V S^-1) = U still holds exactly, but the
// factorization stays finite where a raw SVD underflows its smallest
// singular values to zero (high-degree monomial columns are tiny).
void factor_input(const Eigen::MatrixXd& vmat, Eigen::MatrixXd& U, Eigen::VectorXd& S,
                  Eigen::MatrixXd& V) {
  Eigen::VectorXd d(vmat.cols());
  for (Eigen::Index j = 0; j < vmat.cols(); ++j) {
    d(j) = vmat.col(j).norm();
    if (d(j) == 0.0)
      throw std::runtime_error("rank-deficient Vandermonde matrix: 1 deficient column(s)");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(vmat * d.cwiseInverse().asDiagonal(),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  U = svd.matrixU();
  S = svd.singularValues();
  V = d.cwiseInverse().asDiagonal() * svd.matrixV();
}

// Numerical rank test on the equilibrated spectrum: high-degree monomial
// columns are legitimately tiny, so raw singular values of a full-rank
// Vandermonde can sit below the exactly-deficient (collinear-candidate)
// level; after unit-normalizing columns the two regimes separate by several
// orders of magnitude.
void check_rank(const Eigen::VectorXd& S) {
  const double tol = 1e-15 * S(0);
  int deficient = 0;
  for (Eigen::Index i = 0; i < S.size(); ++i)
    if (!(S(i) > tol)) ++deficient;
  if (deficient > 0)
    throw std::runtime_error("rank-deficient Vandermonde matrix: " + std::to_string(deficient) +
                             " deficient column(s)");
}

}  // namespace

SvdPrecondition svd_precondition(const Eigen::MatrixXd& vmat, int s) {
  if (s < 1) throw std::invalid_argument("svd_precondition needs s >= 1");
  if (vmat.rows() < vmat.cols())
    throw std::runtime_error("rank-deficient Vandermonde matrix: " +
                             std::to_string(vmat.cols() - vmat.rows()) + " deficient column(s)");
  SvdPrecondition out;
  factor_input(vmat, out.U0, out.S0, out.V0);
  check_rank(out.S0);

  out.P = out.V0 * out.S0.cwiseInverse().asDiagonal();
  out.V1 = out.U0;  // V_{k+1} = U_k
  for (int k = 1; k < s; ++k) {
    Eigen::MatrixXd U, V;
    Eigen::VectorXd S;
    factor_input(out.V1, U, S, V);
    out.P = out.P * (V * S.cwiseInverse().asDiagonal());
    out.V1 = U;
  }
  out.iterations = s;
  return out;
}

SvdPrecondition gram_schmidt_precondition(const Eigen::MatrixXd& vmat, int s) {
  if (s < 1) throw std::invalid_argument("gram_schmidt_precondition needs s >= 1");
  SvdPrecondition out;
  factor_input(vmat, out.U0, out.S0, out.V0);
  check_rank(out.S0);

  const Eigen::Index n = vmat.cols();
  Eigen::MatrixXd A = vmat;
  out.P = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < s; ++k) {
    Eigen::MatrixXd Q(A.rows(), n);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd v = A.col(j);
      if (j > 0) {
        const Eigen::VectorXd c = Q.leftCols(j).transpose() * A.col(j);
        R.col(j).head(j) = c;
        v -= Q.leftCols(j) * c;
      }
      R(j, j) = v.norm();
      if (R(j, j) == 0.0) throw std::runtime_error("Gram-Schmidt breakdown: dependent column");
      Q.col(j) = v / R(j, j);
    }
    // P_k = R^-1, applied by triangular solve; V_{k+1} = V_k P_k
    out.P = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd(out.P.transpose())).transpose();
    A = vmat * out.P;
  }
  out.V1 = A;
  out.iterations = s;
  return out;
}

SupportSelection select_support_qr(const Eigen::MatrixXd& V1, const Eigen::VectorXd& mu) {
  const Eigen::Index n = V1.cols();
  const Eigen::Index m = V1.rows();
  if (mu.size() != n) throw std::invalid_argument("mu length must match column count");
  if (m < n) throw std::invalid_argument("select_support_qr needs at least N candidates");

  Eigen::MatrixXd A = V1.transpose();  // n x m; columns are candidates
  std::vector<Eigen::Index> piv(m);
  for (Eigen::Index i = 0; i < m; ++i) piv[i] = i;

  for (Eigen::Index k = 0; k < n; ++k) {
    // pivot: max remaining column norm, ties within 1e-12 relative to the
    // lowest candidate index
    double best = -1.0;
    for (Eigen::Index j = k; j < m; ++j) best = std::max(best, A.col(j).tail(n - k).norm());
    Eigen::Index jsel = k;
    double best_index = -1;
    for (Eigen::Index j = k; j < m; ++j) {
      if (A.col(j).tail(n - k).norm() >= best * (1.0 - 1e-12)) {
        if (best_index < 0 || piv[j] < best_index) {
          best_index = piv[j];
          jsel = j;
        }
      }
    }
    A.col(k).swap(A.col(jsel));
    std::swap(piv[k], piv[jsel]);

    // Householder reflection on rows k..n-1
    Eigen::VectorXd x = A.col(k).tail(n - k);
    const double alpha = (x(0) >= 0.0 ? -1.0 : 1.0) * x.norm();
    if (alpha == 0.0) continue;
    Eigen::VectorXd v = x;
    v(0) -= alpha;
    const double vn = v.norm();
    if (vn == 0.0) continue;
    v /= vn;
    A.bottomRightCorner(n - k, m - k) -= 2.0 * v * (v.transpose() * A.bottomRightCorner(n - k, m - k));
  }

  SupportSelection sel;
  sel.indices.assign(piv.begin(), piv.begin() + n);
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index j = 0; j < n; ++j) B.col(j) = V1.row(sel.indices[j]).transpose();
  sel.weights = B.colPivHouseholderQr().solve(mu);
  return sel;
}

SupportSelection select_support_omp(const Eigen::MatrixXd& V1, const Eigen::VectorXd& mu) {
  const Eigen::Index n = V1.cols();
  const Eigen::Index m = V1.rows();
  if (mu.size() != n) throw std::invalid_argument("mu length must match column count");
  if (m < n) throw std::invalid_argument("select_support_omp needs at least N candidates");

  const Eigen::MatrixXd A = V1.transpose();  // n x m dictionary
  Eigen::VectorXd col_norm(m);
  for (Eigen::Index j = 0; j < m; ++j) col_norm(j) = std::max(A.col(j).norm(), 1e-300);

  std::vector<Eigen::Index> sel;
  std::vector<bool> used(m, false);
  Eigen::VectorXd r = mu;
  Eigen::MatrixXd As(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double best = -1.0;
    Eigen::Index jbest = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double score = std::abs(A.col(j).dot(r)) / col_norm(j);
      if (score > best * (1.0 + 1e-12) || (jbest < 0)) {
        best = score;
        jbest = j;
      }
    }
    used[jbest] = true;
    sel.push_back(jbest);
    As.col(k) = A.col(jbest);
    const Eigen::VectorXd x =
        As.leftCols(k + 1).colPivHouseholderQr().solve(mu);
    r = mu - As.leftCols(k + 1) * x;
  }

  SupportSelection out;
  out.indices = sel;
  out.weights = As.colPivHouseholderQr().solve(mu);
  return out;
}

namespace {

FeketeSet finish_fekete(const Polygon& poly, const MonomialSpec& spec, std::vector<Vec2> pts,
                        Eigen::MatrixXd precond, const Eigen::VectorXd& m) {
  FeketeSet fs{std::move(pts), {}, {}, {}, {}, std::move(precond), spec, poly, m};
  const Eigen::MatrixXd Vr = vandermonde(spec, fs.points);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Vr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  fs.svdU = svd.matrixU();
  fs.svdS = svd.singularValues();
  fs.svdV = svd.matrixV();
  if (fs.svdS(fs.svdS.size() - 1) <= 0.0)
    throw std::runtime_error("restricted Vandermonde is exactly singular");

  // weights from the stored SVD pseudo-inverse: Vr^T w = m
  fs.weights = fs.svdU * fs.svdS.cwiseInverse().asDiagonal() * (fs.svdV.transpose() * m);

  const double area = signed_area(poly);
  if (std::abs(fs.weights.sum() - area) > 1e-8 * std::abs(area))
    throw std::runtime_error("fekete weights do not reproduce the polygon area");
  const Eigen::VectorXd mrep = Vr.transpose() * fs.weights;
  for (Eigen::Index j = 0; j < m.size(); ++j)
    if (std::abs(mrep(j) - m(j)) > 1e-8 * std::max(1.0, std::abs(m(j))))
      throw std::runtime_error("fekete weights do not reproduce moment " + std::to_string(j));
  return fs;
}

void check_normalized(const Polygon& poly) {
  const double a = normalization_half_width() + 1e-9;
  const Vec2 lo = poly.bbox_min(), hi = poly.bbox_max();
  if (lo.x < -a || lo.y < -a || hi.x > a || hi.y > a)
    throw std::invalid_argument(
        "polygon is not normalized: bounding box exceeds |x_i| <= tanh(1/2); "
        "apply normalize_hull first");
}

}  // namespace

FeketeSet approximate_fekete(const Polygon& poly, const MonomialSpec& spec, const PointSet& cands,
                             SelectMethod method) {
  check_normalized(poly);
  const std::size_t N = static_cast<std::size_t>(spec.size());
  if (cands.size() < candidate_count_for(spec))
    throw std::invalid_argument("too few candidates: need at least 10 N");

  const Eigen::VectorXd m = boundary_moments(poly, spec);
  const Eigen::MatrixXd V = vandermonde(spec, cands.points);
  const SvdPrecondition pre = svd_precondition(V, 1);
  const Eigen::VectorXd mu = pre.P.transpose() * m;
  const SupportSelection sel =
      method == SelectMethod::QR ? select_support_qr(pre.V1, mu) : select_support_omp(pre.V1, mu);

  std::vector<Vec2> pts;
  pts.reserve(N);
  for (Eigen::Index idx : sel.indices) pts.push_back(cands.points[idx]);
  return finish_fekete(poly, spec, std::move(pts), pre.P, m);
}

FeketeSet fekete_from_nodes(const Polygon& poly, const MonomialSpec& spec,
                            std::vector<Vec2> nodes) {
  // no normalization gate here: prescribed-node bases (Lagrange triangles,
  // structured validation grids) are the caller's responsibility
  if (nodes.size() != static_cast<std::size_t>(spec.size()))
    throw std::invalid_argument("fekete_from_nodes needs exactly N nodes");
  const Eigen::VectorXd m = boundary_moments(poly, spec);
  return finish_fekete(poly, spec, std::move(nodes),
                       Eigen::MatrixXd::Identity(spec.size(), spec.size()), m);
}

}  // namespace shull
