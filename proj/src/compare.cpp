#include <cmath>

#include "shull/basis.hpp"
#include "shull/fekete.hpp"

namespace shull {

namespace {

double test_function(const Vec2& p) {
  return std::cos(3.0 * M_PI * p.x) * std::cos(3.0 * M_PI * p.y);
}

}  // namespace

std::vector<CompareRow> compare_svd_qr(const Polygon& poly, Space space,
                                       const std::vector<int>& p_values, double oversample) {
  std::vector<CompareRow> rows;
  for (int p : p_values) {
    const MonomialSpec spec(space, p);
    const Eigen::VectorXd m = boundary_moments(poly, spec);
    const PointSet cands = fill_at_least(poly, candidate_count_for(spec, oversample));
    const Eigen::MatrixXd V = vandermonde(spec, cands.points);

    // evaluation samples, shared by both routes
    const PointSet samples = fill_at_least(poly, 4000);

    for (const char* method : {"svd", "qr"}) {
      const SvdPrecondition pre = std::string(method) == "svd"
                                      ? svd_precondition(V, 1)
                                      : gram_schmidt_precondition(V, 1);
      const Eigen::VectorXd mu = pre.P.transpose() * m;
      const SupportSelection sel = select_support_qr(pre.V1, mu);

      CompareRow row;
      row.p = p;
      row.method = method;
      row.sum_w = sel.weights.sum();
      row.sum_abs_w = sel.weights.cwiseAbs().sum();

      // route-faithful nodal basis through the reusable formula with this
      // route's preconditioner
      std::vector<Vec2> pts;
      for (Eigen::Index idx : sel.indices) pts.push_back(cands.points[idx]);
      const Eigen::MatrixXd Vr = vandermonde(spec, pts);
      const Eigen::MatrixXd V1r = Vr * pre.P;
      Eigen::BDCSVD<Eigen::MatrixXd> svd(V1r, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::MatrixXd a = pre.P * svd.matrixV() *
                                svd.singularValues().cwiseInverse().asDiagonal() *
                                svd.matrixU().transpose();

      Eigen::VectorXd un(spec.size());
      for (int j = 0; j < spec.size(); ++j) un(j) = test_function(pts[j]);

      double leb = 0.0;
      double err2 = 0.0;
      for (const Vec2& s : samples.points) {
        const Eigen::RowVectorXd psi = eval_monomials(spec, s) * a;
        leb = std::max(leb, psi.cwiseAbs().sum());
        const double diff = psi * un - test_function(s);
        err2 += diff * diff;
      }
      row.lebesgue_estimate = leb;
      row.interp_error = std::sqrt(err2 / samples.size());
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace shull
