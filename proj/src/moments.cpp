#include "shull/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shull/quadrature.hpp"

namespace shull {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

MonomialSpec::MonomialSpec(Space s, int degree) : MonomialSpec(2, s, degree) {}

MonomialSpec::MonomialSpec(int dim, Space s, int degree) : d(dim), space(s), p(degree) {
  if (dim != 2) throw std::invalid_argument("only d = 2 is implemented");
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree; ++b) {
      if (space == Space::P && a + b > degree) continue;
      exponents.push_back({a, b});
    }
  std::sort(exponents.begin(), exponents.end(), [](const Exponents& u, const Exponents& v) {
    const int du = u[0] + u[1], dv = v[0] + v[1];
    if (du != dv) return du < dv;
    return u[0] > v[0];
  });
}

int MonomialSpec::max_total_degree() const { return space == Space::P ? p : 2 * p; }

Eigen::RowVectorXd eval_monomials(const MonomialSpec& spec, const Vec2& pt) {
  Eigen::RowVectorXd f(spec.size());
  // powers up to max per-axis degree
  const int pm = spec.p;
  std::vector<double> px(pm + 1), py(pm + 1);
  px[0] = py[0] = 1.0;
  for (int k = 1; k <= pm; ++k) {
    px[k] = px[k - 1] * pt.x;
    py[k] = py[k - 1] * pt.y;
  }
  for (int j = 0; j < spec.size(); ++j) f(j) = px[spec.exponents[j][0]] * py[spec.exponents[j][1]];
  return f;
}

void eval_monomial_gradient(const MonomialSpec& spec, const Vec2& pt, Eigen::RowVectorXd& fx,
                            Eigen::RowVectorXd& fy) {
  fx.resize(spec.size());
  fy.resize(spec.size());
  for (int j = 0; j < spec.size(); ++j) {
    const int a = spec.exponents[j][0];
    const int b = spec.exponents[j][1];
    fx(j) = a == 0 ? 0.0 : a * ipow(pt.x, a - 1) * ipow(pt.y, b);
    fy(j) = b == 0 ? 0.0 : b * ipow(pt.x, a) * ipow(pt.y, b - 1);
  }
}

Eigen::MatrixXd vandermonde(const MonomialSpec& spec, const std::vector<Vec2>& pts) {
  if (pts.empty()) throw std::invalid_argument("vandermonde needs at least one point");
  Eigen::MatrixXd V(pts.size(), spec.size());
  for (std::size_t i = 0; i < pts.size(); ++i) V.row(i) = eval_monomials(spec, pts[i]);
  return V;
}

double antiderivative_flux(const MonomialSpec& spec, int j, int k, const Vec2& pt) {
  const int a = spec.exponents[j][0];
  const int b = spec.exponents[j][1];
  // antiderivative taken along axis k only; the off-axis factor is the plain
  // monomial power (a denominator there would break div F = f at zero
  // exponents)
  if (k == 0) return (1.0 / spec.d) * ipow(pt.x, a + 1) / (a + 1) * ipow(pt.y, b);
  return (1.0 / spec.d) * ipow(pt.x, a) * ipow(pt.y, b + 1) / (b + 1);
}

Eigen::VectorXd moments_of_exponents(const Polygon& poly, const std::vector<Exponents>& exps) {
  int maxdeg = 0;
  for (const Exponents& e : exps) maxdeg = std::max(maxdeg, e[0] + e[1]);
  // F.n along a straight edge is degree maxdeg+1 in the edge parameter.
  const int ngl = (maxdeg + 3) / 2;
  std::vector<double> gx, gw;
  gauss_legendre(ngl, gx, gw);

  Eigen::VectorXd m = Eigen::VectorXd::Zero(exps.size());
  auto add_loop = [&](const Loop& loop) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& A = loop[i];
      const Vec2& B = loop[(i + 1) % n];
      const Vec2 d = B - A;
      // unscaled outward normal times edge length: (dy, -dx)
      const double nx = d.y, ny = -d.x;
      for (int q = 0; q < ngl; ++q) {
        const double t = 0.5 * (gx[q] + 1.0);
        const Vec2 pt = A + d * t;
        const double wq = 0.5 * gw[q];
        for (std::size_t j = 0; j < exps.size(); ++j) {
          const int a = exps[j][0], b = exps[j][1];
          const double f1 = 0.5 * ipow(pt.x, a + 1) / (a + 1) * ipow(pt.y, b);
          const double f2 = 0.5 * ipow(pt.x, a) * ipow(pt.y, b + 1) / (b + 1);
          m(j) += wq * (f1 * nx + f2 * ny);
        }
      }
    }
  };
  add_loop(poly.outer());
  for (const Loop& h : poly.holes()) add_loop(h);
  return m;
}

Eigen::VectorXd boundary_moments(const Polygon& poly, const MonomialSpec& spec) {
  return moments_of_exponents(poly, spec.exponents);
}

double moment_norm_sq(const Polygon& poly, const MonomialSpec& spec) {
  std::vector<Exponents> doubled;
  doubled.reserve(spec.exponents.size());
  for (const Exponents& e : spec.exponents) doubled.push_back({2 * e[0], 2 * e[1]});
  return moments_of_exponents(poly, doubled).sum();
}

}  // namespace shull
