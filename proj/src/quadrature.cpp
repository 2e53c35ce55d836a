#include "shull/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace shull {

double QuadratureRule::sum_weights() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // one polish step for the weight
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule edge_rule(const Vec2& a, const Vec2& b, int degree) {
  if (degree < 0 || degree > 41) throw std::invalid_argument("edge_rule degree above table (41)");
  const Vec2 d = b - a;
  if (d.x == 0.0 && d.y == 0.0) throw std::invalid_argument("edge_rule endpoints coincide");
  const int n = (degree + 2) / 2;  // 2n-1 >= degree
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  const double half_len = 0.5 * d.norm();
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (x[i] + 1.0);
    rule.nodes.push_back(a + d * t);
    rule.weights.push_back(w[i] * half_len);
  }
  return rule;
}

QuadratureRule triangle_rule(const Triangle& tri, int degree) {
  if (degree < 0 || degree > 20) throw std::invalid_argument("triangle_rule degree above 20");
  const double area2 = cross(tri[0], tri[1], tri[2]);
  if (area2 == 0.0) throw std::invalid_argument("triangle_rule on a degenerate triangle");

  // Duffy map of the unit square onto the reference triangle:
  // (u,v) -> (u, v(1-u)), Jacobian (1-u). A degree-q integrand becomes
  // degree q+1 in u and q in v.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(std::max(nv, 1), xv, wv);

  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < (int)xv.size(); ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      const double r = u;
      const double s = v * (1.0 - u);
      // reference weight: GL weights on [0,1]^2 times Duffy Jacobian
      const double wref = 0.25 * wu[i] * wv[j] * (1.0 - u);
      const Vec2 p = tri[0] + (tri[1] - tri[0]) * r + (tri[2] - tri[0]) * s;
      rule.nodes.push_back(p);
      rule.weights.push_back(wref * area2);
    }
  }
  return rule;
}

QuadratureRule polygon_rule(const Polygon& poly, int degree) {
  if (degree < 0 || degree > 20) throw std::invalid_argument("polygon_rule degree above 20");
  QuadratureRule rule;
  rule.degree = degree;
  for (const Triangle& t : triangulate(poly)) {
    QuadratureRule tr = triangle_rule(t, degree);
    rule.nodes.insert(rule.nodes.end(), tr.nodes.begin(), tr.nodes.end());
    rule.weights.insert(rule.weights.end(), tr.weights.begin(), tr.weights.end());
  }
  return rule;
}

}  // namespace shull
