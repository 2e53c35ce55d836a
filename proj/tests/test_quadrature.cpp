#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "shull/moments.hpp"
#include "shull/quadrature.hpp"

using namespace shull;
using namespace shull::testing;

TEST_CASE("edge rule basics") {
  const QuadratureRule r1 = edge_rule({-1, 0}, {1, 0}, 1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0].x == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(2.0));

  const QuadratureRule r3 = edge_rule({-1, 0}, {1, 0}, 3);
  double ix = 0.0;
  for (std::size_t q = 0; q < r3.nodes.size(); ++q) ix += r3.weights[q] * r3.nodes[q].x * r3.nodes[q].x;
  CHECK(ix == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const Vec2 a{0.3, -0.2}, b{1.1, 2.5};
  const QuadratureRule rs = edge_rule(a, b, 5);
  CHECK(rs.sum_weights() == doctest::Approx((b - a).norm()).epsilon(1e-14));

  CHECK_THROWS(edge_rule({0, 0}, {1, 0}, 42));
  CHECK_THROWS(edge_rule({0, 0}, {0, 0}, 3));
}

TEST_CASE("gauss_legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 11, 21}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], deg);
      const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rule: reference integrals") {
  const Triangle ref{{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}};
  const QuadratureRule rc = triangle_rule(ref, 0);
  CHECK(rc.sum_weights() == doctest::Approx(0.5).epsilon(1e-14));

  const QuadratureRule r1 = triangle_rule(ref, 1);
  double ix = 0.0;
  for (std::size_t q = 0; q < r1.nodes.size(); ++q) ix += r1.weights[q] * r1.nodes[q].x;
  CHECK(ix == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

  // x^10 y^10 against the analytic value a! b! / (a+b+2)!
  const QuadratureRule r20 = triangle_rule(ref, 20);
  double v = 0.0;
  for (std::size_t q = 0; q < r20.nodes.size(); ++q)
    v += r20.weights[q] * std::pow(r20.nodes[q].x, 10) * std::pow(r20.nodes[q].y, 10);
  double exact = 1.0;
  for (int k = 1; k <= 10; ++k) exact *= static_cast<double>(k) / (k + 12);
  exact /= 11.0 * 12.0;  // 10!10!/22! = prod_k k/(k+12) / (11*12)
  CHECK(v == doctest::Approx(exact).epsilon(1e-10));

  for (double w : r20.weights) CHECK(w > 0.0);
  CHECK_THROWS(triangle_rule(ref, 21));
  CHECK_THROWS(triangle_rule(Triangle{{Vec2{0, 0}, Vec2{1, 0}, Vec2{2, 0}}}, 2));
}

TEST_CASE("polygon rule matches boundary moments on the corpus") {
  for (const char* name : {"square.txt", "hexagon.txt", "t_hull.txt", "holed_square.txt"}) {
    const Polygon poly = corpus(name);
    const MonomialSpec spec(Space::P, 10);
    const Eigen::VectorXd m = boundary_moments(poly, spec);
    const QuadratureRule rule = polygon_rule(poly, 10);
    Eigen::VectorXd mq = Eigen::VectorXd::Zero(spec.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      mq += rule.weights[q] * eval_monomials(spec, rule.nodes[q]).transpose();
    for (int j = 0; j < spec.size(); ++j)
      CHECK(mq(j) == doctest::Approx(m(j)).epsilon(1e-10));
  }
}

TEST_CASE("polygon rule: square constant") {
  const QuadratureRule rule = polygon_rule(unit_square(), 0);
  CHECK(rule.sum_weights() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS(polygon_rule(unit_square(), 21));
}
