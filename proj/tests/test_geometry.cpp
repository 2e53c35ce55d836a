#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "shull/geometry.hpp"

using namespace shull;
using namespace shull::testing;

TEST_CASE("signed area: square, holes, orientation") {
  CHECK(signed_area(unit_square()) == doctest::Approx(4.0));
  CHECK(signed_area(corpus("holed_square.txt")) == doctest::Approx(3.0));
  // reversed outer loop violates the CCW invariant
  CHECK_THROWS_AS(Polygon({{-1, -1}, {-1, 1}, {1, 1}, {1, -1}}), std::invalid_argument);
}

TEST_CASE("polygon construction rejects bad loops") {
  CHECK_THROWS(Polygon({{0, 0}, {1, 0}}));
  CHECK_THROWS(Polygon({{0, 0}, {0, 0}, {1, 0}, {1, 1}}));
  // bow tie self-intersects
  CHECK_THROWS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}

TEST_CASE("point_in_polygon basics and boundary exclusion") {
  const Polygon sq = unit_square();
  CHECK(point_in_polygon(sq, {0, 0}));
  CHECK_FALSE(point_in_polygon(sq, {2, 0}));
  CHECK_FALSE(point_in_polygon(sq, {1, 0}));  // on the edge counts as outside
  const Polygon holed = corpus("holed_square.txt");
  CHECK(point_in_polygon(holed, {0.75, 0.0}));
  CHECK_FALSE(point_in_polygon(holed, {0, 0}));  // inside the hole
}

TEST_CASE("point_in_polygon agrees with the winding-number oracle") {
  std::mt19937_64 rng(2024);
  for (const char* name : {"square.txt", "hexagon.txt", "t_hull.txt", "holed_square.txt",
                           "dom.txt", "lshape.txt"}) {
    const Polygon poly = corpus(name);
    std::uniform_real_distribution<double> ux(poly.bbox_min().x - 0.1, poly.bbox_max().x + 0.1);
    std::uniform_real_distribution<double> uy(poly.bbox_min().y - 0.1, poly.bbox_max().y + 0.1);
    int checked = 0;
    for (int k = 0; k < 10000; ++k) {
      const Vec2 p{ux(rng), uy(rng)};
      // skip the razor edge where the implementations legitimately differ
      bool near_edge = false;
      auto scan = [&](const Loop& loop) {
        for (std::size_t i = 0; i < loop.size(); ++i) {
          const Vec2 a = loop[i], b = loop[(i + 1) % loop.size()];
          const Vec2 ab = b - a;
          const double t = std::clamp((p - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
          if ((p - (a + ab * t)).norm() < 1e-9 * poly.diameter()) near_edge = true;
        }
      };
      scan(poly.outer());
      for (const Loop& h : poly.holes()) scan(h);
      if (near_edge) continue;
      ++checked;
      CHECK(point_in_polygon(poly, p) == winding_oracle(poly, p));
    }
    CHECK(checked > 9000);
  }
}

TEST_CASE("reflex vertices") {
  CHECK(reflex_vertices(corpus("hexagon.txt")).empty());
  const auto r = reflex_vertices(corpus("dom.txt"));
  REQUIRE(r.size() == 2);  // V6 and V9 of the ten-vertex concave demo domain
  CHECK(r[0] == 5);
  CHECK(r[1] == 8);
  CHECK(reflex_vertices(corpus("lshape.txt")).size() == 1);
}

TEST_CASE("hertel_mehlhorn: convex input stays whole") {
  const Polygon hex = corpus("hexagon.txt");
  for (std::size_t s = 0; s < 6; ++s) CHECK(hertel_mehlhorn(hex, s).pieces.size() == 1);
}

TEST_CASE("hertel_mehlhorn: start-vertex dependence on the demo domain") {
  const Polygon dom = corpus("dom.txt");
  CHECK(hertel_mehlhorn(dom, 0).pieces.size() == 4);
  CHECK(hertel_mehlhorn(dom, 8).pieces.size() == 2);
}

TEST_CASE("hertel_mehlhorn: pieces convex and area-conserving") {
  for (const char* name : {"dom.txt", "lshape.txt", "t_hull.txt"}) {
    const Polygon poly = corpus(name);
    const double eps = 1e-12 * poly.diameter() * poly.diameter();
    for (std::size_t s : {std::size_t(0), poly.outer().size() - 1}) {
      const ConvexPartition part = hertel_mehlhorn(poly, s);
      double area = 0.0;
      for (const Polygon& piece : part.pieces) {
        area += signed_area(piece);
        const Loop& v = piece.outer();
        for (std::size_t i = 0; i < v.size(); ++i)
          CHECK(cross(v[(i + v.size() - 1) % v.size()], v[i], v[(i + 1) % v.size()]) >= -eps);
      }
      CHECK(area == doctest::Approx(signed_area(poly)).epsilon(1e-9));
    }
  }
}

TEST_CASE("hertel_mehlhorn piece count obeys 1 + 2r") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Polygon poly = random_simple_polygon(rng);
    const std::size_t r = reflex_vertices(poly).size();
    const ConvexPartition part = hertel_mehlhorn(poly, trial % poly.outer().size());
    CHECK(part.pieces.size() <= 1 + 2 * r);
    double area = 0.0;
    for (const Polygon& piece : part.pieces) area += signed_area(piece);
    CHECK(area == doctest::Approx(signed_area(poly)).epsilon(1e-9));
  }
}

TEST_CASE("triangulate: counts and area conservation") {
  const auto sq = triangulate(unit_square());
  REQUIRE(sq.size() == 2);
  CHECK(triangle_area(sq[0]) == doctest::Approx(2.0));
  CHECK(triangle_area(sq[1]) == doctest::Approx(2.0));

  CHECK(triangulate(corpus("hexagon.txt")).size() == 4);

  const Polygon t = corpus("t_hull.txt");
  const auto tris = triangulate(t);
  CHECK(tris.size() == 6);
  double area = 0.0;
  for (const Triangle& tri : tris) area += triangle_area(tri);
  CHECK(area == doctest::Approx(signed_area(t)).epsilon(1e-9));
}

TEST_CASE("triangulate: holes handled by bridge cuts") {
  const Polygon holed = corpus("holed_square.txt");
  double area = 0.0;
  for (const Triangle& tri : triangulate(holed)) area += triangle_area(tri);
  CHECK(area == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("triangulate rejects degenerate input") {
  CHECK_THROWS(triangulate(Polygon({{0, 0}, {1, 1e-18}, {2, 0}, {1, 1e-19}})));
}

TEST_CASE("normalize_hull") {
  const double a = normalization_half_width();
  CHECK(a == doctest::Approx(0.46211715726000974));

  auto [nsq, map] = normalize_hull(unit_square());
  CHECK(map.scale == doctest::Approx(a));
  CHECK(nsq.bbox_max().x == doctest::Approx(a));
  CHECK(nsq.centroid().x == doctest::Approx(0.0).epsilon(1e-14));

  // already normalized: identity-like map
  auto [n2, map2] = normalize_hull(nsq);
  CHECK(map2.scale == doctest::Approx(1.0).epsilon(1e-12));

  // shifted square: translate composes -scale * centroid
  const Polygon far_square({{9, 9}, {11, 9}, {11, 11}, {9, 11}});
  auto [n3, map3] = normalize_hull(far_square);
  CHECK(map3.translate.x == doctest::Approx(-10.0 * map3.scale));
  CHECK(map3.translate.y == doctest::Approx(-10.0 * map3.scale));
  CHECK(n3.centroid().norm() < 1e-13);

  // round trip reproduces the original vertices
  for (std::size_t i = 0; i < far_square.outer().size(); ++i) {
    const Vec2 back = map3.inverse(n3.outer()[i]);
    CHECK((back - far_square.outer()[i]).norm() < 1e-12);
  }
}

TEST_CASE("affine map composes to identity") {
  const AffineMap map{0.37, {1.5, -2.25}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 100; ++k) {
    const Vec2 p{u(rng), u(rng)};
    CHECK((map.inverse(map.apply(p)) - p).norm() < 1e-14);
  }
}
