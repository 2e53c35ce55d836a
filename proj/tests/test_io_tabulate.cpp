#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "shull/io.hpp"
#include "shull/tabulate.hpp"

using namespace shull;
using namespace shull::testing;

TEST_CASE("polygon text format round trip") {
  for (const char* name : {"square.txt", "holed_square.txt", "dom.txt"}) {
    const Polygon poly = corpus(name);
    std::stringstream ss;
    write_polygon(ss, poly);
    const Polygon back = read_polygon(ss);
    REQUIRE(back.outer().size() == poly.outer().size());
    REQUIRE(back.holes().size() == poly.holes().size());
    for (std::size_t i = 0; i < poly.outer().size(); ++i)
      CHECK((back.outer()[i] - poly.outer()[i]).norm() == 0.0);
  }
}

TEST_CASE("format_full survives a parse round trip bit-exactly") {
  for (double v : {1.0 / 3.0, 4.0, 1e-17, -0.12345678901234567, 2.2250738585072014e-308}) {
    const double back = std::stod(format_full(v));
    CHECK(back == v);
  }
}

TEST_CASE("polygon reader rejects malformed input") {
  std::stringstream bad1("3 1\n4\n0 0\n1 0\n1 1\n-0 1\n");
  CHECK_THROWS(read_polygon(bad1));
  std::stringstream bad2("2 1\n4\n0 0\n1 0\n");
  CHECK_THROWS(read_polygon(bad2));
}

TEST_CASE("master hull geometry") {
  const Polygon hex = master_hull(6);
  REQUIRE(hex.outer().size() == 6);
  for (const Vec2& v : hex.outer()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(master_hull(2));
}

TEST_CASE("tabulation record round trip and lookup") {
  const TabRecord rec = tabulate_master_hull(5, 3, Space::P);
  std::stringstream ss;
  write_tab_record(ss, rec);
  const TabRecord rec2 = tabulate_master_hull(4, 2, Space::Q);
  write_tab_record(ss, rec2);

  const auto records = read_tab_records(ss);
  REQUIRE(records.size() == 2);
  const auto hit = lookup(records, 2, 5, 3, Space::P, BasisRoute::Direct);
  REQUIRE(hit.has_value());
  CHECK((hit->a - rec.a).norm() == 0.0);
  CHECK((hit->U - rec.U).norm() == 0.0);
  CHECK(hit->fnorm == rec.fnorm);
  CHECK(hit->weights.size() == 10);

  CHECK_FALSE(lookup(records, 2, 5, 4, Space::P, BasisRoute::Direct).has_value());
  CHECK_FALSE(lookup(records, 2, 5, 3, Space::Q, BasisRoute::Direct).has_value());
}

TEST_CASE("basis rebuilt from a record matches the stored factors") {
  const TabRecord rec = tabulate_master_hull(6, 4, Space::P);
  const HullBasis b = basis_from_record(rec);
  CHECK((b.coefficients() - rec.a).norm() < 1e-12 * rec.a.norm());
  CHECK((b.modal_factor() - rec.modal_factor).norm() < 1e-12 * rec.modal_factor.norm());
  CHECK(b.fnorm() == doctest::Approx(rec.fnorm).epsilon(1e-12));
  // evaluable: partition of unity at the centroid
  CHECK(b.eval_nodal(rec.poly.centroid()).sum() == doctest::Approx(1.0).epsilon(1e-8));
}
