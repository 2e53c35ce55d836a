#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "shull/geometry.hpp"
#include "shull/io.hpp"

namespace shull::testing {

inline std::string data_path(const std::string& name) {
  return std::string(SHULL_DATA_DIR) + "/" + name;
}

inline Polygon corpus(const std::string& name) { return read_polygon_file(data_path(name)); }

inline Polygon normalized_square() {
  const double a = normalization_half_width();
  return Polygon({{-a, -a}, {a, -a}, {a, a}, {-a, a}});
}

inline Polygon unit_square() { return Polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

/// Independent point-in-polygon oracle: winding number by angle summation.
inline bool winding_oracle(const Polygon& poly, const Vec2& pt) {
  auto winding = [&](const Loop& loop) {
    double total = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec2 a = loop[i] - pt;
      const Vec2 b = loop[(i + 1) % loop.size()] - pt;
      total += std::atan2(a.x * b.y - a.y * b.x, a.dot(b));
    }
    return std::abs(total) > M_PI;  // ~2pi inside, ~0 outside
  };
  if (!winding(poly.outer())) return false;
  for (const Loop& h : poly.holes())
    if (winding(h)) return false;
  return true;
}

/// Random simple polygon: vertices at sorted angles around the origin with
/// random radii. Star-shaped about the origin whenever the angles spread
/// around it, which the retry loop enforces.
inline Polygon random_simple_polygon(std::mt19937_64& rng, int min_v = 5, int max_v = 12) {
  std::uniform_int_distribution<int> nv(min_v, max_v);
  std::uniform_real_distribution<double> radius(0.3, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (;;) {
    const int n = nv(rng);
    std::vector<double> angles(n);
    for (double& a : angles) a = ang(rng);
    std::sort(angles.begin(), angles.end());
    double min_gap = 2.0 * M_PI + angles.front() - angles.back();
    double max_gap = min_gap;
    for (int i = 1; i < n; ++i) {
      min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    }
    // well-separated angles and the origin inside: guarantees a simple CCW loop
    if (min_gap < 1e-2 || max_gap > M_PI - 0.1) continue;
    Loop loop(n);
    for (int i = 0; i < n; ++i) {
      const double r = radius(rng);
      loop[i] = {r * std::cos(angles[i]), r * std::sin(angles[i])};
    }
    return Polygon(std::move(loop));
  }
}

inline std::vector<Vec2> random_interior_points(const Polygon& poly, std::size_t count,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(poly.bbox_min().x, poly.bbox_max().x);
  std::uniform_real_distribution<double> uy(poly.bbox_min().y, poly.bbox_max().y);
  std::vector<Vec2> pts;
  while (pts.size() < count) {
    const Vec2 p{ux(rng), uy(rng)};
    if (point_in_polygon(poly, p)) pts.push_back(p);
  }
  return pts;
}

}  // namespace shull::testing
