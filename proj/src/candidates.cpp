#include "shull/candidates.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace shull {

PointSet::PointSet(std::vector<Vec2> pts, const Polygon& owner) : points(std::move(pts)) {
  for (const Vec2& p : points)
    if (!point_in_polygon(owner, p))
      throw std::invalid_argument("PointSet contains a point outside its polygon");
  const double dmin = 1e-10 * owner.diameter();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if ((points[i] - points[j]).norm() <= dmin)
        throw std::invalid_argument("PointSet contains near-duplicate points");
}

double PointSet::min_pairwise_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      d = std::min(d, (points[i] - points[j]).norm());
  return d;
}

PointSet fill_pattern(const Polygon& poly, double spacing) {
  if (spacing <= 0.0) throw std::invalid_argument("fill_pattern spacing must be positive");
  if (spacing >= poly.diameter())
    throw std::invalid_argument("fill_pattern spacing exceeds the polygon diameter");
  const Vec2 lo = poly.bbox_min();
  const Vec2 hi = poly.bbox_max();
  std::vector<Vec2> pts;
  const int nx = static_cast<int>(std::floor((hi.x - lo.x) / spacing));
  const int ny = static_cast<int>(std::floor((hi.y - lo.y) / spacing));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      const Vec2 p{lo.x + (i + 0.5) * spacing, lo.y + (j + 0.5) * spacing};
      if (p.x >= hi.x || p.y >= hi.y) continue;
      if (point_in_polygon(poly, p)) pts.push_back(p);
    }
  if (pts.empty())
    throw std::invalid_argument("fill_pattern produced no interior points; use a smaller spacing");
  return PointSet(std::move(pts), poly);
}

PointSet random_interior(const Polygon& poly, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vec2 lo = poly.bbox_min();
  const Vec2 hi = poly.bbox_max();
  std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
  std::vector<Vec2> pts;
  std::size_t attempts = 0;
  while (pts.size() < count) {
    if (++attempts > 10000 * (count + 1))
      throw std::runtime_error("random_interior rejection sampling stalled");
    const Vec2 p{ux(rng), uy(rng)};
    if (point_in_polygon(poly, p)) pts.push_back(p);
  }
  return PointSet(std::move(pts), poly);
}

PointSet gravitational_relax(const Polygon& poly, const PointSet& seed, int iters) {
  if (seed.size() < 2) throw std::invalid_argument("gravitational_relax needs at least 2 points");
  if (iters < 0) throw std::invalid_argument("gravitational_relax iters must be >= 0");
  std::vector<Vec2> pts = seed.points;
  const std::size_t m = pts.size();
  const double area = std::abs(signed_area(poly));
  const double d0 = 1.2 * std::sqrt(area / static_cast<double>(m));
  const double step = 0.2 * d0;

  for (int it = 0; it < iters; ++it) {
    std::vector<Vec2> force(m, Vec2{0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const Vec2 d = pts[i] - pts[j];
        const double dist = d.norm();
        if (dist >= d0 || dist == 0.0) continue;
        const double f = (d0 - dist) / dist;
        force[i] = force[i] + d * (f / dist);
      }
    for (std::size_t i = 0; i < m; ++i) {
      Vec2 move = force[i] * step;
      // cap the kick so overlapping clusters separate without overshooting
      // past their neighbors
      const double len = move.norm();
      if (len > 0.5 * d0) move = move * (0.5 * d0 / len);
      Vec2 trial = pts[i] + move;
      double t = 1.0;
      // shrink the step until the point stays inside
      while (!point_in_polygon(poly, trial) && t > 1e-9) {
        t *= 0.5;
        trial = pts[i] + move * t;
      }
      if (point_in_polygon(poly, trial)) pts[i] = trial;
    }
  }
  return PointSet(std::move(pts), poly);
}

std::size_t candidate_count_for(const MonomialSpec& spec, double oversample) {
  if (oversample < 2.0) throw std::invalid_argument("oversample must be at least 2");
  return static_cast<std::size_t>(std::ceil(oversample * spec.size()));
}

std::vector<Vec2> chebyshev_tensor_grid(int n, double half_width) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = half_width * std::cos((2 * k + 1) * M_PI / (2 * n));
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pts.push_back({x[i], x[j]});
  return pts;
}

PointSet fill_at_least(const Polygon& poly, std::size_t count) {
  double spacing = std::sqrt(std::abs(signed_area(poly)) / static_cast<double>(count));
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      PointSet ps = fill_pattern(poly, spacing);
      if (ps.size() >= count) return ps;
    } catch (const std::invalid_argument&) {
      // too coarse for this polygon; shrink and retry
    }
    spacing *= 0.9;
  }
  throw std::runtime_error("fill_at_least could not reach the requested count");
}

}  // namespace shull
