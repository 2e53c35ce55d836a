#pragma once

#include <cstdint>
#include <vector>

#include "shull/geometry.hpp"
#include "shull/moments.hpp"

namespace shull {

/// Candidate points for Fekete selection. Every point lies strictly inside
/// the owning polygon and points are pairwise distinct (min distance
/// > 1e-10 * diameter); validated on construction.
struct PointSet {
  std::vector<Vec2> points;

  PointSet() = default;
  PointSet(std::vector<Vec2> pts, const Polygon& owner);

  std::size_t size() const { return points.size(); }

  /// Smallest pairwise distance; infinity for fewer than two points.
  double min_pairwise_distance() const;
};

/// Axis-aligned interior lattice over the bounding box, offset half a
/// spacing from the box edge and filtered by point_in_polygon.
PointSet fill_pattern(const Polygon& poly, double spacing);

/// Uniform random points inside the polygon (rejection sampling over the
/// bounding box), deterministic for a given seed.
PointSet random_interior(const Polygon& poly, std::size_t count, std::uint64_t seed);

/// Pairwise-repulsion smoothing with pseudo-time stepping. Cardinality is
/// preserved; points pushed outside are pulled back along their step.
PointSet gravitational_relax(const Polygon& poly, const PointSet& seed, int iters);

/// M = ceil(oversample * N) with default oversample 10; oversample >= 2.
std::size_t candidate_count_for(const MonomialSpec& spec, double oversample = 10.0);

/// Tensor grid of 1-D Chebyshev-Gauss points (roots of T_n, strictly
/// interior) scaled by half_width. Used as a structured candidate set on
/// square hulls.
std::vector<Vec2> chebyshev_tensor_grid(int n, double half_width);

/// Fill-pattern candidates with at least `count` points: the lattice spacing
/// starts at sqrt(area/count) and shrinks until the count is reached.
PointSet fill_at_least(const Polygon& poly, std::size_t count);

}  // namespace shull
