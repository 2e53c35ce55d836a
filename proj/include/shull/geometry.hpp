#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace shull {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const;
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// z-component of (b-a) x (c-a); positive when a,b,c turn counter-clockwise.
double cross(const Vec2& a, const Vec2& b, const Vec2& c);

using Loop = std::vector<Vec2>;
using Triangle = std::array<Vec2, 3>;

double triangle_area(const Triangle& t);

/// Simple polygon with optional holes.
///
/// The outer loop is counter-clockwise, hole loops clockwise. Construction
/// validates loop sizes, orientation signs, consecutive-duplicate vertices
/// and self-intersection, and throws std::invalid_argument on violation.
class Polygon {
 public:
  explicit Polygon(Loop outer, std::vector<Loop> holes = {});

  const Loop& outer() const { return outer_; }
  const std::vector<Loop>& holes() const { return holes_; }
  bool has_holes() const { return !holes_.empty(); }

  /// Bounding-box diagonal, used as the scale for geometric tolerances.
  double diameter() const { return diameter_; }
  Vec2 bbox_min() const { return bbox_min_; }
  Vec2 bbox_max() const { return bbox_max_; }

  /// Area centroid (holes subtract).
  Vec2 centroid() const;

 private:
  Loop outer_;
  std::vector<Loop> holes_;
  Vec2 bbox_min_, bbox_max_;
  double diameter_ = 0.0;
};

/// y = scale * x + translate, scale > 0.
struct AffineMap {
  double scale = 1.0;
  Vec2 translate;

  Vec2 apply(const Vec2& p) const { return {scale * p.x + translate.x, scale * p.y + translate.y}; }
  Vec2 inverse(const Vec2& q) const {
    return {(q.x - translate.x) / scale, (q.y - translate.y) / scale};
  }
};

struct ConvexPartition {
  std::vector<Polygon> pieces;
  Polygon parent;
};

/// Shoelace area over all loops: outer-loop area minus hole areas.
double signed_area(const Polygon& poly);
double loop_signed_area(const Loop& loop);

/// Strict interior test. Points within 1e-12*diameter of any edge are
/// classified outside, so candidate generators never emit boundary points.
bool point_in_polygon(const Polygon& poly, const Vec2& pt);

/// Indices of vertices whose interior angle exceeds pi (hole-free polygons).
std::vector<std::size_t> reflex_vertices(const Polygon& poly);

/// Hertel-Mehlhorn convex partitioning of a hole-free simple polygon.
///
/// Diagonals are created by visiting vertices in loop order from `start` and
/// connecting each to every visible vertex; inessential diagonals are then
/// removed in creation order. Piece count is at most 1 + 2r for r reflex
/// vertices. The result depends on `start`.
ConvexPartition hertel_mehlhorn(const Polygon& poly, std::size_t start);

/// Ear-clipping triangulation. Holes are joined to the outer loop by bridge
/// cuts first. Throws on degenerate (collinear) input.
std::vector<Triangle> triangulate(const Polygon& poly);

/// Half-width of the normalization box, tanh(1/2).
double normalization_half_width();

/// Translate the centroid to the origin and scale so the bounding box fits in
/// |x_i| <= tanh(1/2). Returns the normalized polygon and the applied map.
std::pair<Polygon, AffineMap> normalize_hull(const Polygon& poly);

}  // namespace shull
