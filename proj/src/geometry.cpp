#include "shull/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shull {

double Vec2::norm() const { return std::hypot(x, y); }

double cross(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double triangle_area(const Triangle& t) { return 0.5 * cross(t[0], t[1], t[2]); }

double loop_signed_area(const Loop& loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = loop[i];
    const Vec2& q = loop[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

namespace {

int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
  const double v = cross(a, b, c);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

// Proper (interior) crossing of segments ab and cd.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
  const int s1 = orient_sign(c, d, a, eps);
  const int s2 = orient_sign(c, d, b, eps);
  const int s3 = orient_sign(a, b, c, eps);
  const int s4 = orient_sign(a, b, d, eps);
  return s1 * s2 < 0 && s3 * s4 < 0;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

void check_loop_simple(const Loop& loop, double eps) {
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t i2 = (i + 1) % n;
      const std::size_t j2 = (j + 1) % n;
      if (j == i || j == i2 || j2 == i) continue;
      if (segments_cross(loop[i], loop[i2], loop[j], loop[j2], eps))
        throw std::invalid_argument("polygon loop self-intersects");
    }
  }
}

bool point_in_loop(const Loop& loop, const Vec2& pt) {
  // even-odd crossing test
  bool in = false;
  const std::size_t n = loop.size();
  std::size_t j = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if ((loop[i].y > pt.y) != (loop[j].y > pt.y)) {
      const double xin =
          (loop[j].x - loop[i].x) * (pt.y - loop[i].y) / (loop[j].y - loop[i].y) + loop[i].x;
      if (pt.x < xin) in = !in;
    }
    j = i;
  }
  return in;
}

double distance_to_loop(const Loop& loop, const Vec2& pt) {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i)
    d = std::min(d, point_segment_distance(pt, loop[i], loop[(i + 1) % n]));
  return d;
}

}  // namespace

Polygon::Polygon(Loop outer, std::vector<Loop> holes)
    : outer_(std::move(outer)), holes_(std::move(holes)) {
  auto check_basics = [](const Loop& loop) {
    if (loop.size() < 3) throw std::invalid_argument("polygon loop needs at least 3 vertices");
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 d = loop[(i + 1) % n] - loop[i];
      if (d.x == 0.0 && d.y == 0.0)
        throw std::invalid_argument("polygon loop has equal consecutive vertices");
    }
  };
  check_basics(outer_);
  for (const Loop& h : holes_) check_basics(h);

  bbox_min_ = bbox_max_ = outer_[0];
  for (const Vec2& v : outer_) {
    bbox_min_.x = std::min(bbox_min_.x, v.x);
    bbox_min_.y = std::min(bbox_min_.y, v.y);
    bbox_max_.x = std::max(bbox_max_.x, v.x);
    bbox_max_.y = std::max(bbox_max_.y, v.y);
  }
  diameter_ = (bbox_max_ - bbox_min_).norm();
  const double eps = 1e-12 * diameter_ * diameter_;

  if (loop_signed_area(outer_) <= 0.0)
    throw std::invalid_argument("outer loop must be counter-clockwise (positive area)");
  for (const Loop& h : holes_)
    if (loop_signed_area(h) >= 0.0)
      throw std::invalid_argument("hole loops must be clockwise (negative area)");

  check_loop_simple(outer_, eps);
  for (const Loop& h : holes_) check_loop_simple(h, eps);
  for (std::size_t a = 0; a < holes_.size(); ++a) {
    const Loop& h = holes_[a];
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Vec2& p = h[i];
      const Vec2& q = h[(i + 1) % h.size()];
      for (std::size_t j = 0; j < outer_.size(); ++j)
        if (segments_cross(p, q, outer_[j], outer_[(j + 1) % outer_.size()], eps))
          throw std::invalid_argument("hole crosses outer loop");
      for (std::size_t b = a + 1; b < holes_.size(); ++b)
        for (std::size_t j = 0; j < holes_[b].size(); ++j)
          if (segments_cross(p, q, holes_[b][j], holes_[b][(j + 1) % holes_[b].size()], eps))
            throw std::invalid_argument("holes cross each other");
    }
  }
}

Vec2 Polygon::centroid() const {
  double a6 = 0.0;
  Vec2 c{0.0, 0.0};
  auto accumulate = [&](const Loop& loop) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& p = loop[i];
      const Vec2& q = loop[(i + 1) % n];
      const double w = p.x * q.y - q.x * p.y;
      a6 += w;
      c.x += (p.x + q.x) * w;
      c.y += (p.y + q.y) * w;
    }
  };
  accumulate(outer_);
  for (const Loop& h : holes_) accumulate(h);
  if (a6 == 0.0) throw std::invalid_argument("zero-area polygon has no centroid");
  return {c.x / (3.0 * a6), c.y / (3.0 * a6)};
}

double signed_area(const Polygon& poly) {
  double a = loop_signed_area(poly.outer());
  for (const Loop& h : poly.holes()) a += loop_signed_area(h);
  return a;
}

bool point_in_polygon(const Polygon& poly, const Vec2& pt) {
  const double eps = 1e-12 * poly.diameter();
  if (distance_to_loop(poly.outer(), pt) < eps) return false;
  for (const Loop& h : poly.holes())
    if (distance_to_loop(h, pt) < eps) return false;
  if (!point_in_loop(poly.outer(), pt)) return false;
  for (const Loop& h : poly.holes())
    if (point_in_loop(h, pt)) return false;
  return true;
}

std::vector<std::size_t> reflex_vertices(const Polygon& poly) {
  if (poly.has_holes()) throw std::invalid_argument("reflex_vertices expects a hole-free polygon");
  const Loop& v = poly.outer();
  const std::size_t n = v.size();
  const double eps = 1e-12 * poly.diameter() * poly.diameter();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (cross(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) < -eps) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Hertel-Mehlhorn
// ---------------------------------------------------------------------------

namespace {

struct HalfEdgeGraph {
  const Loop& v;
  double eps;
  std::vector<std::vector<std::size_t>> out;  // outgoing neighbors per vertex, by angle

  HalfEdgeGraph(const Loop& verts, const std::vector<std::pair<std::size_t, std::size_t>>& diags,
                double eps_)
      : v(verts), eps(eps_), out(verts.size()) {
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
      out[i].push_back((i + 1) % n);
      out[(i + 1) % n].push_back(i);
    }
    for (auto [a, b] : diags) {
      out[a].push_back(b);
      out[b].push_back(a);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(out[i].begin(), out[i].end(), [&](std::size_t a, std::size_t b) {
        return angle_of(i, a) < angle_of(i, b);
      });
    }
  }

  double angle_of(std::size_t from, std::size_t to) const {
    return std::atan2(v[to].y - v[from].y, v[to].x - v[from].x);
  }

  // Next half-edge of an interior (counter-clockwise) face walk: from `to`,
  // take the outgoing edge clockwise-closest to the reversed edge.
  std::pair<std::size_t, std::size_t> next(std::size_t from, std::size_t to) const {
    const double back = angle_of(to, from);
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t best = from;
    for (std::size_t w : out[to]) {
      if (w == from && out[to].size() > 1) continue;
      double d = back - angle_of(to, w);
      d = std::fmod(d, 2 * M_PI);
      if (d < 0) d += 2 * M_PI;
      if (d == 0.0) d = 2 * M_PI;
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    return {to, best};
  }
};

bool diagonal_visible(const Loop& v, std::size_t i, std::size_t j,
                      const std::vector<std::pair<std::size_t, std::size_t>>& diags,
                      const Polygon& poly, double eps) {
  const std::size_t n = v.size();
  const std::size_t d = (i > j) ? i - j : j - i;
  if (d == 0 || d == 1 || d == n - 1) return false;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k + 1) % n;
    if (k == i || k == j || k2 == i || k2 == j) continue;
    if (segments_cross(v[i], v[j], v[k], v[k2], eps)) return false;
  }
  for (auto [a, b] : diags) {
    if (a == i || a == j || b == i || b == j) continue;
    if (segments_cross(v[i], v[j], v[a], v[b], eps)) return false;
  }
  const Vec2 mid = (v[i] + v[j]) * 0.5;
  return point_in_polygon(poly, mid);
}

// Piece loops as vertex-index cycles.
using IndexLoop = std::vector<std::size_t>;

IndexLoop merge_faces(const IndexLoop& f1, const IndexLoop& f2, std::size_t u, std::size_t w) {
  // f1 contains half-edge u->w, f2 contains w->u; drop the diagonal and join.
  auto path = [](const IndexLoop& f, std::size_t a, std::size_t b) {
    IndexLoop out;
    std::size_t i = std::find(f.begin(), f.end(), a) - f.begin();
    out.push_back(a);
    while (f[i] != b) {
      i = (i + 1) % f.size();
      out.push_back(f[i]);
    }
    return out;
  };
  IndexLoop p1 = path(f1, w, u);
  IndexLoop p2 = path(f2, u, w);
  p1.pop_back();
  p2.pop_back();
  p1.insert(p1.end(), p2.begin(), p2.end());
  return p1;
}

bool loop_convex(const Loop& v, const IndexLoop& f, double eps) {
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross(v[f[(i + n - 1) % n]], v[f[i]], v[f[(i + 1) % n]]) < -eps) return false;
  return true;
}

}  // namespace

ConvexPartition hertel_mehlhorn(const Polygon& poly, std::size_t start) {
  if (poly.has_holes())
    throw std::invalid_argument("hertel_mehlhorn expects a hole-free polygon");
  const Loop& v = poly.outer();
  const std::size_t n = v.size();
  if (start >= n) throw std::invalid_argument("start vertex out of range");
  const double eps = 1e-12 * poly.diameter() * poly.diameter();

  // Visit vertices in loop order from `start`, connecting each to every
  // visible vertex. This fills in a full triangulation.
  std::vector<std::pair<std::size_t, std::size_t>> diags;
  auto have = [&](std::size_t a, std::size_t b) {
    for (auto [x, y] : diags)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  for (std::size_t off = 0; off < n; ++off) {
    const std::size_t i = (start + off) % n;
    for (std::size_t off2 = 1; off2 < n; ++off2) {
      const std::size_t j = (i + off2) % n;
      if (have(i, j)) continue;
      if (diagonal_visible(v, i, j, diags, poly, eps)) diags.emplace_back(i, j);
    }
  }

  // Collect interior faces of boundary + diagonals.
  HalfEdgeGraph g(v, diags, eps);
  std::vector<IndexLoop> faces;
  {
    std::vector<std::pair<std::size_t, std::size_t>> all_edges;
    for (std::size_t i = 0; i < n; ++i) {
      all_edges.emplace_back(i, (i + 1) % n);
      all_edges.emplace_back((i + 1) % n, i);
    }
    for (auto [a, b] : diags) {
      all_edges.emplace_back(a, b);
      all_edges.emplace_back(b, a);
    }
    std::vector<std::pair<std::size_t, std::size_t>> visited;
    auto seen = [&](std::pair<std::size_t, std::size_t> e) {
      return std::find(visited.begin(), visited.end(), e) != visited.end();
    };
    for (auto e : all_edges) {
      if (seen(e)) continue;
      IndexLoop face;
      auto cur = e;
      while (!seen(cur)) {
        visited.push_back(cur);
        face.push_back(cur.first);
        cur = g.next(cur.first, cur.second);
      }
      Loop pts;
      for (std::size_t k : face) pts.push_back(v[k]);
      if (loop_signed_area(pts) > 0.0) faces.push_back(face);
    }
  }

  // Remove inessential diagonals in creation order.
  for (auto [a, b] : diags) {
    std::size_t i1 = faces.size(), i2 = faces.size();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const IndexLoop& fl = faces[f];
      for (std::size_t k = 0; k < fl.size(); ++k) {
        const std::size_t k2 = (k + 1) % fl.size();
        if (fl[k] == a && fl[k2] == b) i1 = f;
        if (fl[k] == b && fl[k2] == a) i2 = f;
      }
    }
    if (i1 >= faces.size() || i2 >= faces.size() || i1 == i2) continue;
    IndexLoop merged = merge_faces(faces[i1], faces[i2], a, b);
    if (loop_convex(v, merged, eps)) {
      if (i1 < i2) std::swap(i1, i2);
      faces.erase(faces.begin() + i1);
      faces.erase(faces.begin() + i2);
      faces.push_back(std::move(merged));
    }
  }

  ConvexPartition part{{}, poly};
  for (const IndexLoop& f : faces) {
    Loop pts;
    for (std::size_t k : f) pts.push_back(v[k]);
    part.pieces.emplace_back(std::move(pts));
  }
  return part;
}

// ---------------------------------------------------------------------------
// Triangulation
// ---------------------------------------------------------------------------

namespace {

// Splice hole loops into the outer loop through mutually visible bridge cuts.
Loop bridge_holes(const Polygon& poly, double eps) {
  Loop outer = poly.outer();
  std::vector<Loop> holes = poly.holes();
  // rightmost hole first
  std::sort(holes.begin(), holes.end(), [](const Loop& a, const Loop& b) {
    auto mx = [](const Loop& l) {
      double m = l[0].x;
      for (const Vec2& p : l) m = std::max(m, p.x);
      return m;
    };
    return mx(a) > mx(b);
  });
  for (const Loop& hole : holes) {
    std::size_t hi = 0;
    for (std::size_t i = 1; i < hole.size(); ++i)
      if (hole[i].x > hole[hi].x) hi = i;
    // nearest outer vertex visible from hole[hi]
    std::size_t best = outer.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < outer.size(); ++j) {
      bool ok = true;
      for (std::size_t k = 0; k < outer.size() && ok; ++k) {
        const std::size_t k2 = (k + 1) % outer.size();
        if (k == j || k2 == j) continue;
        if (segments_cross(hole[hi], outer[j], outer[k], outer[k2], eps)) ok = false;
      }
      for (std::size_t k = 0; k < hole.size() && ok; ++k) {
        const std::size_t k2 = (k + 1) % hole.size();
        if (k == hi || k2 == hi) continue;
        if (segments_cross(hole[hi], outer[j], hole[k], hole[k2], eps)) ok = false;
      }
      if (!ok) continue;
      const double d = (outer[j] - hole[hi]).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == outer.size()) throw std::invalid_argument("no visible bridge for hole");
    // outer[0..best], hole[hi..], hole[..hi], outer[best..]
    Loop joined(outer.begin(), outer.begin() + best + 1);
    for (std::size_t k = 0; k <= hole.size(); ++k) joined.push_back(hole[(hi + k) % hole.size()]);
    joined.insert(joined.end(), outer.begin() + best, outer.end());
    outer = std::move(joined);
  }
  return outer;
}

}  // namespace

std::vector<Triangle> triangulate(const Polygon& poly) {
  const double eps = 1e-12 * poly.diameter() * poly.diameter();
  Loop loop = poly.has_holes() ? bridge_holes(poly, eps) : poly.outer();

  std::vector<Triangle> tris;
  std::vector<Vec2> v(loop.begin(), loop.end());
  while (v.size() > 3) {
    const std::size_t n = v.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = v[(i + n - 1) % n];
      const Vec2& b = v[i];
      const Vec2& c = v[(i + 1) % n];
      if (cross(a, b, c) <= eps) continue;
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        const Vec2& p = v[j];
        // bridged hole loops duplicate the cut vertices; corners don't block
        auto same = [](const Vec2& u, const Vec2& w) { return u.x == w.x && u.y == w.y; };
        if (same(p, a) || same(p, b) || same(p, c)) continue;
        if (cross(a, b, p) > -eps && cross(b, c, p) > -eps && cross(c, a, p) > -eps) ear = false;
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      v.erase(v.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) throw std::invalid_argument("triangulation failed: degenerate polygon");
  }
  if (triangle_area({v[0], v[1], v[2]}) <= eps)
    throw std::invalid_argument("triangulation failed: degenerate polygon");
  tris.push_back({v[0], v[1], v[2]});
  return tris;
}

double normalization_half_width() { return std::tanh(0.5); }

std::pair<Polygon, AffineMap> normalize_hull(const Polygon& poly) {
  if (std::abs(signed_area(poly)) < 1e-300)
    throw std::invalid_argument("cannot normalize a zero-area polygon");
  const Vec2 c = poly.centroid();
  double ext = 0.0;
  auto scan = [&](const Loop& l) {
    for (const Vec2& p : l) {
      ext = std::max(ext, std::abs(p.x - c.x));
      ext = std::max(ext, std::abs(p.y - c.y));
    }
  };
  scan(poly.outer());
  for (const Loop& h : poly.holes()) scan(h);

  const double scale = normalization_half_width() / ext;
  AffineMap map{scale, {-scale * c.x, -scale * c.y}};

  auto map_loop = [&](const Loop& l) {
    Loop out;
    out.reserve(l.size());
    for (const Vec2& p : l) out.push_back(map.apply(p));
    return out;
  };
  std::vector<Loop> holes;
  for (const Loop& h : poly.holes()) holes.push_back(map_loop(h));
  return {Polygon(map_loop(poly.outer()), std::move(holes)), map};
}

}  // namespace shull
