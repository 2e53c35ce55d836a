#pragma once

#include <vector>

#include "shull/geometry.hpp"

namespace shull {

struct QuadratureRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  int degree = 0;  // guaranteed degree of exactness

  double sum_weights() const;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
/// exact for polynomials of degree 2n-1. Newton iteration on the
/// three-term recurrence; bit-reproducible.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// 1-D Gauss-Legendre rule mapped onto the segment [a,b]. degree <= 41.
QuadratureRule edge_rule(const Vec2& a, const Vec2& b, int degree);

/// Rule on a triangle via the collapsed tensor-product (Duffy) map. degree <= 20.
QuadratureRule triangle_rule(const Triangle& tri, int degree);

/// Rule on a polygon: triangulate, then concatenate triangle rules. degree <= 20.
QuadratureRule polygon_rule(const Polygon& poly, int degree);

}  // namespace shull
