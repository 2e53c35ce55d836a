#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "shull/geometry.hpp"

namespace shull {

enum class Space { P, Q };

/// Exponent pair of a bivariate monomial x^a y^b.
using Exponents = std::array<int, 2>;

/// Monomial space f_P (total degree <= p) or f_Q (per-axis degree <= p),
/// enumerated in graded-lexicographic order: ascending total degree, ties
/// broken by descending first exponent. This ordering is fixed globally;
/// tabulated factors depend on it.
struct MonomialSpec {
  int d = 2;
  Space space = Space::P;
  int p = 0;
  std::vector<Exponents> exponents;

  MonomialSpec(Space s, int degree);
  MonomialSpec(int dim, Space s, int degree);

  int size() const { return static_cast<int>(exponents.size()); }
  /// Largest total degree present (p for P, 2p for Q).
  int max_total_degree() const;
};

/// Row f(pt): entry j = x^a y^b for exponent pair j.
Eigen::RowVectorXd eval_monomials(const MonomialSpec& spec, const Vec2& pt);

/// Rows d f/dx and d f/dy at pt.
void eval_monomial_gradient(const MonomialSpec& spec, const Vec2& pt, Eigen::RowVectorXd& fx,
                            Eigen::RowVectorXd& fy);

/// M x N Vandermonde matrix, row i = eval_monomials at pts[i].
Eigen::MatrixXd vandermonde(const MonomialSpec& spec, const std::vector<Vec2>& pts);

/// k-th component (k = 0 for x, 1 for y) of the flux F with div F = f_j:
/// F_k = (1/d) prod_i x_i^(d_i+delta_ik) / (d_i+delta_ik).
double antiderivative_flux(const MonomialSpec& spec, int j, int k, const Vec2& pt);

/// Moments of an explicit exponent list via the divergence-theorem boundary
/// reduction; hole loops contribute through their clockwise orientation.
Eigen::VectorXd moments_of_exponents(const Polygon& poly, const std::vector<Exponents>& exps);

/// m_j = integral of f_j over the polygon, all j in the spec.
Eigen::VectorXd boundary_moments(const Polygon& poly, const MonomialSpec& spec);

/// Integral over the polygon of sum_j f_j^2, via the squared-exponent
/// (degree 2p) moments.
double moment_norm_sq(const Polygon& poly, const MonomialSpec& spec);

}  // namespace shull
