#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "shull/basis.hpp"
#include "shull/quadrature.hpp"

using namespace shull;
using namespace shull::testing;

namespace {

HullBasis make_basis(const Polygon& normalized, Space space, int p,
                     BasisRoute route = BasisRoute::Direct) {
  const MonomialSpec spec(space, p);
  const PointSet cands = fill_at_least(normalized, candidate_count_for(spec));
  return build_basis(approximate_fekete(normalized, spec, cands), route);
}

Polygon normalized_corpus(const std::string& name) {
  return normalize_hull(corpus(name)).first;
}

}  // namespace

TEST_CASE("P1 triangle basis is barycentric") {
  const Polygon tri({{-0.3, -0.3}, {0.4, -0.25}, {0.0, 0.42}});
  const HullBasis b = make_basis(tri, Space::P, 1);
  // cardinal at its own nodes
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd psi = b.eval_nodal(b.fekete().points[i]);
    for (int j = 0; j < 3; ++j) CHECK(psi(j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
  }
  // affine partition of unity, nonnegative inside the node triangle hull
  const Eigen::VectorXd mid = b.eval_nodal({0.0, 0.0});
  CHECK(mid.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cardinality at the nodes, square P8") {
  const HullBasis b = make_basis(normalized_square(), Space::P, 8);
  double worst = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    const Eigen::VectorXd psi = b.eval_nodal(b.fekete().points[i]);
    for (int j = 0; j < b.size(); ++j)
      worst = std::max(worst, std::abs(psi(j) - (i == j ? 1.0 : 0.0)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("partition of unity and polynomial reproduction") {
  const HullBasis b = make_basis(normalized_corpus("t_hull.txt"), Space::P, 6);
  std::mt19937_64 rng(17);
  const auto samples = random_interior_points(b.poly(), 100, 23);
  for (const Vec2& s : samples)
    CHECK(b.eval_nodal(s).sum() == doctest::Approx(1.0).epsilon(1e-8));

  // random degree-p polynomial interpolates exactly
  const MonomialSpec& spec = b.spec();
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd coef(spec.size());
  for (int j = 0; j < spec.size(); ++j) coef(j) = u(rng);
  Eigen::VectorXd nodal(b.size());
  for (int i = 0; i < b.size(); ++i) nodal(i) = eval_monomials(spec, b.fekete().points[i]) * coef;
  for (const Vec2& s : samples) {
    const double exact = eval_monomials(spec, s) * coef;
    CHECK(b.eval_nodal(s).dot(nodal) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("direct and reusable routes agree") {
  const Polygon t = normalized_corpus("t_hull.txt");
  const MonomialSpec spec(Space::P, 10);
  const PointSet cands = fill_at_least(t, candidate_count_for(spec));
  const FeketeSet fs = approximate_fekete(t, spec, cands);
  const HullBasis direct = build_basis(fs, BasisRoute::Direct);
  const HullBasis reusable = build_basis(fs, BasisRoute::Reusable);
  double worst = 0.0;
  for (const Vec2& s : random_interior_points(t, 100, 5)) {
    worst = std::max(worst, (direct.eval_nodal(s) - reusable.eval_nodal(s)).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("nodal evaluation flags extrapolation") {
  const HullBasis b = make_basis(normalized_square(), Space::P, 3);
  bool flag = false;
  b.eval_nodal({0.0, 0.0}, &flag);
  CHECK_FALSE(flag);
  b.eval_nodal({0.9, 0.0}, &flag);
  CHECK(flag);
}

TEST_CASE("modal basis: exact discrete orthonormality at the nodes") {
  // psi-bar evaluated at the Fekete nodes is the unitary factor U, so the
  // unweighted nodal Gram is the identity to machine precision. This is the
  // identity the GFC transform, filtering and tail estimator rest on.
  const HullBasis b = make_basis(normalized_square(), Space::P, 5);
  const int N = b.size();
  Eigen::MatrixXd Gn = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd mb = b.eval_modal(b.fekete().points[i], N);
    Gn += mb * mb.transpose();
  }
  CHECK((Gn - Eigen::MatrixXd::Identity(N, N)).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("modal basis: L2 norms bounded by ||f||^2 / sigma_k^2") {
  // The L2(Omega) Gram of psi-bar is NOT the diagonal ||f||^2 delta /
  // (sigma sigma): that derivation commutes the outer product f^T f as a
  // scalar, and exact integration on generic nodes contradicts it at O(1).
  // What does hold (Cauchy-Schwarz) is the one-sided bound
  // int psi-bar_k^2 <= ||f||^2 / sigma_k^2. The machine-exact orthogonality
  // lives in the unweighted nodal product (previous test).
  const Polygon sq = normalized_square();
  for (int p : {3, 5, 8}) {
    const HullBasis b = make_basis(sq, Space::P, p);
    const int N = b.size();
    const QuadratureRule rule = polygon_rule(sq, std::min(2 * p, 20));
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      diag += rule.weights[q] * b.eval_modal(rule.nodes[q], N).cwiseAbs2();
    const double f2 = b.fnorm() * b.fnorm();
    for (int k = 0; k < N; ++k) {
      const double cap = f2 / (b.singular_values()(k) * b.singular_values()(k));
      CHECK(diag(k) <= cap * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("first mode has no sign change") {
  const HullBasis b = make_basis(normalized_square(), Space::P, 6);
  const double a = normalization_half_width() * 0.999;
  int pos = 0, neg = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const Vec2 p{-a + 2 * a * i / 49.0, -a + 2 * a * j / 49.0};
      const double v = b.eval_modal(p, 1)(0);
      (v >= 0 ? pos : neg)++;
    }
  CHECK((pos == 0 || neg == 0));
}

TEST_CASE("full modal reconstruction equals nodal") {
  const HullBasis b = make_basis(normalized_corpus("hexagon.txt"), Space::P, 6);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd nodal(b.size());
  for (int i = 0; i < b.size(); ++i) nodal(i) = u(rng);
  const GfcVector w = gfc_transform(b, nodal, b.size());
  for (const Vec2& s : random_interior_points(b.poly(), 30, 77)) {
    const double via_nodal = b.eval_nodal(s).dot(nodal);
    const double via_modal = b.eval_modal(s, b.size()).dot(w.w);
    CHECK(via_modal == doctest::Approx(via_nodal).epsilon(1e-8));
  }
}

TEST_CASE("orthonormal basis: sigma scaling exact, L2 norms near unity") {
  const Polygon sq = normalized_square();
  const int p = 8;
  const HullBasis b = make_basis(sq, Space::P, p);
  const int N = b.size();

  // pointwise relation psi-tilde = psi-bar * sigma / ||f|| holds by definition
  const Vec2 s{0.1, -0.2};
  const Eigen::VectorXd tb = b.eval_orthonormal(s, N);
  const Eigen::VectorXd mb = b.eval_modal(s, N);
  for (int k = 0; k < N; ++k)
    CHECK(tb(k) == doctest::Approx(mb(k) * b.singular_values()(k) / b.fnorm()).epsilon(1e-10));

  // L2 norms obey the one-sided bound int psi-tilde_k^2 <= 1; leading modes
  // approach it, trailing modes fall well short (the closed-form unit
  // normalization does not hold in L2)
  const QuadratureRule rule = polygon_rule(sq, std::min(2 * p, 20));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    diag += rule.weights[q] * b.eval_orthonormal(rule.nodes[q], N).cwiseAbs2();
  for (int k = 0; k < N; ++k) CHECK(diag(k) <= 1.0 + 1e-9);
  CHECK(diag(0) > 0.5);
}

TEST_CASE("gfc transform round trips") {
  const HullBasis b = make_basis(normalized_square(), Space::P, 7);
  const int N = b.size();

  // constants come back exactly
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(N);
  const auto [fones, tail0] = filter_modes(b, ones, N);
  CHECK((fones - ones).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(tail0 < 1e-12);

  // synthetic single mode: u = psi-bar_5 at the nodes has its energy at k=5
  Eigen::VectorXd u5(N);
  for (int i = 0; i < N; ++i) u5(i) = b.eval_modal(b.fekete().points[i], N)(4);
  const auto [rec5, unused] = filter_modes(b, u5, 5);
  CHECK((rec5 - u5).lpNorm<Eigen::Infinity>() < 1e-8);

  // random round trip
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> un(-1, 1);
  Eigen::VectorXd u(N);
  for (int i = 0; i < N; ++i) u(i) = un(rng);
  const auto [full, tail] = filter_modes(b, u, N);
  CHECK((full - u).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(tail < 1e-12);

  // nested tails shrink monotonically
  double prev = std::numeric_limits<double>::infinity();
  for (int km : {N / 4, N / 2, 3 * N / 4, N}) {
    const double t = filter_modes(b, u, km).second;
    CHECK(t <= prev + 1e-14);
    prev = t;
  }
}

TEST_CASE("gfc decay envelope") {
  const HullBasis b = make_basis(normalized_square(), Space::P, 10);
  const int N = b.size();

  // unit nodal vector: |w_k| <= 1 since U is unitary
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(N);
  e1(0) = 1.0;
  const GfcDecayReport r1 = gfc_decay_check(b, e1);
  CHECK(r1.w.lpNorm<Eigen::Infinity>() <= 1.0 + 1e-12);
  CHECK(r1.bound_holds);

  // smooth function: envelope holds with measured constant <= 1
  Eigen::VectorXd us(N);
  for (int i = 0; i < N; ++i) {
    const Vec2 p = b.fekete().points[i];
    us(i) = std::sin(M_PI * p.x) * std::cos(M_PI * p.y);
  }
  const GfcDecayReport r2 = gfc_decay_check(b, us);
  CHECK(r2.bound_holds);
  CHECK(r2.envelope_constant <= 1.0 + 1e-10);

  // sampling the top mode concentrates the spectrum at k = N
  Eigen::VectorXd utop(N);
  for (int i = 0; i < N; ++i) utop(i) = b.left_factor()(i, N - 1);
  const GfcDecayReport r3 = gfc_decay_check(b, utop);
  Eigen::Index kmax;
  r3.w.cwiseAbs().maxCoeff(&kmax);
  CHECK(kmax == N - 1);
}

TEST_CASE("lebesgue bound dominates the sampled operator norm") {
  for (const char* name : {"square.txt", "hexagon.txt", "t_hull.txt"}) {
    const HullBasis b = make_basis(normalized_corpus(name), Space::P, 6);
    const PointSet s = fill_at_least(b.poly(), 10000);
    CHECK(sampled_l2_operator_norm(b, s.points) <= lebesgue_bound(b) + 1e-6);
  }
}

TEST_CASE("lebesgue estimate: degree zero and slow growth") {
  const Polygon sq = normalized_square();
  const HullBasis b0 = make_basis(sq, Space::P, 0);
  const PointSet s = fill_at_least(sq, 10000);
  CHECK(lebesgue_estimate(b0, s.points) == doctest::Approx(1.0));

  const HullBasis b4 = make_basis(sq, Space::P, 4);
  const HullBasis b8 = make_basis(sq, Space::P, 8);
  const double l4 = lebesgue_estimate(b4, s.points);
  const double l8 = lebesgue_estimate(b8, s.points);
  CHECK(l8 < 50.0);
  CHECK(l8 < 10.0 * l4);
}

TEST_CASE("near-duplicate nodes explode the bound and trip the floor") {
  const Polygon tri({{-0.3, -0.3}, {0.4, -0.25}, {0.0, 0.42}});
  const MonomialSpec spec(Space::P, 1);
  std::vector<Vec2> nodes{{-0.1, -0.1}, {-0.1 + 3e-7, -0.1}, {0.05, 0.2}};
  const FeketeSet fs = fekete_from_nodes(tri, spec, nodes);
  const HullBasis b = build_basis(fs, BasisRoute::Direct);
  CHECK(lebesgue_bound(b) > 1e6);
  // an explicit floor above the degenerate sigma_min rejects the set
  CHECK(fs.svdS(2) < 1e-4);
  CHECK_THROWS_AS(build_basis(fs, BasisRoute::Direct, 1e-4), std::runtime_error);
}

TEST_CASE("weierstrass permutation") {
  const Polygon sq = normalized_square();
  const int p = 8;
  const HullBasis b = make_basis(sq, Space::P, p);
  const int N = b.size();
  const QuadratureRule rule = polygon_rule(sq, std::min(2 * p + 2, 20));

  // u = psi-tilde_3: W_j = integral f_j psi-tilde_3
  Eigen::VectorXd W3 = Eigen::VectorXd::Zero(N);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = b.eval_orthonormal(rule.nodes[q], N)(2);
    W3 += rule.weights[q] * u * eval_monomials(b.spec(), rule.nodes[q]).transpose();
  }
  CHECK(weierstrass_permutation(b, W3)[0] == 2);

  // random smooth u: partial sums of the permuted orthonormal expansion have
  // non-increasing L2 error
  auto fn = [](const Vec2& p2) { return std::sin(2.1 * p2.x + 0.3) * std::cos(1.7 * p2.y); };
  Eigen::VectorXd W = Eigen::VectorXd::Zero(N);
  double unorm2 = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = fn(rule.nodes[q]);
    W += rule.weights[q] * u * eval_monomials(b.spec(), rule.nodes[q]).transpose();
    unorm2 += rule.weights[q] * u * u;
  }
  const std::vector<int> perm = weierstrass_permutation(b, W);
  // coefficients <u, psi-tilde_k> = (W . V_(k)) / ||f||
  const Eigen::VectorXd wt = b.fekete().svdV.transpose() * W / b.fnorm();
  // true quadrature L2 error of the growing permuted expansion; the greedy
  // order keeps it non-increasing apart from isolated roundoff-level wiggles
  std::vector<double> partial(rule.nodes.size(), 0.0);
  const double u0 = std::sqrt(unorm2);
  double prev = u0;
  int increases = 0;
  double last = u0;
  for (int m = 0; m < N; ++m) {
    double err2 = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      partial[q] += wt(perm[m]) * b.eval_orthonormal(rule.nodes[q], N)(perm[m]);
      const double diff = partial[q] - fn(rule.nodes[q]);
      err2 += rule.weights[q] * diff * diff;
    }
    const double err = std::sqrt(err2);
    if (err > prev * (1.0 + 1e-6)) ++increases;
    prev = err;
    last = err;
  }
  CHECK(increases <= 2);
  CHECK(last < u0);
}

TEST_CASE("spectral convergence of interpolation on the T-hull") {
  const auto [t, map] = normalize_hull(corpus("t_hull.txt"));
  std::vector<double> errs;
  for (int p : {4, 8, 12}) {
    const HullBasis b = make_basis(t, Space::P, p);
    Eigen::VectorXd un(b.size());
    for (int i = 0; i < b.size(); ++i) {
      const Vec2 phys = map.inverse(b.fekete().points[i]);
      un(i) = std::sin(2 * M_PI * phys.x) * std::sin(2 * M_PI * phys.y);
    }
    const QuadratureRule rule = polygon_rule(t, 20);
    double err2 = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Vec2 phys = map.inverse(rule.nodes[q]);
      const double ue = std::sin(2 * M_PI * phys.x) * std::sin(2 * M_PI * phys.y);
      const double uh = b.eval_nodal(rule.nodes[q]).dot(un);
      err2 += rule.weights[q] * (uh - ue) * (uh - ue);
    }
    errs.push_back(std::sqrt(err2));
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  // superlinear: successive log-drops grow
  CHECK(std::log(errs[1] / errs[2]) > std::log(errs[0] / errs[1]));
}
