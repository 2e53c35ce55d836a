#include "shull/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "shull/parallel.hpp"
#include "shull/quadrature.hpp"

namespace shull {

Eigen::Matrix3d AcousticsModel::A1() const {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  A(0, 1) = rho0;
  A(1, 0) = c0 * c0 / rho0;
  return A;
}

Eigen::Matrix3d AcousticsModel::A2() const {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  A(0, 2) = rho0;
  A(2, 0) = c0 * c0 / rho0;
  return A;
}

Eigen::Matrix3d AcousticsModel::An(const Vec2& n) const { return n.x * A1() + n.y * A2(); }

Eigen::Matrix3d AcousticsModel::abs_An(const Vec2& n) const {
  Eigen::EigenSolver<Eigen::Matrix3d> es(An(n));
  const Eigen::Matrix3d R = es.eigenvectors().real();
  const Eigen::Vector3d lam = es.eigenvalues().real();
  return R * lam.cwiseAbs().asDiagonal() * R.inverse();
}

StateFn benchmark_exact_state() {
  return [](const Vec2& p) {
    return Eigen::Vector3d(std::cos(M_PI * p.x) * std::cos(M_PI * p.y), p.x * p.x + p.y * p.y,
                           p.x - p.y);
  };
}

StateFn manufactured_source(const AcousticsModel& model, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("manufactured_source needs dt > 0");
  const Eigen::Matrix3d A1 = model.A1();
  const Eigen::Matrix3d A2 = model.A2();
  return [A1, A2, dt](const Vec2& p) {
    const Eigen::Vector3d u(std::cos(M_PI * p.x) * std::cos(M_PI * p.y), p.x * p.x + p.y * p.y,
                            p.x - p.y);
    const Eigen::Vector3d ux(-M_PI * std::sin(M_PI * p.x) * std::cos(M_PI * p.y), 2.0 * p.x, 1.0);
    const Eigen::Vector3d uy(-M_PI * std::cos(M_PI * p.x) * std::sin(M_PI * p.y), 2.0 * p.y, -1.0);
    return Eigen::Vector3d(u / dt + A1 * ux + A2 * uy);
  };
}

double HullMesh::min_edge_length() const {
  double h = std::numeric_limits<double>::infinity();
  for (const MeshEdge& e : edges) h = std::min(h, (e.b - e.a).norm());
  return h;
}

// ---------------------------------------------------------------------------
// Structured meshes
// ---------------------------------------------------------------------------

namespace {

void normalize_all(HullMesh& mesh) {
  mesh.normalized.clear();
  mesh.maps.clear();
  for (const Polygon& h : mesh.hulls) {
    auto [np, map] = normalize_hull(h);
    mesh.normalized.push_back(std::move(np));
    mesh.maps.push_back(map);
  }
}

}  // namespace

HullMesh structured_quad_mesh(int nx, int ny, bool periodic, EdgeBC bc) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh needs at least one cell per direction");
  HullMesh mesh;
  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = -1.0 + 2.0 * i / nx;
  for (int j = 0; j <= ny; ++j) ys[j] = -1.0 + 2.0 * j / ny;

  auto cell = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.hulls.emplace_back(Loop{{xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]},
                                   {xs[i], ys[j + 1]}});

  // local edges: 0 bottom, 1 right, 2 top, 3 left
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // right interface
      if (i + 1 < nx) {
        mesh.edges.push_back({cell(i, j), 1, cell(i + 1, j), 3,
                              {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]}, EdgeBC::Interior});
      } else if (periodic) {
        MeshEdge e{cell(i, j), 1, cell(0, j), 3, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]},
                   EdgeBC::Interior};
        e.right_shift = {-2.0, 0.0};
        mesh.edges.push_back(e);
      } else {
        mesh.edges.push_back({cell(i, j), 1, -1, -1, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]}, bc});
      }
      // top interface
      if (j + 1 < ny) {
        mesh.edges.push_back({cell(i, j), 2, cell(i, j + 1), 0,
                              {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]}, EdgeBC::Interior});
      } else if (periodic) {
        MeshEdge e{cell(i, j), 2, cell(i, 0), 0, {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]},
                   EdgeBC::Interior};
        e.right_shift = {0.0, -2.0};
        mesh.edges.push_back(e);
      } else {
        mesh.edges.push_back({cell(i, j), 2, -1, -1, {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]}, bc});
      }
      // outer bottom / left only on the domain boundary
      if (j == 0 && !periodic)
        mesh.edges.push_back({cell(i, j), 0, -1, -1, {xs[i], ys[j]}, {xs[i + 1], ys[j]}, bc});
      if (i == 0 && !periodic)
        mesh.edges.push_back({cell(i, j), 3, -1, -1, {xs[i], ys[j + 1]}, {xs[i], ys[j]}, bc});
    }
  normalize_all(mesh);
  return mesh;
}

HullMesh structured_tri_mesh(int nx, int ny, bool periodic, EdgeBC bc) {
  if (periodic) throw std::invalid_argument("periodic triangle meshes are not needed here");
  HullMesh mesh;
  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = -1.0 + 2.0 * i / nx;
  for (int j = 0; j <= ny; ++j) ys[j] = -1.0 + 2.0 * j / ny;

  // cell (i,j): lower triangle 2*(j*nx+i), upper 2*(j*nx+i)+1; the quad is
  // diagonalized from its lower-left to upper-right corner.
  auto lower = [&](int i, int j) { return 2 * (j * nx + i); };
  auto upper = [&](int i, int j) { return 2 * (j * nx + i) + 1; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 v00{xs[i], ys[j]}, v10{xs[i + 1], ys[j]}, v11{xs[i + 1], ys[j + 1]},
          v01{xs[i], ys[j + 1]};
      mesh.hulls.emplace_back(Loop{v00, v10, v11});  // edges: 0 bottom, 1 right, 2 diagonal
      mesh.hulls.emplace_back(Loop{v00, v11, v01});  // edges: 0 diagonal, 1 top, 2 left
      mesh.edges.push_back({lower(i, j), 2, upper(i, j), 0, v11, v00, EdgeBC::Interior});
      if (i + 1 < nx)
        mesh.edges.push_back({lower(i, j), 1, upper(i + 1, j), 2, v10, v11, EdgeBC::Interior});
      else
        mesh.edges.push_back({lower(i, j), 1, -1, -1, v10, v11, bc});
      if (j + 1 < ny)
        mesh.edges.push_back({upper(i, j), 1, lower(i, j + 1), 0, v11, v01, EdgeBC::Interior});
      else
        mesh.edges.push_back({upper(i, j), 1, -1, -1, v11, v01, bc});
      if (j == 0) mesh.edges.push_back({lower(i, j), 0, -1, -1, v00, v10, bc});
      if (i == 0) mesh.edges.push_back({upper(i, j), 2, -1, -1, v01, v00, bc});
    }
  normalize_all(mesh);
  return mesh;
}

void build_hull_bases(HullMesh& mesh, Space space, int p, double oversample, SelectMethod method) {
  mesh.bases.clear();
  const MonomialSpec spec(space, p);
  std::vector<std::optional<HullBasis>> slots(mesh.hulls.size());
  parallel_for(mesh.hulls.size(), [&](std::size_t h) {
    const Polygon& np = mesh.normalized[h];
    const PointSet cands = fill_at_least(np, candidate_count_for(spec, oversample));
    slots[h].emplace(build_basis(approximate_fekete(np, spec, cands, method), BasisRoute::Direct));
  });
  mesh.bases.reserve(slots.size());
  for (std::optional<HullBasis>& s : slots) mesh.bases.push_back(std::move(*s));
}

void build_lagrange_bases(HullMesh& mesh, int p) {
  if (p < 1) throw std::invalid_argument("Lagrange bases need p >= 1");
  mesh.bases.clear();
  const MonomialSpec spec(Space::P, p);
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const Polygon& np = mesh.normalized[h];
    if (np.outer().size() != 3)
      throw std::invalid_argument("build_lagrange_bases expects a triangulated mesh");
    const Vec2 A = np.outer()[0], B = np.outer()[1], C = np.outer()[2];
    std::vector<Vec2> nodes;
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p - i; ++j) {
        const double l1 = static_cast<double>(i) / p;
        const double l2 = static_cast<double>(j) / p;
        nodes.push_back(A + (B - A) * l1 + (C - A) * l2);
      }
    mesh.bases.push_back(
        build_basis(fekete_from_nodes(np, spec, std::move(nodes)), BasisRoute::Direct));
  }
}

// ---------------------------------------------------------------------------
// DLS
// ---------------------------------------------------------------------------

std::size_t DlsSystem::total_unknowns() const {
  std::size_t n = 0;
  for (const Eigen::MatrixXd& d : diag) n += d.rows();
  return n;
}

double DlsSystem::symmetry_defect() const {
  double num = 0.0, den = 0.0;
  for (const Eigen::MatrixXd& d : diag) {
    num += (d - d.transpose()).squaredNorm();
    den += d.squaredNorm();
  }
  for (std::size_t i = 0; i < off.size(); ++i) {
    den += off[i].B.squaredNorm();
    // match the transposed block
    bool found = false;
    for (std::size_t j = 0; j < off.size(); ++j)
      if (off[j].row == off[i].col && off[j].col == off[i].row) {
        num += 0.5 * (off[i].B - off[j].B.transpose()).squaredNorm();
        found = true;
        break;
      }
    if (!found) num += off[i].B.squaredNorm();
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

std::vector<Eigen::VectorXd> DlsSystem::apply(const std::vector<Eigen::VectorXd>& x) const {
  std::vector<Eigen::VectorXd> y(diag.size());
  for (std::size_t h = 0; h < diag.size(); ++h) y[h] = diag[h] * x[h];
  for (const OffBlock& b : off) y[b.row] += b.B * x[b.col];
  return y;
}

namespace {

// Basis evaluation rows for assembly: values and physical-gradient rows.
struct BasisEval {
  Eigen::VectorXd psi, dpx, dpy;
};

BasisEval eval_for(const HullMesh& mesh, int h, const Vec2& phys, DlsBasisKind kind) {
  const HullBasis& b = mesh.bases[h];
  const Vec2 q = mesh.to_normalized(h, phys);
  const double s = mesh.maps[h].scale;
  BasisEval e;
  Eigen::VectorXd dx, dy;
  if (kind == DlsBasisKind::Nodal) {
    e.psi = b.eval_nodal(q);
    b.eval_nodal_grad(q, dx, dy);
  } else {
    e.psi = b.eval_modal(q, b.size());
    b.eval_modal_grad(q, b.size(), dx, dy);
  }
  e.dpx = s * dx;
  e.dpy = s * dy;
  return e;
}

}  // namespace

DlsSystem assemble_dls(const HullMesh& mesh, const AcousticsModel& model, double dt, double alpha,
                       const StateFn& source, const StateFn& boundary_state, DlsBasisKind kind) {
  if (mesh.bases.size() != mesh.hulls.size())
    throw std::invalid_argument("assemble_dls: build bases first");
  if (alpha < 0.0) throw std::invalid_argument("assemble_dls needs alpha >= 0");
  const std::size_t nh = mesh.hulls.size();
  const Eigen::Matrix3d A1 = model.A1();
  const Eigen::Matrix3d A2 = model.A2();

  DlsSystem sys;
  sys.alpha = alpha;
  sys.dt = dt;
  sys.kind = kind;
  sys.diag.resize(nh);
  sys.rhs.resize(nh);

  // interior least-squares blocks
  parallel_for(nh, [&](std::size_t h) {
    const int N = mesh.bases[h].size();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3 * N, 3 * N);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(3 * N);
    const int deg = std::min(2 * mesh.bases[h].spec().p, 20);
    const QuadratureRule rule = polygon_rule(mesh.hulls[h], deg);
    Eigen::MatrixXd L(3, 3 * N);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const BasisEval e = eval_for(mesh, h, rule.nodes[q], kind);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) {
          Eigen::Vector3d col = e.dpx(j) * A1.col(c) + e.dpy(j) * A2.col(c);
          col(c) += e.psi(j) / dt;
          L.col(3 * j + c) = col;
        }
      const double w = rule.weights[q];
      D.selfadjointView<Eigen::Lower>().rankUpdate(L.transpose(), w);
      r += w * (L.transpose() * source(rule.nodes[q]));
    }
    sys.diag[h] = D.selfadjointView<Eigen::Lower>();
    sys.rhs[h] = r;
  });

  // jump terms
  auto scatter = [](Eigen::MatrixXd& M, const Eigen::VectorXd& pa, const Eigen::VectorXd& pb,
                    double w) {
    for (int i = 0; i < pa.size(); ++i)
      for (int j = 0; j < pb.size(); ++j) {
        const double v = w * pa(i) * pb(j);
        M(3 * i + 0, 3 * j + 0) += v;
        M(3 * i + 1, 3 * j + 1) += v;
        M(3 * i + 2, 3 * j + 2) += v;
      }
  };

  for (const MeshEdge& e : mesh.edges) {
    const int L = e.hull_left;
    const int pL = mesh.bases[L].spec().p;
    const int pR = e.hull_right >= 0 ? mesh.bases[e.hull_right].spec().p : pL;
    const QuadratureRule rule = edge_rule(e.a, e.b, 2 * std::max(pL, pR) + 1);
    if (e.hull_right >= 0) {
      const int R = e.hull_right;
      Eigen::MatrixXd BLR = Eigen::MatrixXd::Zero(3 * mesh.bases[L].size(), 3 * mesh.bases[R].size());
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double w = alpha * rule.weights[q];
        const BasisEval eL = eval_for(mesh, L, rule.nodes[q], kind);
        const BasisEval eR = eval_for(mesh, R, rule.nodes[q] + e.right_shift, kind);
        scatter(sys.diag[L], eL.psi, eL.psi, w);
        scatter(sys.diag[R], eR.psi, eR.psi, w);
        scatter(BLR, eL.psi, eR.psi, -w);
      }
      sys.off.push_back({L, R, BLR});
      sys.off.push_back({R, L, BLR.transpose()});
    } else if (e.bc == EdgeBC::ExactState) {
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double w = alpha * rule.weights[q];
        const BasisEval eL = eval_for(mesh, L, rule.nodes[q], kind);
        scatter(sys.diag[L], eL.psi, eL.psi, w);
        const Eigen::Vector3d g = boundary_state(rule.nodes[q]);
        for (int i = 0; i < eL.psi.size(); ++i)
          for (int c = 0; c < 3; ++c) sys.rhs[L](3 * i + c) += w * eL.psi(i) * g(c);
      }
    }
    // ZeroFlux boundary edges impose no jump in the least-squares functional.
  }
  return sys;
}

std::vector<Eigen::VectorXd> solve_dls(const DlsSystem& sys, double tol, int maxit) {
  const std::size_t nh = sys.diag.size();
  std::vector<Eigen::LLT<Eigen::MatrixXd>> prec(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    prec[h].compute(sys.diag[h]);
    if (prec[h].info() != Eigen::Success)
      throw std::runtime_error("block-Jacobi preconditioner: diagonal block not SPD");
  }

  auto dot = [&](const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
    double s = 0.0;
    for (std::size_t h = 0; h < nh; ++h) s += a[h].dot(b[h]);
    return s;
  };

  std::vector<Eigen::VectorXd> x(nh), r = sys.rhs, z(nh), p(nh);
  for (std::size_t h = 0; h < nh; ++h) x[h] = Eigen::VectorXd::Zero(sys.rhs[h].size());
  const double bnorm = std::sqrt(dot(r, r));
  if (bnorm == 0.0) return x;
  for (std::size_t h = 0; h < nh; ++h) z[h] = prec[h].solve(r[h]);
  p = z;
  double rz = dot(r, z);

  for (int it = 0; it < maxit; ++it) {
    const std::vector<Eigen::VectorXd> q = sys.apply(p);
    const double pq = dot(p, q);
    if (!std::isfinite(pq) || pq <= 0.0)
      throw std::runtime_error("conjugate gradient failed: system is not symmetric positive definite");
    const double a = rz / pq;
    for (std::size_t h = 0; h < nh; ++h) {
      x[h] += a * p[h];
      r[h] -= a * q[h];
    }
    if (std::sqrt(dot(r, r)) <= tol * bnorm) return x;
    for (std::size_t h = 0; h < nh; ++h) z[h] = prec[h].solve(r[h]);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t h = 0; h < nh; ++h) p[h] = z[h] + beta * p[h];
  }
  throw std::runtime_error("conjugate gradient did not converge: residual " +
                           std::to_string(std::sqrt(dot(r, r)) / bnorm));
}

double dls_l2_error(const HullMesh& mesh, const std::vector<Eigen::VectorXd>& sol,
                    const StateFn& exact) {
  double err2 = 0.0;
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const int N = mesh.bases[h].size();
    const int deg = std::min(2 * mesh.bases[h].spec().p + 4, 20);
    const QuadratureRule rule = polygon_rule(mesh.hulls[h], deg);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd psi = mesh.bases[h].eval_nodal(mesh.to_normalized(h, rule.nodes[q]));
      Eigen::Vector3d uh = Eigen::Vector3d::Zero();
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) uh(c) += psi(j) * sol[h](3 * j + c);
      err2 += rule.weights[q] * (uh - exact(rule.nodes[q])).squaredNorm();
    }
  }
  return std::sqrt(err2);
}

// ---------------------------------------------------------------------------
// DG
// ---------------------------------------------------------------------------

DgOperator::DgOperator(const HullMesh& mesh, AcousticsModel model, StateFn boundary_state)
    : mesh_(&mesh), model_(model), boundary_state_(std::move(boundary_state)) {
  if (mesh.bases.size() != mesh.hulls.size())
    throw std::invalid_argument("DgOperator: build bases first");
  mass_.resize(mesh.hulls.size());
  mass_llt_.resize(mesh.hulls.size());
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const int N = mesh.bases[h].size();
    const int deg = std::min(2 * mesh.bases[h].spec().p, 20);
    const QuadratureRule rule = polygon_rule(mesh.hulls[h], deg);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd psi = mesh.bases[h].eval_nodal(mesh.to_normalized(h, rule.nodes[q]));
      M.selfadjointView<Eigen::Lower>().rankUpdate(psi, rule.weights[q]);
    }
    mass_[h] = M.selfadjointView<Eigen::Lower>();
    mass_llt_[h].compute(mass_[h]);
    if (mass_llt_[h].info() != Eigen::Success)
      throw std::runtime_error("DG mass matrix is not positive definite");
  }
}

std::vector<Eigen::VectorXd> DgOperator::residual(const std::vector<Eigen::VectorXd>& state) const {
  const HullMesh& mesh = *mesh_;
  const Eigen::Matrix3d A1 = model_.A1();
  const Eigen::Matrix3d A2 = model_.A2();
  std::vector<Eigen::VectorXd> R(mesh.hulls.size());

  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const int N = mesh.bases[h].size();
    R[h] = Eigen::VectorXd::Zero(3 * N);
    const double s = mesh.maps[h].scale;
    const int deg = std::min(2 * mesh.bases[h].spec().p, 20);
    const QuadratureRule rule = polygon_rule(mesh.hulls[h], deg);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Vec2 nq = mesh.to_normalized(h, rule.nodes[q]);
      const Eigen::VectorXd psi = mesh.bases[h].eval_nodal(nq);
      Eigen::VectorXd dx, dy;
      mesh.bases[h].eval_nodal_grad(nq, dx, dy);
      Eigen::Vector3d U = Eigen::Vector3d::Zero();
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) U(c) += psi(j) * state[h](3 * j + c);
      const Eigen::Vector3d F1 = A1 * U;
      const Eigen::Vector3d F2 = A2 * U;
      const double w = rule.weights[q];
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c)
          R[h](3 * j + c) += w * s * (dx(j) * F1(c) + dy(j) * F2(c));
    }
  }

  for (const MeshEdge& e : mesh.edges) {
    const int L = e.hull_left;
    const int NL = mesh.bases[L].size();
    const Vec2 d = e.b - e.a;
    const double len = d.norm();
    const Vec2 n{d.y / len, -d.x / len};
    if (e.bc == EdgeBC::ZeroFlux && e.hull_right < 0) continue;
    const Eigen::Matrix3d An = model_.An(n);
    const Eigen::Matrix3d Aabs = model_.abs_An(n);
    const Eigen::Matrix3d Ap = 0.5 * (An + Aabs);
    const Eigen::Matrix3d Am = 0.5 * (An - Aabs);
    const int pL = mesh.bases[L].spec().p;
    const int pR = e.hull_right >= 0 ? mesh.bases[e.hull_right].spec().p : pL;
    const QuadratureRule rule = edge_rule(e.a, e.b, 2 * std::max(pL, pR) + 1);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd psiL = mesh.bases[L].eval_nodal(mesh.to_normalized(L, rule.nodes[q]));
      Eigen::Vector3d UL = Eigen::Vector3d::Zero();
      for (int j = 0; j < NL; ++j)
        for (int c = 0; c < 3; ++c) UL(c) += psiL(j) * state[L](3 * j + c);
      Eigen::Vector3d UR;
      Eigen::VectorXd psiR;
      if (e.hull_right >= 0) {
        const int Rh = e.hull_right;
        psiR = mesh.bases[Rh].eval_nodal(mesh.to_normalized(Rh, rule.nodes[q] + e.right_shift));
        UR = Eigen::Vector3d::Zero();
        for (int j = 0; j < mesh.bases[Rh].size(); ++j)
          for (int c = 0; c < 3; ++c) UR(c) += psiR(j) * state[Rh](3 * j + c);
      } else {
        UR = boundary_state_ ? boundary_state_(rule.nodes[q]) : Eigen::Vector3d::Zero();
      }
      const Eigen::Vector3d flux = Ap * UL + Am * UR;
      const double w = rule.weights[q];
      for (int j = 0; j < NL; ++j)
        for (int c = 0; c < 3; ++c) R[L](3 * j + c) -= w * psiL(j) * flux(c);
      if (e.hull_right >= 0) {
        const int Rh = e.hull_right;
        for (int j = 0; j < mesh.bases[Rh].size(); ++j)
          for (int c = 0; c < 3; ++c) R[Rh](3 * j + c) += w * psiR(j) * flux(c);
      }
    }
  }
  return R;
}

std::vector<Eigen::VectorXd> DgOperator::advance_rk4(std::vector<Eigen::VectorXd> state, double dt,
                                                     int steps) const {
  const HullMesh& mesh = *mesh_;
  auto rate = [&](const std::vector<Eigen::VectorXd>& u) {
    std::vector<Eigen::VectorXd> R = residual(u);
    for (std::size_t h = 0; h < R.size(); ++h) {
      const int N = mesh.bases[h].size();
      Eigen::MatrixXd rc(N, 3);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) rc(j, c) = R[h](3 * j + c);
      const Eigen::MatrixXd k = mass_llt_[h].solve(rc);
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) R[h](3 * j + c) = k(j, c);
    }
    return R;
  };
  auto axpy = [](const std::vector<Eigen::VectorXd>& u, double a,
                 const std::vector<Eigen::VectorXd>& v) {
    std::vector<Eigen::VectorXd> out(u.size());
    for (std::size_t h = 0; h < u.size(); ++h) out[h] = u[h] + a * v[h];
    return out;
  };
  for (int step = 0; step < steps; ++step) {
    const auto k1 = rate(state);
    const auto k2 = rate(axpy(state, 0.5 * dt, k1));
    const auto k3 = rate(axpy(state, 0.5 * dt, k2));
    const auto k4 = rate(axpy(state, dt, k3));
    for (std::size_t h = 0; h < state.size(); ++h) {
      state[h] += (dt / 6.0) * (k1[h] + 2.0 * k2[h] + 2.0 * k3[h] + k4[h]);
      if (!state[h].allFinite())
        throw std::runtime_error("advance_rk4: state became non-finite at step " +
                                 std::to_string(step));
    }
  }
  return state;
}

double DgOperator::hull_integral(const std::vector<Eigen::VectorXd>& state, int hull,
                                 int comp) const {
  const HullMesh& mesh = *mesh_;
  const int N = mesh.bases[hull].size();
  const int deg = std::min(2 * mesh.bases[hull].spec().p, 20);
  const QuadratureRule rule = polygon_rule(mesh.hulls[hull], deg);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const Eigen::VectorXd psi = mesh.bases[hull].eval_nodal(mesh.to_normalized(hull, rule.nodes[q]));
    double u = 0.0;
    for (int j = 0; j < N; ++j) u += psi(j) * state[hull](3 * j + comp);
    s += rule.weights[q] * u;
  }
  return s;
}

double DgOperator::boundary_flux(const std::vector<Eigen::VectorXd>& state, int hull,
                                 int comp) const {
  const HullMesh& mesh = *mesh_;
  double total = 0.0;
  for (const MeshEdge& e : mesh.edges) {
    if (e.hull_left != hull && e.hull_right != hull) continue;
    if (e.bc == EdgeBC::ZeroFlux && e.hull_right < 0) continue;
    const Vec2 d = e.b - e.a;
    const double len = d.norm();
    const Vec2 n{d.y / len, -d.x / len};
    const Eigen::Matrix3d An = model_.An(n);
    const Eigen::Matrix3d Aabs = model_.abs_An(n);
    const Eigen::Matrix3d Ap = 0.5 * (An + Aabs);
    const Eigen::Matrix3d Am = 0.5 * (An - Aabs);
    const int pL = mesh.bases[e.hull_left].spec().p;
    const int pR = e.hull_right >= 0 ? mesh.bases[e.hull_right].spec().p : pL;
    const QuadratureRule rule = edge_rule(e.a, e.b, 2 * std::max(pL, pR) + 1);
    const double sign = (e.hull_left == hull) ? 1.0 : -1.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd psiL =
          mesh.bases[e.hull_left].eval_nodal(mesh.to_normalized(e.hull_left, rule.nodes[q]));
      Eigen::Vector3d UL = Eigen::Vector3d::Zero();
      for (int j = 0; j < mesh.bases[e.hull_left].size(); ++j)
        for (int c = 0; c < 3; ++c) UL(c) += psiL(j) * state[e.hull_left](3 * j + c);
      Eigen::Vector3d UR;
      if (e.hull_right >= 0) {
        const Eigen::VectorXd psiR = mesh.bases[e.hull_right].eval_nodal(
            mesh.to_normalized(e.hull_right, rule.nodes[q] + e.right_shift));
        UR = Eigen::Vector3d::Zero();
        for (int j = 0; j < mesh.bases[e.hull_right].size(); ++j)
          for (int c = 0; c < 3; ++c) UR(c) += psiR(j) * state[e.hull_right](3 * j + c);
      } else {
        UR = boundary_state_ ? boundary_state_(rule.nodes[q]) : Eigen::Vector3d::Zero();
      }
      const Eigen::Vector3d flux = Ap * UL + Am * UR;
      total += sign * rule.weights[q] * flux(comp);
    }
  }
  return total;
}

double DgOperator::energy(const std::vector<Eigen::VectorXd>& state) const {
  const HullMesh& mesh = *mesh_;
  double E = 0.0;
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const int N = mesh.bases[h].size();
    const int deg = std::min(2 * mesh.bases[h].spec().p, 20);
    const QuadratureRule rule = polygon_rule(mesh.hulls[h], deg);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::VectorXd psi = mesh.bases[h].eval_nodal(mesh.to_normalized(h, rule.nodes[q]));
      Eigen::Vector3d U = Eigen::Vector3d::Zero();
      for (int j = 0; j < N; ++j)
        for (int c = 0; c < 3; ++c) U(c) += psi(j) * state[h](3 * j + c);
      E += rule.weights[q] * (model_.c0 * model_.c0 * U(0) * U(0) / model_.rho0 +
                              model_.rho0 * (U(1) * U(1) + U(2) * U(2)));
    }
  }
  return E;
}

double DgOperator::stable_dt() const {
  int pmax = 0;
  for (const HullBasis& b : mesh_->bases) pmax = std::max(pmax, b.spec().p);
  return 0.5 * mesh_->min_edge_length() / (model_.c0 * (2 * pmax + 1));
}

std::vector<Eigen::VectorXd> DgOperator::project(const StateFn& f) const {
  const HullMesh& mesh = *mesh_;
  std::vector<Eigen::VectorXd> state(mesh.hulls.size());
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h) {
    const int N = mesh.bases[h].size();
    state[h].resize(3 * N);
    for (int j = 0; j < N; ++j) {
      const Vec2 phys = mesh.maps[h].inverse(mesh.bases[h].fekete().points[j]);
      const Eigen::Vector3d v = f(phys);
      for (int c = 0; c < 3; ++c) state[h](3 * j + c) = v(c);
    }
  }
  return state;
}

double DgOperator::l2_error(const std::vector<Eigen::VectorXd>& state, const StateFn& exact) const {
  return dls_l2_error(*mesh_, state, exact);
}

// ---------------------------------------------------------------------------
// DOF bookkeeping and convergence studies
// ---------------------------------------------------------------------------

std::size_t dof_dg(int n_e, int p) {
  return static_cast<std::size_t>(n_e) * (p + 1) * (p + 2) / 2;
}
std::size_t dof_cg(int n_e, int p) { return dof_dg(n_e, p) - n_e * (p + 1) + 1; }
std::size_t dof_shull_p(int p) { return static_cast<std::size_t>(p + 1) * (p + 2) / 2; }
std::size_t dof_shull_q(int p) { return static_cast<std::size_t>(p + 1) * (p + 1); }

std::vector<StudyRow> convergence_study(StudyKind kind, Family family,
                                        const std::vector<int>& p_list, int n, double dt,
                                        double alpha) {
  std::vector<StudyRow> rows;
  const AcousticsModel model;
  for (int p : p_list) {
    StudyRow row;
    row.p = p;
    if (kind == StudyKind::Dls) {
      HullMesh mesh;
      if (family == Family::TriLagrange) {
        mesh = structured_tri_mesh(n, n);
        build_lagrange_bases(mesh, p);
        row.family = "tri-lagrange";
        row.dof = mesh.hulls.size() * dof_shull_p(p);
      } else {
        mesh = structured_quad_mesh(n, n);
        build_hull_bases(mesh, family == Family::HullP ? Space::P : Space::Q, p);
        row.family = family == Family::HullP ? "hull-P" : "hull-Q";
        row.dof = mesh.hulls.size() * (family == Family::HullP ? dof_shull_p(p) : dof_shull_q(p));
      }
      const DlsSystem sys = assemble_dls(mesh, model, dt, alpha, manufactured_source(model, dt),
                                         benchmark_exact_state());
      const auto sol = solve_dls(sys, 1e-12, 4000);
      row.l2err = dls_l2_error(mesh, sol, benchmark_exact_state());
    } else {
      HullMesh mesh = structured_quad_mesh(n, n, /*periodic=*/true);
      build_hull_bases(mesh, family == Family::HullQ ? Space::Q : Space::P, p);
      row.family = family == Family::HullQ ? "hull-Q" : "hull-P";
      row.dof = mesh.hulls.size() *
                (family == Family::HullQ ? dof_shull_q(p) : dof_shull_p(p));
      DgOperator op(mesh, model);
      // rightward plane acoustic wave along the +x characteristic
      auto wave = [&](double t) {
        return StateFn([t, &model](const Vec2& x) {
          const double s = std::sin(M_PI * (x.x - model.c0 * t));
          return Eigen::Vector3d(model.rho0 * s, model.c0 * s, 0.0);
        });
      };
      auto state = op.project(wave(0.0));
      const double dtw = 0.002;
      const int steps = 10;
      state = op.advance_rk4(state, dtw, steps);
      row.l2err = op.l2_error(state, wave(dtw * steps));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace shull
