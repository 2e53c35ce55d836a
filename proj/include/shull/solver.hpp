#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "shull/basis.hpp"

namespace shull {

/// Linearized Euler equations with zero mean flow: U = (rho, u, v),
/// U_t + A1 U_x + A2 U_y = 0. The normal Jacobian n1 A1 + n2 A2 has
/// eigenvalues {0, +-c0}.
struct AcousticsModel {
  double rho0 = 1.0;
  double c0 = 1.0;

  Eigen::Matrix3d A1() const;
  Eigen::Matrix3d A2() const;
  Eigen::Matrix3d An(const Vec2& n) const;
  /// |A_n| through the eigendecomposition of A_n (exact characteristic
  /// splitting for the linear system).
  Eigen::Matrix3d abs_An(const Vec2& n) const;
};

using StateFn = std::function<Eigen::Vector3d(const Vec2&)>;

/// The benchmark's exact field (cos(pi x)cos(pi y), x^2+y^2, x-y).
StateFn benchmark_exact_state();

/// Steady manufactured source for the implicit-Euler operator
/// U/dt + A1 U_x + A2 U_y: f = U_exact/dt + A1 dU/dx + A2 dU/dy.
StateFn manufactured_source(const AcousticsModel& model, double dt);

enum class EdgeBC { Interior, ExactState, ZeroFlux };

struct MeshEdge {
  int hull_left = -1;
  int edge_left = -1;  // local edge index on the left hull
  int hull_right = -1; // -1 on boundary edges
  int edge_right = -1;
  Vec2 a, b;           // physical endpoints, oriented with the left hull
  EdgeBC bc = EdgeBC::Interior;
  Vec2 right_shift;    // translation onto the right hull's copy (periodic pairs)
};

/// Discontinuous mesh of hulls: each hull is normalized individually and
/// carries its own basis (per-hull degree allowed). Every edge appears once.
struct HullMesh {
  std::vector<Polygon> hulls;       // physical polygons
  std::vector<Polygon> normalized;  // per-hull normalized copies
  std::vector<AffineMap> maps;      // physical -> normalized
  std::vector<MeshEdge> edges;
  std::vector<HullBasis> bases;     // filled by a build_*_bases call

  Vec2 to_normalized(int hull, const Vec2& p) const { return maps[hull].apply(p); }
  double min_edge_length() const;
};

/// nx x ny structured quadrilateral mesh of [-1,1]^2; periodic meshes pair
/// opposite boundary edges, otherwise boundary edges carry `bc`.
HullMesh structured_quad_mesh(int nx, int ny, bool periodic = false,
                              EdgeBC bc = EdgeBC::ExactState);

/// The quad mesh with every quadrilateral diagonalized into two triangles.
HullMesh structured_tri_mesh(int nx, int ny, bool periodic = false,
                             EdgeBC bc = EdgeBC::ExactState);

/// Approximate-Fekete hull bases on every hull (fill-pattern candidates,
/// SVD route).
void build_hull_bases(HullMesh& mesh, Space space, int p, double oversample = 10.0,
                      SelectMethod method = SelectMethod::QR);

/// Equispaced Lagrange bases (P space) on a triangulated mesh.
void build_lagrange_bases(HullMesh& mesh, int p);

enum class DlsBasisKind { Nodal, Modal };

/// One block-row per hull: diagonal block, off-diagonal interface blocks,
/// and the right-hand side.
struct DlsSystem {
  struct OffBlock {
    int row = -1, col = -1;
    Eigen::MatrixXd B;
  };
  std::vector<Eigen::MatrixXd> diag;
  std::vector<OffBlock> off;
  std::vector<Eigen::VectorXd> rhs;
  double alpha = 1.0;
  double dt = 1.0;
  DlsBasisKind kind = DlsBasisKind::Nodal;

  std::size_t total_unknowns() const;
  /// ||A - A^T||_F / ||A||_F accumulated over the block structure.
  double symmetry_defect() const;
  std::vector<Eigen::VectorXd> apply(const std::vector<Eigen::VectorXd>& x) const;
};

/// Least-squares assembly: interior integrals at degree 2p, jump integrals
/// at degree 2p+1, exact trace imposed weakly through the boundary jump.
DlsSystem assemble_dls(const HullMesh& mesh, const AcousticsModel& model, double dt, double alpha,
                       const StateFn& source, const StateFn& boundary_state,
                       DlsBasisKind kind = DlsBasisKind::Nodal);

/// Block-Jacobi preconditioned conjugate gradient. Throws if the iteration
/// exceeds maxit or encounters a non-positive direction (broken symmetry).
std::vector<Eigen::VectorXd> solve_dls(const DlsSystem& sys, double tol = 1e-12,
                                       int maxit = 2000);

/// Discontinuous Galerkin spatial operator for the acoustics system.
class DgOperator {
 public:
  DgOperator(const HullMesh& mesh, AcousticsModel model, StateFn boundary_state = {});

  /// Weak-form residual R with M du/dt = R(u): interior flux integral minus
  /// the upwind boundary flux, per hull.
  std::vector<Eigen::VectorXd> residual(const std::vector<Eigen::VectorXd>& state) const;

  /// Classical four-stage explicit update with per-hull mass solves.
  /// Throws (naming the step) when a state stops being finite.
  std::vector<Eigen::VectorXd> advance_rk4(std::vector<Eigen::VectorXd> state, double dt,
                                           int steps) const;

  /// integral over hull h of component c of the current state.
  double hull_integral(const std::vector<Eigen::VectorXd>& state, int hull, int comp) const;

  /// Net upwind boundary flux of component c out of hull h.
  double boundary_flux(const std::vector<Eigen::VectorXd>& state, int hull, int comp) const;

  /// Acoustic energy integral c0^2 rho^2/rho0 + rho0 (u^2+v^2).
  double energy(const std::vector<Eigen::VectorXd>& state) const;

  const Eigen::MatrixXd& mass(int hull) const { return mass_[hull]; }
  const HullMesh& mesh() const { return *mesh_; }

  /// CFL time-step estimate c0 dt (2p+1)/h_min <= 0.5.
  double stable_dt() const;

  std::vector<Eigen::VectorXd> project(const StateFn& f) const;  // nodal sampling
  double l2_error(const std::vector<Eigen::VectorXd>& state, const StateFn& exact) const;

 private:
  const HullMesh* mesh_;
  AcousticsModel model_;
  StateFn boundary_state_;
  std::vector<Eigen::MatrixXd> mass_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> mass_llt_;
};

/// L2 error of a DLS solution against an exact field.
double dls_l2_error(const HullMesh& mesh, const std::vector<Eigen::VectorXd>& sol,
                    const StateFn& exact);

/// Degree-of-freedom bookkeeping for one hull region with n_e sides
/// (triangulated with n_e triangles for the DG/CG families).
std::size_t dof_dg(int n_e, int p);
std::size_t dof_cg(int n_e, int p);
std::size_t dof_shull_p(int p);
std::size_t dof_shull_q(int p);

struct StudyRow {
  std::string family;
  int p = 0;
  std::size_t dof = 0;
  double l2err = 0.0;
};

enum class StudyKind { Dls, Dg };
enum class Family { TriLagrange, HullP, HullQ };

/// Convergence study of the acoustics benchmark (DLS) or the plane-wave
/// propagation test (DG) at the listed degrees on an n x n mesh.
std::vector<StudyRow> convergence_study(StudyKind kind, Family family,
                                        const std::vector<int>& p_list, int n = 4,
                                        double dt = 1e-12, double alpha = 1.0);

}  // namespace shull
