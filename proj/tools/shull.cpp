#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "shull/basis.hpp"
#include "shull/io.hpp"
#include "shull/quadrature.hpp"
#include "shull/solver.hpp"
#include "shull/tabulate.hpp"

namespace {

using namespace shull;

Space parse_space(const std::string& s) {
  if (s == "P" || s == "p") return Space::P;
  if (s == "Q" || s == "q") return Space::Q;
  throw CLI::ValidationError("--space", "must be P or Q");
}

BasisRoute parse_route(const std::string& s) {
  if (s == "direct") return BasisRoute::Direct;
  if (s == "reusable") return BasisRoute::Reusable;
  throw CLI::ValidationError("--route", "must be direct or reusable");
}

SelectMethod parse_method(const std::string& s) {
  if (s == "qr") return SelectMethod::QR;
  if (s == "omp") return SelectMethod::OMP;
  throw CLI::ValidationError("--method", "must be qr or omp");
}

HullBasis basis_for(const Polygon& normalized, Space space, int p, SelectMethod method,
                    BasisRoute route, double oversample) {
  const MonomialSpec spec(space, p);
  const PointSet cands = fill_at_least(normalized, candidate_count_for(spec, oversample));
  return build_basis(approximate_fekete(normalized, spec, cands, method), route);
}

double named_function(const std::string& name, const Vec2& p) {
  if (name == "cos3pi") return std::cos(3 * M_PI * p.x) * std::cos(3 * M_PI * p.y);
  if (name == "sin2pi") return std::sin(2 * M_PI * p.x) * std::sin(2 * M_PI * p.y);
  if (name == "radial4pi") return std::cos(4 * M_PI * std::hypot(p.x, p.y));
  throw CLI::ValidationError("--fn", "must be cos3pi, sin2pi or radial4pi");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_state_csv(const std::string& path, const HullMesh& mesh,
                     const std::vector<Eigen::VectorXd>& state) {
  std::ofstream out = open_out(path);
  out << "hull,node,x,y,rho,u,v\n";
  for (std::size_t h = 0; h < mesh.hulls.size(); ++h)
    for (int j = 0; j < mesh.bases[h].size(); ++j) {
      const Vec2 phys = mesh.maps[h].inverse(mesh.bases[h].fekete().points[j]);
      out << h << "," << j << "," << format_full(phys.x) << "," << format_full(phys.y);
      for (int c = 0; c < 3; ++c) out << "," << format_full(state[h](3 * j + c));
      out << "\n";
    }
}

int run(CLI::App& app, int argc, char** argv) {
  app.require_subcommand(1);

  std::string in_path, out_path = "out.csv", space_s = "P", method_s = "qr", route_s = "direct";
  std::string fn_name = "sin2pi", kind_s = "dls", family_s = "hull-P", mesh_s = "4x4";
  std::string basis_path, p_range = "1..8", cand_method = "fill";
  int degree = 4, start = 1, iters = 32, sides = 4, samples = 10000, km = 0;
  double spacing = 0.1, alpha = 1.0, dt = 1e-12, oversample = 10.0;
  std::uint64_t seed = 42;

  auto* partition = app.add_subcommand("partition", "Hertel-Mehlhorn convex partition");
  partition->add_option("--in", in_path)->required();
  partition->add_option("--start", start, "1-based start vertex");
  partition->add_option("--out", out_path);

  auto* candidates = app.add_subcommand("candidates", "generate interior candidate points");
  candidates->add_option("--in", in_path)->required();
  candidates->add_option("--method", cand_method, "fill|grav");
  candidates->add_option("--spacing", spacing);
  candidates->add_option("--iters", iters);
  candidates->add_option("--seed", seed);
  candidates->add_option("--out", out_path);

  auto* moments = app.add_subcommand("moments", "boundary-reduced monomial moments");
  moments->add_option("--in", in_path)->required();
  moments->add_option("--space", space_s);
  moments->add_option("--degree", degree);
  moments->add_option("--out", out_path);

  auto* quad = app.add_subcommand("quad", "interior quadrature rule");
  quad->add_option("--in", in_path)->required();
  quad->add_option("--degree", degree);
  quad->add_option("--out", out_path);

  auto* fekete = app.add_subcommand("fekete", "approximate Fekete points and weights");
  fekete->add_option("--in", in_path)->required();
  fekete->add_option("--space", space_s);
  fekete->add_option("--degree", degree);
  fekete->add_option("--method", method_s, "qr|omp");
  fekete->add_option("--oversample", oversample);
  fekete->add_option("--seed", seed);
  fekete->add_option("--out", out_path);

  auto* basis = app.add_subcommand("basis", "build and tabulate a hull basis");
  basis->add_option("--in", in_path)->required();
  basis->add_option("--space", space_s);
  basis->add_option("--degree", degree);
  basis->add_option("--method", method_s);
  basis->add_option("--route", route_s, "direct|reusable");
  basis->add_option("--out", out_path);

  auto* tabulate = app.add_subcommand("tabulate", "tabulate a master-hull basis");
  tabulate->add_option("--sides", sides);
  tabulate->add_option("--degree", degree);
  tabulate->add_option("--space", space_s);
  tabulate->add_option("--route", route_s);
  tabulate->add_option("--out", out_path);

  auto* lebesgue = app.add_subcommand("lebesgue", "Lebesgue estimate and bound of a basis");
  lebesgue->add_option("--basis", basis_path)->required();
  lebesgue->add_option("--samples", samples);
  lebesgue->add_option("--out", out_path);

  auto* interp = app.add_subcommand("interp", "interpolation error of a named function");
  interp->add_option("--in", in_path)->required();
  interp->add_option("--space", space_s);
  interp->add_option("--degree", degree);
  interp->add_option("--method", method_s);
  interp->add_option("--fn", fn_name, "cos3pi|sin2pi|radial4pi");
  interp->add_option("--km", km, "GFC filter cutoff (0 keeps all modes)");
  interp->add_option("--out", out_path);

  auto* solve = app.add_subcommand("solve", "discontinuous solve of the acoustics benchmark");
  solve->add_option("--kind", kind_s, "dls|dg");
  solve->add_option("--family", family_s, "hull-P|hull-Q|tri-lagrange");
  solve->add_option("--degree", degree);
  solve->add_option("--mesh", mesh_s, "NxN");
  solve->add_option("--alpha", alpha);
  solve->add_option("--dt", dt);
  solve->add_option("--out", out_path);

  auto* study = app.add_subcommand("study", "DOF vs error convergence study");
  study->add_option("--kind", kind_s, "dls|dg");
  study->add_option("--p", p_range, "degree range lo..hi");
  study->add_option("--mesh", mesh_s, "NxN");
  study->add_option("--alpha", alpha);
  study->add_option("--dt", dt);
  study->add_option("--out", out_path);

  app.parse(argc, argv);

  if (partition->parsed()) {
    const Polygon poly = read_polygon_file(in_path);
    if (start < 1 || static_cast<std::size_t>(start) > poly.outer().size())
      throw std::runtime_error("--start out of range");
    const ConvexPartition part = hertel_mehlhorn(poly, static_cast<std::size_t>(start - 1));
    std::ofstream out = open_out(out_path);
    out << part.pieces.size() << "\n";
    for (const Polygon& piece : part.pieces) write_polygon(out, piece);
    std::cout << part.pieces.size() << " convex pieces\n";
    return 0;
  }

  if (candidates->parsed()) {
    const Polygon poly = read_polygon_file(in_path);
    PointSet pts = fill_pattern(poly, spacing);
    if (cand_method == "grav")
      pts = gravitational_relax(poly, random_interior(poly, pts.size(), seed), iters);
    else if (cand_method != "fill")
      throw std::runtime_error("--method must be fill or grav");
    write_points_csv(out_path, pts.points);
    std::cout << pts.size() << " candidate points\n";
    return 0;
  }

  if (moments->parsed()) {
    const Polygon poly = read_polygon_file(in_path);
    const MonomialSpec spec(parse_space(space_s), degree);
    write_moments_csv(out_path, spec, boundary_moments(poly, spec));
    return 0;
  }

  if (quad->parsed()) {
    const QuadratureRule rule = polygon_rule(read_polygon_file(in_path), degree);
    write_rule_csv(out_path, rule.nodes, rule.weights);
    return 0;
  }

  if (fekete->parsed()) {
    const Polygon poly = read_polygon_file(in_path);
    const MonomialSpec spec(parse_space(space_s), degree);
    const PointSet cands = fill_at_least(poly, candidate_count_for(spec, oversample));
    const FeketeSet fs = approximate_fekete(poly, spec, cands, parse_method(method_s));
    write_fekete_csv(out_path, fs);
    std::cout << fs.size() << " points, sum w = " << format_full(fs.weights.sum()) << "\n";
    return 0;
  }

  if (basis->parsed() || tabulate->parsed()) {
    const TabRecord rec = [&]() {
      if (tabulate->parsed())
        return tabulate_master_hull(sides, degree, parse_space(space_s), parse_route(route_s));
      const Polygon poly = read_polygon_file(in_path);
      const HullBasis b = basis_for(poly, parse_space(space_s), degree, parse_method(method_s),
                                    parse_route(route_s), oversample);
      return record_from_basis(b, static_cast<int>(poly.outer().size()));
    }();
    std::ofstream out = open_out(out_path);
    write_tab_record(out, rec);
    std::cout << "tabulated e=" << rec.e << " p=" << rec.p << " N=" << rec.points.size() << "\n";
    return 0;
  }

  if (lebesgue->parsed()) {
    const auto records = read_tab_file(basis_path);
    if (records.empty()) throw std::runtime_error("no records in " + basis_path);
    const HullBasis b = basis_from_record(records.front());
    const PointSet s = fill_at_least(b.poly(), static_cast<std::size_t>(samples));
    const double est = lebesgue_estimate(b, s.points);
    const double bound = lebesgue_bound(b);
    const double l2 = sampled_l2_operator_norm(b, s.points);
    std::ofstream out = open_out(out_path);
    out << "lebesgue_estimate,l2_operator_norm,closed_form_bound\n"
        << format_full(est) << "," << format_full(l2) << "," << format_full(bound) << "\n";
    std::cout << "estimate " << est << ", bound " << bound << "\n";
    return 0;
  }

  if (interp->parsed()) {
    const Polygon poly = read_polygon_file(in_path);
    const auto [normalized, map] = normalize_hull(poly);
    const HullBasis b = basis_for(normalized, parse_space(space_s), degree,
                                  parse_method(method_s), BasisRoute::Direct, oversample);
    Eigen::VectorXd un(b.size());
    for (int j = 0; j < b.size(); ++j)
      un(j) = named_function(fn_name, map.inverse(b.fekete().points[j]));
    if (km > 0) un = filter_modes(b, un, km).first;
    const QuadratureRule rule = polygon_rule(poly, 20);
    double err2 = 0.0, nrm2 = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double ue = named_function(fn_name, rule.nodes[q]);
      const double uh = b.eval_nodal(map.apply(rule.nodes[q])).dot(un);
      err2 += rule.weights[q] * (uh - ue) * (uh - ue);
      nrm2 += rule.weights[q] * ue * ue;
    }
    std::ofstream out = open_out(out_path);
    out << "fn,p,N,l2_error,l2_norm\n"
        << fn_name << "," << degree << "," << b.size() << "," << format_full(std::sqrt(err2))
        << "," << format_full(std::sqrt(nrm2)) << "\n";
    std::cout << "L2 error " << std::sqrt(err2) << "\n";
    return 0;
  }

  const auto parse_mesh = [&]() {
    const auto xpos = mesh_s.find('x');
    if (xpos == std::string::npos) throw std::runtime_error("--mesh must look like 4x4");
    return std::stoi(mesh_s.substr(0, xpos));
  };

  if (solve->parsed()) {
    const int n = parse_mesh();
    const AcousticsModel model;
    if (kind_s == "dls") {
      HullMesh mesh;
      if (family_s == "tri-lagrange") {
        mesh = structured_tri_mesh(n, n);
        build_lagrange_bases(mesh, degree);
      } else {
        mesh = structured_quad_mesh(n, n);
        build_hull_bases(mesh, family_s == "hull-Q" ? Space::Q : Space::P, degree);
      }
      const DlsSystem sys = assemble_dls(mesh, model, dt, alpha, manufactured_source(model, dt),
                                         benchmark_exact_state());
      const auto sol = solve_dls(sys, 1e-12, 4000);
      write_state_csv(out_path, mesh, sol);
      std::cout << "L2 error " << dls_l2_error(mesh, sol, benchmark_exact_state()) << "\n";
    } else if (kind_s == "dg") {
      HullMesh mesh = structured_quad_mesh(n, n, /*periodic=*/true);
      build_hull_bases(mesh, family_s == "hull-Q" ? Space::Q : Space::P, degree);
      const DgOperator op(mesh, model);
      const auto wave = [&](double t) {
        return StateFn([t, model](const Vec2& x) {
          const double s = std::sin(M_PI * (x.x - model.c0 * t));
          return Eigen::Vector3d(model.rho0 * s, model.c0 * s, 0.0);
        });
      };
      auto state = op.project(wave(0.0));
      const double dtw = std::min(op.stable_dt(), 0.002);
      const int steps = 10;
      state = op.advance_rk4(state, dtw, steps);
      write_state_csv(out_path, mesh, state);
      std::cout << "L2 error " << op.l2_error(state, wave(dtw * steps)) << "\n";
    } else {
      throw std::runtime_error("--kind must be dls or dg");
    }
    return 0;
  }

  if (study->parsed()) {
    const int n = parse_mesh();
    const auto dots = p_range.find("..");
    if (dots == std::string::npos) throw std::runtime_error("--p must look like 1..8");
    const int plo = std::stoi(p_range.substr(0, dots));
    const int phi = std::stoi(p_range.substr(dots + 2));
    std::vector<int> ps;
    for (int p = plo; p <= phi; ++p) ps.push_back(p);
    const StudyKind kind = kind_s == "dg" ? StudyKind::Dg : StudyKind::Dls;
    std::ofstream out = open_out(out_path);
    out << "family,p,dof,l2err\n";
    const std::vector<Family> fams =
        kind == StudyKind::Dls
            ? std::vector<Family>{Family::TriLagrange, Family::HullP, Family::HullQ}
            : std::vector<Family>{Family::HullP, Family::HullQ};
    for (Family fam : fams) {
      std::vector<int> plist;
      for (int p : ps)
        if (!(kind == StudyKind::Dls && fam == Family::TriLagrange && p < 1)) plist.push_back(p);
      for (const StudyRow& row : convergence_study(kind, fam, plist, n, dt, alpha)) {
        out << row.family << "," << row.p << "," << row.dof << "," << format_full(row.l2err)
            << "\n";
        std::cout << row.family << " p=" << row.p << " dof=" << row.dof << " err=" << row.l2err
                  << "\n";
      }
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral hull toolkit: approximate Fekete points, hull bases and "
               "discontinuous solvers on polygons"};
  try {
    return run(app, argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;  // numerical or I/O failure
  }
}
