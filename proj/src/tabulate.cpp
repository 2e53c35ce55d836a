#include "shull/tabulate.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "shull/io.hpp"

namespace shull {

Polygon master_hull(int sides) {
  if (sides < 3) throw std::invalid_argument("master hull needs at least 3 sides");
  Loop loop(sides);
  for (int k = 0; k < sides; ++k) {
    const double t = M_PI / 2.0 + 2.0 * M_PI * k / sides;
    loop[k] = {std::cos(t), std::sin(t)};
  }
  return Polygon(std::move(loop));
}

TabRecord record_from_basis(const HullBasis& basis, int sides) {
  return TabRecord{2,
                   sides,
                   basis.spec().p,
                   basis.spec().space,
                   basis.route(),
                   basis.poly(),
                   basis.fekete().points,
                   basis.fekete().weights,
                   basis.left_factor(),
                   basis.singular_values(),
                   basis.fekete().svdV,
                   basis.coefficients(),
                   basis.modal_factor(),
                   basis.fnorm()};
}

TabRecord tabulate_master_hull(int sides, int p, Space space, BasisRoute route) {
  const auto [normalized, map] = normalize_hull(master_hull(sides));
  const MonomialSpec spec(space, p);
  const PointSet cands = fill_at_least(normalized, candidate_count_for(spec));
  const HullBasis basis = build_basis(approximate_fekete(normalized, spec, cands), route);
  return record_from_basis(basis, sides);
}

namespace {

void put_matrix(std::ostream& out, const char* tag, const Eigen::MatrixXd& M) {
  out << tag << " " << M.rows() << " " << M.cols() << "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? " " : "") << format_full(M(i, j));
    out << "\n";
  }
}

Eigen::MatrixXd get_matrix(std::istream& in, const std::string& expect) {
  std::string tag;
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != expect)
    throw std::runtime_error("tabulation file: expected matrix '" + expect + "'");
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> M(i, j))) throw std::runtime_error("tabulation file: truncated matrix");
  return M;
}

}  // namespace

void write_tab_record(std::ostream& out, const TabRecord& rec) {
  out << "SHULLTAB 1\n";
  out << "key " << rec.d << " " << rec.e << " " << rec.p << " "
      << (rec.space == Space::P ? "P" : "Q") << " "
      << (rec.route == BasisRoute::Direct ? "direct" : "reusable") << "\n";
  write_polygon(out, rec.poly);
  out << "points " << rec.points.size() << "\n";
  for (std::size_t i = 0; i < rec.points.size(); ++i)
    out << format_full(rec.points[i].x) << " " << format_full(rec.points[i].y) << " "
        << format_full(rec.weights(static_cast<Eigen::Index>(i))) << "\n";
  put_matrix(out, "U", rec.U);
  put_matrix(out, "S", rec.S);
  put_matrix(out, "V", rec.V);
  put_matrix(out, "a", rec.a);
  put_matrix(out, "modal", rec.modal_factor);
  out << "fnorm " << format_full(rec.fnorm) << "\n";
  out << "end\n";
}

std::vector<TabRecord> read_tab_records(std::istream& in) {
  std::vector<TabRecord> records;
  std::string magic;
  while (in >> magic) {
    int version = 0;
    if (magic != "SHULLTAB" || !(in >> version) || version != 1)
      throw std::runtime_error("tabulation file: bad header");
    std::string tag, space, route;
    int d = 0, e = 0, p = 0;
    if (!(in >> tag >> d >> e >> p >> space >> route) || tag != "key")
      throw std::runtime_error("tabulation file: bad key line");
    Polygon poly = read_polygon(in);
    std::size_t n = 0;
    if (!(in >> tag >> n) || tag != "points")
      throw std::runtime_error("tabulation file: bad points header");
    std::vector<Vec2> points(n);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      if (!(in >> points[i].x >> points[i].y >> weights(static_cast<Eigen::Index>(i))))
        throw std::runtime_error("tabulation file: truncated points");
    Eigen::MatrixXd U = get_matrix(in, "U");
    Eigen::VectorXd S = get_matrix(in, "S").col(0);
    Eigen::MatrixXd V = get_matrix(in, "V");
    Eigen::MatrixXd a = get_matrix(in, "a");
    Eigen::MatrixXd modal = get_matrix(in, "modal");
    double fnorm = 0.0;
    if (!(in >> tag >> fnorm) || tag != "fnorm")
      throw std::runtime_error("tabulation file: missing fnorm");
    if (!(in >> tag) || tag != "end") throw std::runtime_error("tabulation file: missing end");
    records.push_back(TabRecord{d, e, p, space == "P" ? Space::P : Space::Q,
                                route == "direct" ? BasisRoute::Direct : BasisRoute::Reusable,
                                std::move(poly), std::move(points), std::move(weights),
                                std::move(U), std::move(S), std::move(V), std::move(a),
                                std::move(modal), fnorm});
  }
  return records;
}

std::vector<TabRecord> read_tab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tabulation file: " + path);
  return read_tab_records(in);
}

void append_tab_file(const std::string& path, const TabRecord& rec) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write tabulation file: " + path);
  write_tab_record(out, rec);
}

std::optional<TabRecord> lookup(const std::vector<TabRecord>& records, int d, int e, int p,
                                Space space, BasisRoute route) {
  for (const TabRecord& r : records)
    if (r.d == d && r.e == e && r.p == p && r.space == space && r.route == route) return r;
  return std::nullopt;
}

HullBasis basis_from_record(const TabRecord& rec) {
  FeketeSet fs{rec.points,
               rec.weights,
               rec.U,
               rec.S,
               rec.V,
               Eigen::MatrixXd::Identity(rec.a.rows(), rec.a.cols()),
               MonomialSpec(rec.space, rec.p),
               rec.poly,
               boundary_moments(rec.poly, MonomialSpec(rec.space, rec.p))};
  return build_basis(std::move(fs), BasisRoute::Direct);
}

}  // namespace shull
