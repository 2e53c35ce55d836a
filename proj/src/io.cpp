#include "shull/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shull {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Polygon read_polygon(std::istream& in) {
  int d = 0, nloops = 0;
  if (!(in >> d >> nloops)) throw std::runtime_error("polygon file: missing 'd nloops' header");
  if (d != 2) throw std::runtime_error("polygon file: only d = 2 is supported");
  if (nloops < 1) throw std::runtime_error("polygon file: need at least the outer loop");
  auto read_loop = [&]() {
    int nv = 0;
    if (!(in >> nv) || nv < 3) throw std::runtime_error("polygon file: bad vertex count");
    Loop loop(nv);
    for (int i = 0; i < nv; ++i)
      if (!(in >> loop[i].x >> loop[i].y))
        throw std::runtime_error("polygon file: truncated vertex list");
    return loop;
  };
  Loop outer = read_loop();
  std::vector<Loop> holes;
  for (int l = 1; l < nloops; ++l) holes.push_back(read_loop());
  return Polygon(std::move(outer), std::move(holes));
}

Polygon read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polygon file: " + path);
  return read_polygon(in);
}

void write_polygon(std::ostream& out, const Polygon& poly) {
  out << "2 " << (1 + poly.holes().size()) << "\n";
  auto put_loop = [&](const Loop& loop) {
    out << loop.size() << "\n";
    for (const Vec2& v : loop) out << format_full(v.x) << " " << format_full(v.y) << "\n";
  };
  put_loop(poly.outer());
  for (const Loop& h : poly.holes()) put_loop(h);
}

void write_polygon_file(const std::string& path, const Polygon& poly) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write polygon file: " + path);
  write_polygon(out, poly);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_points_csv(const std::string& path, const std::vector<Vec2>& pts) {
  std::ofstream out = open_out(path);
  out << "x,y\n";
  for (const Vec2& p : pts) out << format_full(p.x) << "," << format_full(p.y) << "\n";
}

void write_fekete_csv(const std::string& path, const FeketeSet& fs) {
  std::ofstream out = open_out(path);
  out << "x,y,w\n";
  for (int i = 0; i < fs.size(); ++i)
    out << format_full(fs.points[i].x) << "," << format_full(fs.points[i].y) << ","
        << format_full(fs.weights(i)) << "\n";
}

void write_moments_csv(const std::string& path, const MonomialSpec& spec,
                       const Eigen::VectorXd& m) {
  std::ofstream out = open_out(path);
  out << "dx,dy,moment\n";
  for (int j = 0; j < spec.size(); ++j)
    out << spec.exponents[j][0] << "," << spec.exponents[j][1] << "," << format_full(m(j)) << "\n";
}

void write_rule_csv(const std::string& path, const std::vector<Vec2>& nodes,
                    const std::vector<double>& weights) {
  std::ofstream out = open_out(path);
  out << "x,y,w\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out << format_full(nodes[i].x) << "," << format_full(nodes[i].y) << ","
        << format_full(weights[i]) << "\n";
}

}  // namespace shull
