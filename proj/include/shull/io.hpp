#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "shull/fekete.hpp"
#include "shull/geometry.hpp"

namespace shull {

/// Full-precision decimal rendering (17 significant digits), so repeated
/// runs diff byte-identically.
std::string format_full(double v);

/// Polygon text format: first line "d nloops", then per loop a vertex count
/// followed by that many "x y" pairs, outer loop first.
Polygon read_polygon(std::istream& in);
Polygon read_polygon_file(const std::string& path);
void write_polygon(std::ostream& out, const Polygon& poly);
void write_polygon_file(const std::string& path, const Polygon& poly);

void write_points_csv(const std::string& path, const std::vector<Vec2>& pts);
void write_fekete_csv(const std::string& path, const FeketeSet& fs);
void write_moments_csv(const std::string& path, const MonomialSpec& spec,
                       const Eigen::VectorXd& m);
void write_rule_csv(const std::string& path, const std::vector<Vec2>& nodes,
                    const std::vector<double>& weights);

}  // namespace shull
