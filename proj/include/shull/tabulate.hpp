#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shull/basis.hpp"

namespace shull {

/// One tabulated master-hull basis: a regular e-gon inscribed in the unit
/// circle, normalized, with its Fekete set and basis factors. Records are
/// keyed by (d, e, p, space, route); lookup is exact-match only.
struct TabRecord {
  int d = 2;
  int e = 0;  ///< polygon sides
  int p = 0;
  Space space = Space::P;
  BasisRoute route = BasisRoute::Direct;

  Polygon poly;  ///< normalized hull
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
  Eigen::MatrixXd U;  ///< restricted-Vandermonde factors
  Eigen::VectorXd S;
  Eigen::MatrixXd V;
  Eigen::MatrixXd a;            ///< nodal coefficients
  Eigen::MatrixXd modal_factor; ///< V S^-1
  double fnorm = 0.0;
};

/// Regular e-gon inscribed in the unit circle, first vertex at angle pi/2.
Polygon master_hull(int sides);

/// Compute the record for one master hull (QR-route selection from
/// fill-pattern candidates).
TabRecord tabulate_master_hull(int sides, int p, Space space,
                               BasisRoute route = BasisRoute::Direct);

TabRecord record_from_basis(const HullBasis& basis, int sides);

/// Versioned text serialization; multiple records may share one file.
void write_tab_record(std::ostream& out, const TabRecord& rec);
std::vector<TabRecord> read_tab_records(std::istream& in);
std::vector<TabRecord> read_tab_file(const std::string& path);
void append_tab_file(const std::string& path, const TabRecord& rec);

std::optional<TabRecord> lookup(const std::vector<TabRecord>& records, int d, int e, int p,
                                Space space, BasisRoute route);

/// Rebuild an evaluable basis from a stored record.
HullBasis basis_from_record(const TabRecord& rec);

}  // namespace shull
