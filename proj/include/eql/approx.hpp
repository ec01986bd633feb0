#pragma once

#include <optional>
#include <vector>

#include "eql/search.hpp"

namespace eql {

// Cells with pairwise disjoint interiors covering a window. Bisections leave the
// upper half closed and the lower half open at the cut, so cells are disjoint.
struct BoxPartition {
  GeodesicBox window = q_star();
  std::vector<GeodesicBox> cells;
};

// Liouville measure with point sides counted as 0.
double cell_liouville(const GeodesicBox& q);
// Halves of q across the longer arc (angle measure).
std::pair<GeodesicBox, GeodesicBox> bisect(const GeodesicBox& q);

BoxPartition partition_window(const GeodesicBox& window, double max_l);

// Box spanned by the two peak leaves of lambda in B; nullopt when B holds no
// leaf or a single one (a lone atom, or a boundary leaf of measure zero).
// Throws OracleInconsistent when the oracle reports peaks outside B.
std::optional<GeodesicBox> peak_shrink(const GeodesicBox& b, const LaminationOracle& lambda);

struct LedgerEntry {
  GeodesicBox cell = q_star();
  std::optional<GeodesicBox> shrunk;
  double continuous_mass = 0.0;
  std::optional<Geodesic> leaf;  // Dirac placed here with the cell's continuous mass
  double atom_tail = 0.0;        // atoms trimmed from this cell
};

struct ThurstonRecord {
  double input_box_sup = 0.0;
  bool input_exact = false;
  double output_box_sup = 0.0;
  double bound = 0.0;  // 2 * input_box_sup + 2
  bool holds() const { return output_box_sup <= bound; }
};

struct DiscretizationReport {
  int n = 0;
  DiscreteLamination lambda_n;
  std::vector<WeightedLeaf> atoms;  // atomic part kept as is
  std::vector<LedgerEntry> ledger;
  double atom_tail = 0.0;     // total trimmed atom mass
  double dropped_mass = 0.0;  // continuous mass in cells without two peaks
  std::optional<ThurstonRecord> thurston;
};

struct DiscretizeOptions {
  bool thurston_record = true;
  SearchBudget budget{};
  int max_depth = 48;  // bisection depth before giving up on a cell
};

// Discrete approximation with per-cell continuous mass < 1/n.
// Discrete input is returned as is. Otherwise throws WindowRequired when
// lambda has no support window.
DiscretizationReport discretize(const LaminationOracle& lambda, int n, const DiscretizeOptions& opt = {});

// Number of boxes meeting q without lying inside it.
int overlap_census(const std::vector<GeodesicBox>& boxes, const GeodesicBox& q);
// Shrunk boxes of a ledger.
std::vector<GeodesicBox> ledger_boxes(const DiscretizationReport& report);

}  // namespace eql
