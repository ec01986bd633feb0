#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eql/laminations.hpp"

namespace eql {

// Limits for the supremum searches. Exhaustion is reported, never thrown.
struct SearchBudget {
  std::size_t sample_leaves = 48;  // leaves sampled from non-discrete oracles
  int tau_steps = 49;              // family sweep over tau in [-tau_max, tau_max]
  double tau_max = 12.0;
  int refine_starts = 4;           // Nelder-Mead restarts from the best candidates
  int refine_iters = 200;
  std::size_t max_evaluations = 2'000'000;
};

// Explicit constants of the Thurston/box comparison.
struct ComparisonConstants {
  double L0 = 1.0;           // length of the transverse arcs in the Thurston norm
  double box_distance = 0;   // log omega0: largest gap between leaves of a log 2 box
  double L_prime = 0;        // Liouville measure of the box between leaves L0 apart
  double C0 = 1.0;           // Th <= C0 * box_sup
  double reverse = 2.0;      // box_sup <= reverse * Th
};
ComparisonConstants comparison_constants();

struct BoxSupResult {
  double value = 0.0;
  std::optional<GeodesicBox> witness;
  double witness_mass = 0.0;
  bool exact = false;  // combinatorial value for discrete laminations
  bool budget_exhausted = false;
  std::size_t evaluations = 0;
};

struct ThurstonResult {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> certified_upper;  // total mass, when finite
  std::optional<Segment> witness_arc;     // unit-length arc realizing `lower`
  bool exact = false;
  bool budget_exhausted = false;
  ComparisonConstants constants;
};

struct BoxSearchResult {
  double value = 0.0;
  std::optional<GeodesicBox> witness;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

// Log 2 boxes around each center over the budget's tau grid.
std::vector<GeodesicBox> tau_sweep(const std::vector<Geodesic>& centers, const SearchBudget& budget);
// Best candidate under f (ties broken by corner angles), then Nelder-Mead from
// the best few. Candidates beyond max_evaluations are dropped and flagged.
BoxSearchResult maximize_over_boxes(const std::function<double(const GeodesicBox&)>& f,
                                    std::vector<GeodesicBox> candidates, const SearchBudget& budget);

// Sup of lambda(Q) over boxes with L(Q) = log 2. Exact for discrete laminations.
BoxSupResult box_sup(const LaminationOracle& lambda, const SearchBudget& budget = {});
ThurstonResult thurston_norm(const LaminationOracle& lambda, const SearchBudget& budget = {});

// Largest mass of leaves weakly between two leaves at distance <= r.
// Discrete laminations only; O(n^2 log n).
struct PairMax {
  double mass = 0.0;
  std::size_t i = 0, j = 0;  // indices into leaves(); i == j for a single leaf
};
PairMax max_pair_mass(const DiscreteLamination& lambda, double r);

// Unit-length geodesic arc crossing every leaf weakly between g and h
// (requires hyperbolic_distance(g, h) <= 1).
Segment unit_arc_between(const Geodesic& g, const Geodesic& h);

// Maximize f over (theta1, theta2, tau) parametrizing log2_box_tau(disk(theta1, theta2), tau),
// starting from each seed; returns the best value and point.
struct RefineResult {
  double value = 0.0;
  std::array<double, 3> x{};
  std::size_t evaluations = 0;
};
RefineResult refine_box_search(const std::function<double(const GeodesicBox&)>& f,
                               const std::vector<std::array<double, 3>>& seeds, int max_iters);

}  // namespace eql
