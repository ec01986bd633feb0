#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eql/json_io.hpp"

namespace eql {

struct ExperimentConfig {
  std::string id;
  std::vector<std::string> inputs;  // lamination files
  std::vector<double> nu_grid{0.1, 0.25, 0.5, 1.0};
  SearchBudget budget{};
  std::vector<double> t_grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: standard output
  std::string format = "json";
};

struct ExperimentResult {
  Json data;  // schema, config echo, tables, checks, verdict
  bool pass = false;
  bool budget_exhausted = false;
  // 0 pass, 1 relation violated, 3 budget exhausted without a verdict
  int exit_code() const { return pass ? 0 : (budget_exhausted ? 3 : 1); }
};

const std::vector<std::string>& experiment_ids();
// Throws ConfigError for unknown ids or bad settings, InputParseError for inputs.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Keys: experiment, inputs, nu, budget, t_grid, seed, out, format.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

// The "table" rows of a result as CSV, columns in key order.
std::string to_csv(const ExperimentResult& result);

// Rejection sampling of pairwise non-crossing leaves with endpoints at least
// `gap` apart; weights uniform in [wlo, whi].
DiscreteLamination random_lamination(std::mt19937_64& rng, int leaves, double wlo = 0.1, double whi = 1.0,
                                     double gap = 1e-3);
// Nested leaves (alpha_k, beta_k) with alpha rising in [lo1, hi1] and beta
// falling in [lo2, hi2]; has a support window.
DiscreteLamination random_chain(std::mt19937_64& rng, int leaves, double lo1 = 0.5, double hi1 = 2.0,
                                double lo2 = 3.5, double hi2 = 5.5);

// Tent c * max(0, 1 - d(g, center) / r) in the endpoint metric; Lipschitz c / r.
struct Tent {
  Geodesic center;
  double radius;
  double height;
  double operator()(const Geodesic& g) const;
};
// The three fixed profiles of the first example.
std::vector<Tent> example_tents();

}  // namespace eql
