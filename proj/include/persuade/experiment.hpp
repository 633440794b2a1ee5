#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persuade/engine.hpp"
#include "persuade/json_io.hpp"

namespace persuade {

enum class AlgorithmChoice { alg1, alg2, baseline_no_info, baseline_full_info };

enum class EpsilonPolicy { theorem1_default, equally_spaced, explicit_value };

struct ExperimentConfig {
  ordered_json instance_json;  // retained for fingerprinting and provenance
  Instance instance;
  TypeDistribution demand = TypeDistribution::uniform();
  AlgorithmChoice algorithm = AlgorithmChoice::alg1;
  std::vector<std::int64_t> horizons;  // strictly increasing
  std::vector<std::uint64_t> seeds;    // distinct
  EpsilonPolicy epsilon_policy = EpsilonPolicy::theorem1_default;
  double epsilon_value = 0.0;               // explicit policy only
  std::optional<double> epsilon_hat;        // alg2; defaults to (log T / T)^(1/4)
  double epsilon_opt = 1e-3;                // benchmark grid
  int threads = 0;                          // 0: hardware default

  static ExperimentConfig parse(const ordered_json& j);
  std::string fingerprint() const;
  // Discretization for a horizon under the configured policy (alg2 defaults
  // to the pooling prescription (log T / T)^(1/4)).
  double epsilon_for(std::int64_t horizon) const;
  double epsilon_hat_for(std::int64_t horizon) const;
};

struct CellResult {
  AlgorithmChoice algorithm;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double final_regret_expected = 0.0;
  double final_regret_realized = 0.0;
  double total_expected = 0.0;
  double total_realized = 0.0;
  std::string rounds_csv;   // relative file name
  std::string tracker_csv;  // relative file name
};

struct ExperimentSummary {
  std::string fingerprint;
  double opt_revenue = 0.0;  // clairvoyant benchmark (per round)
  double opt_price = 0.0;
  double epsilon_opt = 0.0;
  std::vector<CellResult> cells;
  std::optional<double> loglog_slope;  // ln(mean final regret) vs ln T
  ordered_json to_json(const ExperimentConfig& cfg) const;
};

/// Executes every (horizon, seed) cell, writes one rounds CSV and one tracker
/// CSV per cell plus summary.json under out_dir. Deterministic output for a
/// fixed config regardless of thread count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                 std::uint64_t seed_offset = 0, bool verbose = false);

/// The clairvoyant report: best grid price/advertising/revenue at eps_opt.
ordered_json opt_report(const ExperimentConfig& cfg);

std::string algorithm_name(AlgorithmChoice a);

/// Per-round CSV with the fixed column set
/// (t, p, q, x, a, revenue_realized, revenue_expected, regret_expected).
std::string rounds_to_csv(const RunResult& run, double opt_per_round);

}  // namespace persuade
