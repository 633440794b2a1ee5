#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "persuade/grid.hpp"
#include "persuade/optimizer.hpp"
#include "persuade/signaling.hpp"
#include "persuade/tracker.hpp"

namespace persuade {

enum class AdvKind : std::uint8_t { init_no_info = 0, optimized = 1, fixed_no_info = 2, fixed_full_info = 3 };

struct RoundRecord {
  std::int64_t t = 0;  // 1-based
  double price = 0.0;
  AdvKind adv_kind = AdvKind::init_no_info;
  std::size_t quality_index = 0;  // realized product quality
  double posterior_mean = 0.0;    // realized q_t
  double critical_type = 0.0;     // x_t, snapped into the tracker grid
  bool purchased = false;
  double revenue_realized = 0.0;  // price * a_t
  double revenue_expected = 0.0;  // exact E[revenue] of the round's (p, rho)
};

struct RunResult {
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  double epsilon = 0.0;
  std::vector<RoundRecord> rounds;
  DemandTracker tracker;  // final snapshot
  double total_expected = 0.0;
  double total_realized = 0.0;
  std::string notes;  // run metadata (epsilon policy, log conventions, benchmark slack)

  explicit RunResult(DemandTracker t) : tracker(std::move(t)) {}
};

struct RoundObservation {
  std::int64_t t = 0;
  bool learning_phase = false;
  const std::vector<double>* ucb = nullptr;  // envelope used this round (learning phase)
  const DemandTracker* tracker = nullptr;    // state entering the round
  const RoundRecord* record = nullptr;
};

struct RunConfig {
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::function<void(const RoundObservation&)> observer;  // optional
};

/// Theorem-1 default discretization (m ln T / T)^(1/3), clamped into (0, 1].
double epsilon_theorem1(std::size_t m, std::int64_t horizon);

/// The online UCB algorithm: an init sweep visiting every grid type once via
/// uninformative advertising at price v(x, prior mean), then per-round
/// optimization of the UCB revenue program.
RunResult run_algorithm1(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg);

/// Quality pooling wrapper: pools the instance at eps_hat, runs the UCB
/// algorithm on the pooled instance while sampling the realized quality from
/// the original prior and signaling through its bucket.
RunResult run_algorithm2(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg, double eps_hat);
RunResult run_algorithm2(const ContinuousPrior& prior, const Valuation& valuation, const TypeDistribution& dist,
                         const RunConfig& cfg, double eps_hat);

/// Fixed-advertising baseline: the advertising stays at no-info or full-info
/// and only the price is optimized by the same UCB machinery over the
/// critical types that the fixed advertising can induce.
RunResult run_fixed_advertising_baseline(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg,
                                         AdvKind mode);

struct RegretCurve {
  std::vector<double> expected;  // cumulative opt - E[rev], per round
  std::vector<double> realized;
};

/// Cumulative regret against a per-round benchmark value (clairvoyant OPT).
/// Expected-revenue accounting is the primary series; realized is secondary.
RegretCurve regret_curve(const RunResult& run, double opt_per_round);

namespace detail {

// The core loop shared by every runner; policies map tracker state to the
// round's priced advertising.
using Policy = std::function<PricingSolution(const DemandTracker&)>;
// Returns (quality index used for signaling, quality index recorded).
using QualitySampler = std::function<std::pair<std::size_t, std::size_t>(Rng&)>;

RunResult run_loop(const Instance& inst, const TypeDistribution& dist, std::vector<double> tracker_points,
                   const Policy& policy, const RunConfig& cfg, const QualitySampler& sampler, AdvKind learn_kind);

}  // namespace detail

}  // namespace persuade
