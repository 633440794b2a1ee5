#include "persuade/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persuade {

double epsilon_theorem1(std::size_t m, std::int64_t horizon) {
  if (horizon < 3) throw std::invalid_argument("epsilon_theorem1: horizon too small");
  double t = static_cast<double>(horizon);
  double eps = std::cbrt(static_cast<double>(m) * std::log(t) / t);
  return std::clamp(eps, 1e-6, 1.0);
}

namespace {

std::size_t snap_into(const std::vector<double>& sorted, double x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  std::size_t best = sorted.size();
  double best_d = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) {
    best = static_cast<std::size_t>(it - sorted.begin());
    best_d = std::abs(*it - x);
  }
  if (it != sorted.begin()) {
    double d = std::abs(*(it - 1) - x);
    if (d < best_d) {
      best = static_cast<std::size_t>(it - sorted.begin()) - 1;
      best_d = d;
    }
  }
  if (best_d > kSnapTol) throw std::logic_error("engine: realized critical type misses the tracker grid");
  return best;
}

}  // namespace

namespace detail {

RunResult run_loop(const Instance& inst, const TypeDistribution& dist, std::vector<double> tracker_points,
                   const Policy& policy, const RunConfig& cfg, const QualitySampler& sampler, AdvKind learn_kind) {
  const std::int64_t init_rounds = static_cast<std::int64_t>(tracker_points.size());
  if (cfg.horizon < init_rounds)
    throw std::invalid_argument("run_loop: horizon shorter than the init sweep over the type grid");

  DemandTracker tracker(tracker_points, cfg.horizon);
  RunResult result(std::move(tracker));
  result.seed = cfg.seed;
  result.horizon = cfg.horizon;
  result.epsilon = cfg.epsilon;
  result.rounds.reserve(static_cast<std::size_t>(cfg.horizon));

  Rng rng(cfg.seed);
  const double mean = prior_mean(inst);
  const Advertising uninformative = no_info(inst);

  auto play_round = [&](std::int64_t t, double price, const Advertising& adv, AdvKind kind, bool learning,
                        const std::vector<double>* envelope) {
    RoundRecord rec;
    rec.t = t;
    rec.price = price;
    rec.adv_kind = kind;
    auto [signal_idx, record_idx] = sampler(rng);
    rec.quality_index = record_idx;
    std::size_t k = sample_posterior_mean(adv, signal_idx, rng);
    rec.posterior_mean = adv.support[k];
    double theta = sample_type(dist, rng);
    double kappa = critical_type(inst.valuation, price, rec.posterior_mean);
    rec.purchased = theta >= kappa;  // weak inequality: marginal buyers buy
    std::size_t xi = snap_into(result.tracker.points(), kappa);
    rec.critical_type = result.tracker.points()[xi];
    rec.revenue_realized = rec.purchased ? price : 0.0;
    rec.revenue_expected = revenue(price, adv, inst, dist);
    if (cfg.observer) {
      RoundObservation obs;
      obs.t = t;
      obs.learning_phase = learning;
      obs.ucb = envelope;
      obs.tracker = &result.tracker;
      obs.record = &rec;
      cfg.observer(obs);
    }
    result.tracker.record(xi, rec.purchased);
    result.total_expected += rec.revenue_expected;
    result.total_realized += rec.revenue_realized;
    result.rounds.push_back(rec);
  };

  // Init sweep: target each grid type x once through kappa(p, mean) = x.
  for (std::int64_t t = 1; t <= init_rounds; ++t) {
    double x = result.tracker.points()[static_cast<std::size_t>(t - 1)];
    double price = valuation_at(inst.valuation, x, mean);
    price = std::min(price, inst.price_cap);  // possible only with an overridden cap
    play_round(t, price, uninformative, AdvKind::init_no_info, false, nullptr);
  }

  std::vector<double> envelope;
  for (std::int64_t t = init_rounds + 1; t <= cfg.horizon; ++t) {
    PricingSolution choice = policy(result.tracker);
    const std::vector<double>* env_ptr = nullptr;
    if (cfg.observer) {
      envelope = result.tracker.ucb();
      env_ptr = &envelope;
    }
    play_round(t, choice.price, choice.advertising, learn_kind, true, env_ptr);
  }
  return result;
}

}  // namespace detail

namespace {

detail::QualitySampler plain_sampler(const Instance& inst) {
  return [&inst](Rng& rng) {
    std::size_t i = sample_quality(inst, rng);
    return std::pair<std::size_t, std::size_t>{i, i};
  };
}

}  // namespace

RunResult run_algorithm1(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg) {
  Grid grid = build_grids(inst, cfg.epsilon);
  std::vector<SupportSet> supports;
  supports.reserve(grid.prices.size());
  for (double p : grid.prices) supports.push_back(make_support_set(grid, inst, p));
  detail::Policy policy = [&inst, &grid, &supports](const DemandTracker& tracker) {
    return solve_ucb_program(inst, grid, tracker, supports);
  };
  return detail::run_loop(inst, dist, grid.types, policy, cfg, plain_sampler(inst), AdvKind::optimized);
}

RunResult run_algorithm2(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg, double eps_hat) {
  PooledInstance pooled = pool_instance(inst, eps_hat);
  Grid grid = build_grids(pooled.instance, cfg.epsilon);
  std::vector<SupportSet> supports;
  supports.reserve(grid.prices.size());
  for (double p : grid.prices) supports.push_back(make_support_set(grid, pooled.instance, p));
  detail::Policy policy = [inst = pooled.instance, &grid, &supports](const DemandTracker& tracker) {
    return solve_ucb_program(inst, grid, tracker, supports);
  };
  // The product is drawn from the original prior; the seller signals through
  // the pooled bucket containing the realized quality.
  detail::QualitySampler sampler = [&inst, map = pooled.bucket_of](Rng& rng) {
    std::size_t original = sample_quality(inst, rng);
    return std::pair<std::size_t, std::size_t>{map[original], original};
  };
  return detail::run_loop(pooled.instance, dist, grid.types, policy, cfg, sampler, AdvKind::optimized);
}

RunResult run_algorithm2(const ContinuousPrior& prior, const Valuation& valuation, const TypeDistribution& dist,
                         const RunConfig& cfg, double eps_hat) {
  PooledInstance pooled = pool_instance(prior, valuation, eps_hat);
  RunResult res = run_algorithm1(pooled.instance, dist, cfg);
  res.notes += "continuous prior pooled via midpoint quadrature; qualities drawn from bucket masses\n";
  return res;
}

RunResult run_fixed_advertising_baseline(const Instance& inst, const TypeDistribution& dist, const RunConfig& cfg,
                                         AdvKind mode) {
  if (mode != AdvKind::fixed_no_info && mode != AdvKind::fixed_full_info)
    throw std::invalid_argument("run_fixed_advertising_baseline: mode must be a fixed advertising kind");
  Grid grid = build_grids(inst, cfg.epsilon);
  Advertising fixed = mode == AdvKind::fixed_no_info ? no_info(inst) : full_info(inst);

  // The tracker covers S plus every critical type the fixed advertising can
  // induce (for full information these already sit in S by construction).
  std::vector<double> points = grid.types;
  for (double p : grid.prices)
    for (double q : fixed.support) points.push_back(critical_type(inst.valuation, p, q));
  std::sort(points.begin(), points.end());
  std::vector<double> dedup;
  for (double x : points)
    if (dedup.empty() || x - dedup.back() > kDedupTol) dedup.push_back(x);

  // Per price: tracker index of each induced critical type, with the fixed
  // advertising's marginal masses.
  std::vector<double> masses = fixed.marginals(inst);
  std::vector<std::vector<std::size_t>> induced(grid.prices.size());
  for (std::size_t pi = 0; pi < grid.prices.size(); ++pi) {
    induced[pi].reserve(fixed.support.size());
    for (double q : fixed.support)
      induced[pi].push_back(snap_into(dedup, critical_type(inst.valuation, grid.prices[pi], q)));
  }

  detail::Policy policy = [&, masses, induced](const DemandTracker& tracker) {
    std::vector<double> envelope = tracker.ucb();
    PricingSolution best;
    bool have = false;
    for (std::size_t pi = 0; pi < grid.prices.size(); ++pi) {
      double estimate = 0.0;
      for (std::size_t j = 0; j < fixed.support.size(); ++j) estimate += masses[j] * envelope[induced[pi][j]];
      estimate *= grid.prices[pi];
      if (!have || estimate > best.objective + 1e-12) {
        best = PricingSolution{grid.prices[pi], fixed, estimate, 0};
        have = true;
      }
    }
    return best;
  };
  return detail::run_loop(inst, dist, dedup, policy, cfg, plain_sampler(inst), mode);
}

RegretCurve regret_curve(const RunResult& run, double opt_per_round) {
  RegretCurve curve;
  curve.expected.reserve(run.rounds.size());
  curve.realized.reserve(run.rounds.size());
  double ce = 0.0, cr = 0.0;
  for (const RoundRecord& rec : run.rounds) {
    ce += opt_per_round - rec.revenue_expected;
    cr += opt_per_round - rec.revenue_realized;
    curve.expected.push_back(ce);
    curve.realized.push_back(cr);
  }
  return curve;
}

}  // namespace persuade
