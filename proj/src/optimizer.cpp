#include "persuade/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "persuade/parallel.hpp"
#include "persuade/simplex.hpp"

namespace persuade {

namespace {

// Rebuilds the advertising from LP masses w_{i,k}: clamp stray negatives,
// renormalize each conditional row, drop support points carrying no mass.
Advertising extract_advertising(const Instance& inst, const std::vector<double>& support,
                                const std::vector<double>& w) {
  const std::size_t m = inst.num_qualities();
  const std::size_t K = support.size();
  Advertising adv;
  adv.support = support;
  adv.conditionals.assign(m, std::vector<double>(K, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      double v = std::max(w[k * m + i], 0.0) / inst.weight(i);
      adv.conditionals[i][k] = v;
      row_sum += v;
    }
    if (row_sum <= 0.0) throw std::logic_error("extract_advertising: empty conditional row");
    for (std::size_t k = 0; k < K; ++k) adv.conditionals[i][k] /= row_sum;
  }
  // Prune zero-mass columns.
  Advertising pruned;
  pruned.conditionals.assign(m, {});
  for (std::size_t k = 0; k < K; ++k) {
    if (adv.marginal(inst, k) <= 0.0) continue;
    pruned.support.push_back(adv.support[k]);
    for (std::size_t i = 0; i < m; ++i) pruned.conditionals[i].push_back(adv.conditionals[i][k]);
  }
  return pruned;
}

double objective_of(const Instance& inst, const Advertising& adv, const std::vector<double>& support,
                    const std::vector<double>& g) {
  // Values are looked up by nearest support point (the advertising support is
  // a subset of `support` up to pruning).
  double total = 0.0;
  for (std::size_t k = 0; k < adv.num_points(); ++k) {
    auto it = std::lower_bound(support.begin(), support.end(), adv.support[k]);
    std::size_t idx = it == support.end() ? support.size() - 1 : static_cast<std::size_t>(it - support.begin());
    if (idx > 0 && std::abs(support[idx - 1] - adv.support[k]) < std::abs(support[idx] - adv.support[k])) --idx;
    total += adv.marginal(inst, k) * g[idx];
  }
  return total;
}

SignalingSolution solve_single_quality(const Instance& inst, const std::vector<double>& support,
                                       const std::vector<double>& g) {
  // Bayes consistency pins all mass on the unique quality.
  double target = inst.quality(0);
  std::size_t best = support.size();
  for (std::size_t k = 0; k < support.size(); ++k)
    if (std::abs(support[k] - target) <= kDedupTol) {
      best = k;
      break;
    }
  if (best == support.size())
    throw std::invalid_argument("solve_signaling_lp: support must contain the quality points");
  SignalingSolution sol;
  sol.advertising.support = {support[best]};
  sol.advertising.conditionals = {{1.0}};
  sol.objective = g[best];
  return sol;
}

// m = 2: every distribution over the posterior-mean segment with the prior
// mean is feasible, so the optimum is the upper concave envelope of the
// support values evaluated at the prior mean.
SignalingSolution solve_binary_quality(const Instance& inst, const std::vector<double>& support,
                                       const std::vector<double>& g) {
  const double mean = prior_mean(inst);
  const double o1 = inst.quality(0), o2 = inst.quality(1);
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (support[b] - support[a]) * (g[c] - g[a]) - (g[b] - g[a]) * (support[c] - support[a]);
  };
  std::vector<std::size_t> hull;
  for (std::size_t idx : order) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), idx) >= 0.0) hull.pop_back();
    hull.push_back(idx);
  }

  SignalingSolution sol;
  auto single_point = [&](std::size_t k) {
    sol.advertising.support = {support[k]};
    sol.advertising.conditionals = {{1.0}, {1.0}};
    sol.objective = g[k];
  };
  // Locate the hull segment covering the prior mean.
  std::size_t hi = hull.size();
  for (std::size_t h = 0; h < hull.size(); ++h) {
    if (support[hull[h]] >= mean - kDedupTol && std::abs(support[hull[h]] - mean) <= kDedupTol) {
      single_point(hull[h]);
      return sol;
    }
    if (support[hull[h]] > mean) {
      hi = h;
      break;
    }
  }
  if (hi == 0 || hi == hull.size()) {
    // Mean at or beyond the hull edge (degenerate hull ranges).
    single_point(hi == 0 ? hull.front() : hull.back());
    return sol;
  }
  std::size_t a = hull[hi - 1], b = hull[hi];
  double qa = support[a], qb = support[b];
  double nu_a = (qb - mean) / (qb - qa);
  double nu_b = 1.0 - nu_a;
  sol.objective = nu_a * g[a] + nu_b * g[b];
  sol.advertising.support = {qa, qb};
  double span = o2 - o1;
  sol.advertising.conditionals = {
      {nu_a * (o2 - qa) / (span * inst.weight(0)), nu_b * (o2 - qb) / (span * inst.weight(0))},
      {nu_a * (qa - o1) / (span * inst.weight(1)), nu_b * (qb - o1) / (span * inst.weight(1))}};
  return sol;
}

}  // namespace

SignalingSolution solve_signaling_lp(const Instance& inst, double /*p*/, const std::vector<double>& support,
                                     const std::vector<double>& g) {
  if (support.empty() || support.size() != g.size())
    throw std::invalid_argument("solve_signaling_lp: support/value size mismatch");
  for (double v : g)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_signaling_lp: nonfinite objective value");

  const std::size_t m = inst.num_qualities();
  if (m == 1) return solve_single_quality(inst, support, g);
  if (m == 2) return solve_binary_quality(inst, support, g);

  const std::size_t K = support.size();
  const std::size_t n = m * K;  // variables w_{i,k}, column k*m + i
  std::vector<std::vector<double>> A(m + K, std::vector<double>(n, 0.0));
  std::vector<double> b(m + K, 0.0);
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < K; ++k) A[i][k * m + i] = 1.0;
    b[i] = inst.weight(i);
  }
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < m; ++i) A[m + k][k * m + i] = inst.quality(i) - support[k];
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < m; ++i) c[k * m + i] = g[k];

  LpResult lp = solve_equality_lp(A, b, c);
  if (lp.status != LpResult::Status::optimal)
    throw std::logic_error("solve_signaling_lp: infeasible system despite full-information columns");

  SignalingSolution sol;
  sol.advertising = extract_advertising(inst, support, lp.x);
  sol.lp_pivots = lp.pivots;
  sol.objective = objective_of(inst, sol.advertising, support, g);
  return sol;
}

namespace {

bool better_price(const PricingSolution& a, const PricingSolution& b) {
  // Maximal estimate; ties within 1e-12 go to the smaller price.
  if (a.objective > b.objective + 1e-12) return true;
  if (b.objective > a.objective + 1e-12) return false;
  return a.price < b.price;
}

}  // namespace

PricingSolution price_scan(const Instance& inst, const Grid& grid,
                           const std::function<std::vector<double>(const SupportSet&)>& g_of, int threads) {
  const std::size_t np = grid.prices.size();
  std::vector<PricingSolution> per_price(np);
  parallel_for(np, threads, [&](std::size_t pi) {
    double p = grid.prices[pi];
    SupportSet set = make_support_set(grid, inst, p);
    std::vector<double> g = g_of(set);
    SignalingSolution sol = solve_signaling_lp(inst, p, set.points, g);
    per_price[pi] = PricingSolution{p, std::move(sol.advertising), p * sol.objective, sol.lp_pivots};
  });
  PricingSolution best = per_price.front();
  for (std::size_t pi = 1; pi < np; ++pi)
    if (better_price(per_price[pi], best)) best = per_price[pi];
  return best;
}

PricingSolution solve_ucb_program(const Instance& inst, const Grid& grid, const DemandTracker& tracker,
                                  const std::vector<SupportSet>& supports) {
  std::vector<double> envelope = tracker.ucb();
  PricingSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<double> g;
  for (const SupportSet& set : supports) {
    g.resize(set.points.size());
    for (std::size_t k = 0; k < set.points.size(); ++k) g[k] = envelope[set.type_index[k]];
    SignalingSolution sol = solve_signaling_lp(inst, set.price, set.points, g);
    PricingSolution cand{set.price, std::move(sol.advertising), set.price * sol.objective, sol.lp_pivots};
    if (best.objective == -std::numeric_limits<double>::infinity() || better_price(cand, best)) best = std::move(cand);
  }
  return best;
}

ClairvoyantSolution clairvoyant_opt(const Instance& inst, const TypeDistribution& dist, double eps_opt,
                                    int threads) {
  Grid grid = build_grids(inst, eps_opt);
  PricingSolution best = price_scan(
      inst, grid,
      [&](const SupportSet& set) {
        std::vector<double> g(set.points.size());
        for (std::size_t k = 0; k < set.points.size(); ++k)
          g[k] = dist.demand(critical_type(inst.valuation, set.price, set.points[k]));
        return g;
      },
      threads);
  return ClairvoyantSolution{best.price, std::move(best.advertising), best.objective, eps_opt};
}

ClairvoyantSolution clairvoyant_fixed_advertising(const Instance& inst, const TypeDistribution& dist,
                                                  const Advertising& adv, double eps_opt) {
  Grid grid = build_grids(inst, eps_opt);
  ClairvoyantSolution best;
  best.epsilon = eps_opt;
  best.advertising = adv;
  best.revenue = -std::numeric_limits<double>::infinity();
  for (double p : grid.prices) {
    double value = revenue(p, adv, inst, dist);
    if (value > best.revenue + 1e-12 || best.revenue == -std::numeric_limits<double>::infinity()) {
      best.revenue = value;
      best.price = p;
    }
  }
  return best;
}

namespace {

// Largest residual of the integrated-CDF contraction inequalities
// E_nu (c - q)+ <= E_lambda (c - omega)+ over kinks c; with matching means
// this characterizes decomposability (mean-preserving contraction).
double contraction_residual(const Instance& inst, const std::vector<double>& support,
                            const std::vector<double>& nu) {
  double worst = 0.0;
  auto check_at = [&](double c) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) lhs += nu[k] * std::max(c - support[k], 0.0);
    for (std::size_t i = 0; i < inst.num_qualities(); ++i)
      rhs += inst.weight(i) * std::max(c - inst.quality(i), 0.0);
    worst = std::max(worst, lhs - rhs);
  };
  for (double c : support) check_at(c);
  for (double o : inst.qualities.qualities) check_at(o);
  return worst;
}

// Exact mean repair: shift mass toward the needed extreme. Returns false
// when the candidate lacks movable mass.
bool repair_mean(const std::vector<double>& support, double target, std::vector<double>& nu) {
  double mean = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) mean += nu[k] * support[k];
  double shift = target - mean;
  const std::size_t K = support.size();
  for (int pass = 0; pass < 2 && std::abs(shift) > 1e-15; ++pass) {
    if (shift > 0.0) {
      std::size_t dest = K - 1;
      for (std::size_t k = 0; k < dest && shift > 1e-15; ++k) {
        double gap = support[dest] - support[k];
        if (gap <= 1e-12 || nu[k] <= 0.0) continue;
        double amount = std::min(nu[k], shift / gap);
        nu[k] -= amount;
        nu[dest] += amount;
        shift -= amount * gap;
      }
    } else {
      std::size_t dest = 0;
      for (std::size_t k = K; k-- > 1 && shift < -1e-15;) {
        double gap = support[dest] - support[k];  // negative
        if (gap >= -1e-12 || nu[k] <= 0.0) continue;
        double amount = std::min(nu[k], shift / gap);
        nu[k] -= amount;
        nu[dest] += amount;
        shift -= amount * gap;
      }
    }
  }
  return std::abs(shift) <= 1e-12;
}

}  // namespace

BruteForceResult brute_force_small(const Instance& inst, const std::vector<double>& support,
                                   const std::vector<double>& g, int resolution) {
  const std::size_t m = inst.num_qualities();
  const std::size_t K = support.size();
  if (m > 3 || K > 5 || resolution > 50 || resolution < 1)
    throw std::invalid_argument("brute_force_small: size limits are m<=3, |support|<=5, k<=50");
  if (g.size() != K) throw std::invalid_argument("brute_force_small: support/value mismatch");

  const double window = 1.0 / (2.0 * static_cast<double>(resolution));
  const double mean_target = prior_mean(inst);
  BruteForceResult res;

  std::vector<double> nu(K, 0.0);
  std::vector<int> units(K, 0);
  auto consider = [&](const std::vector<int>& counts) {
    ++res.candidates;
    for (std::size_t k = 0; k < K; ++k) nu[k] = static_cast<double>(counts[k]) / static_cast<double>(resolution);
    double mean = 0.0, value = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      mean += nu[k] * support[k];
      value += nu[k] * g[k];
    }
    if (std::abs(mean - mean_target) > window) return;
    if (contraction_residual(inst, support, nu) <= window) res.best_windowed = std::max(res.best_windowed, value);
    std::vector<double> repaired = nu;
    if (repair_mean(support, mean_target, repaired) && contraction_residual(inst, support, repaired) <= 1e-9) {
      double rv = 0.0;
      for (std::size_t k = 0; k < K; ++k) rv += repaired[k] * g[k];
      res.best_exact = std::max(res.best_exact, rv);
    }
  };

  // Enumerate compositions of `resolution` into K parts.
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int remaining) {
    if (k + 1 == K) {
      units[k] = remaining;
      consider(units);
      return;
    }
    for (int u = 0; u <= remaining; ++u) {
      units[k] = u;
      rec(k + 1, remaining - u);
    }
  };
  rec(0, resolution);
  return res;
}

}  // namespace persuade
