#pragma once

// Shared builders for randomized tests: instances under the valuation
// assumptions, Bayes-consistent binary-supported advertisings, and arbitrary
// nonincreasing step demands.

#include <algorithm>
#include <functional>
#include <vector>

#include "persuade/market.hpp"
#include "persuade/rng.hpp"
#include "persuade/signaling.hpp"

namespace persuade::testutil {

inline Instance binary_uniform_instance() {
  return Instance::make({0.0, 1.0}, {0.5, 0.5}, Valuation::additive());
}

// Random monotone 1-Lipschitz generic valuation: alpha increasing with slopes
// in (0, 0.7], beta nonnegative with alpha' + beta' <= 1 on every interval.
inline Valuation random_linear_generic(Rng& rng) {
  std::vector<double> xs = {0.0, 0.3 + 0.2 * rng.uniform01(), 1.0};
  std::vector<double> alpha(3), beta(3);
  alpha[0] = 0.1 * rng.uniform01();
  beta[0] = 0.2 + 0.5 * rng.uniform01();
  for (int i = 1; i < 3; ++i) {
    double dx = xs[i] - xs[i - 1];
    double da = 0.15 + 0.45 * rng.uniform01();  // alpha slope
    // beta slope constrained by: increasing (da + db > 0), Lipschitz
    // (da + db <= 1), and beta staying nonnegative.
    double lo = std::max(-da + 0.05, -beta[i - 1] / dx);
    double hi = 1.0 - da - 0.01;
    double db = lo + (hi - lo) * rng.uniform01();
    alpha[i] = alpha[i - 1] + da * dx;
    beta[i] = beta[i - 1] + db * dx;
  }
  return Valuation::linear_generic(PiecewiseLinear(xs, alpha), PiecewiseLinear(xs, beta));
}

// Random instance with m qualities spanning [0, 1], positive prior, and a
// 1-Lipschitz valuation family (additive or generic).
inline Instance random_instance(Rng& rng, std::size_t m) {
  std::vector<double> qualities = {0.0};
  for (std::size_t i = 1; i + 1 < m; ++i) qualities.push_back(rng.uniform01());
  if (m >= 2) qualities.push_back(1.0);
  std::sort(qualities.begin(), qualities.end());
  for (std::size_t i = 1; i < qualities.size(); ++i)
    if (qualities[i] - qualities[i - 1] < 1e-3) qualities[i] = qualities[i - 1] + 1e-3;
  if (qualities.back() > 1.0) {  // rare collision pile-up near 1
    double scale = 1.0 / qualities.back();
    for (double& q : qualities) q *= scale;
  }
  std::vector<double> prior(qualities.size());
  double total = 0.0;
  for (double& w : prior) {
    w = 0.05 + rng.uniform01();
    total += w;
  }
  for (double& w : prior) w /= total;
  Valuation val = rng.uniform01() < 0.5 ? Valuation::additive() : random_linear_generic(rng);
  return Instance::make(qualities, prior, val);
}

// Random Bayes-consistent advertising, binary-supported by construction:
// repeatedly pull mass from a random quality pair onto an interior posterior
// mean, then park the remainders on their own qualities.
inline Advertising random_binary_advertising(const Instance& inst, Rng& rng, int interior_points = 3) {
  const std::size_t m = inst.num_qualities();
  Advertising adv;
  adv.conditionals.assign(m, {});
  std::vector<double> remaining(m, 1.0);  // conditional mass left per quality

  auto emit = [&](double q, std::size_t i, double rho_i, std::size_t j, double rho_j) {
    adv.support.push_back(q);
    for (std::size_t r = 0; r < m; ++r) adv.conditionals[r].push_back(0.0);
    adv.conditionals[i].back() += rho_i;
    if (j != i) adv.conditionals[j].back() += rho_j;
  };

  if (m >= 2) {
    for (int n = 0; n < interior_points; ++n) {
      std::size_t i = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(m - 1));
      std::size_t j = i + 1 + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(m - 1 - i));
      j = std::min(j, m - 1);
      if (i >= j || remaining[i] < 0.05 || remaining[j] < 0.05) continue;
      double oi = inst.quality(i), oj = inst.quality(j);
      double q = oi + (0.1 + 0.8 * rng.uniform01()) * (oj - oi);
      // Masses w with barycenter q: w_i (q - oi) = w_j (oj - q).
      double share = 0.3 + 0.6 * rng.uniform01();
      double wi_cap = remaining[i] * inst.weight(i) * share;
      double wj_cap = remaining[j] * inst.weight(j) * share;
      double wi = std::min(wi_cap, wj_cap * (oj - q) / (q - oi));
      double wj = wi * (q - oi) / (oj - q);
      if (wi <= 0.0 || wj <= 0.0) continue;
      emit(q, i, wi / inst.weight(i), j, wj / inst.weight(j));
      remaining[i] -= wi / inst.weight(i);
      remaining[j] -= wj / inst.weight(j);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (remaining[i] > 0.0) emit(inst.quality(i), i, remaining[i], i, 0.0);
  return adv;
}

// Arbitrary nonincreasing step demand on [0, 1], independent of any
// distribution object (levels in [0, 1], a few random breakpoints).
inline std::function<double(double)> random_step_demand(Rng& rng) {
  int steps = 1 + static_cast<int>(rng.uniform01() * 4.0);
  std::vector<double> cuts;
  for (int s = 0; s < steps; ++s) cuts.push_back(rng.uniform01());
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> levels;  // level after each cut, decreasing
  double level = 1.0;
  levels.push_back(level);
  for (int s = 0; s < steps; ++s) {
    level *= rng.uniform01();
    levels.push_back(level);
  }
  return [cuts, levels](double x) {
    std::size_t idx = 0;
    while (idx < cuts.size() && x > cuts[idx]) ++idx;
    return levels[idx];
  };
}

}  // namespace persuade::testutil
