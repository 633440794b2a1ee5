#include "persuade/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "persuade/grid.hpp"

namespace persuade {

double Advertising::marginal(const Instance& inst, std::size_t k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < conditionals.size(); ++i) s += inst.weight(i) * conditionals[i][k];
  return s;
}

std::vector<double> Advertising::marginals(const Instance& inst) const {
  std::vector<double> out(num_points(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = marginal(inst, k);
  return out;
}

std::vector<std::size_t> Advertising::backing(std::size_t k, double tol) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < conditionals.size(); ++i)
    if (conditionals[i][k] > tol) out.push_back(i);
  return out;
}

Advertising Advertising::merged(const Instance& inst, double tol) const {
  std::vector<std::size_t> order(num_points());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

  Advertising out;
  out.conditionals.assign(num_qualities(), {});
  for (std::size_t idx : order) {
    double mass = marginal(inst, idx);
    bool coincident = !out.support.empty() && support[idx] - out.support.back() <= tol;
    if (coincident) {
      for (std::size_t i = 0; i < num_qualities(); ++i) out.conditionals[i].back() += conditionals[i][idx];
    } else {
      if (mass <= 0.0) {
        bool any = false;
        for (std::size_t i = 0; i < num_qualities(); ++i) any = any || conditionals[i][idx] > 0.0;
        if (!any) continue;  // vacuous entry
      }
      out.support.push_back(support[idx]);
      for (std::size_t i = 0; i < num_qualities(); ++i) out.conditionals[i].push_back(conditionals[i][idx]);
    }
  }
  return out;
}

ValidationReport validate(const Advertising& adv, const Instance& inst) {
  ValidationReport rep;
  auto fail = [&](const std::string& constraint, double residual, const std::string& detail) {
    rep.ok = false;
    rep.constraint = constraint;
    rep.residual = residual;
    rep.detail = detail;
    return rep;
  };

  const std::size_t m = inst.num_qualities();
  if (adv.conditionals.size() != m) return fail("shape", 0.0, "conditional row count != m");
  for (std::size_t i = 0; i < m; ++i)
    if (adv.conditionals[i].size() != adv.support.size()) return fail("shape", 0.0, "ragged conditional row");

  const double lo = inst.qualities.lowest(), hi = inst.qualities.highest();
  for (std::size_t k = 0; k < adv.support.size(); ++k) {
    double q = adv.support[k];
    if (q < lo - kConsistencyTol || q > hi + kConsistencyTol)
      return fail("support-range", std::max(lo - q, q - hi), "support point outside quality hull");
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < adv.support.size(); ++k)
      if (adv.conditionals[i][k] < -kConsistencyTol)
        return fail("nonnegativity", -adv.conditionals[i][k], "negative conditional mass");

  for (std::size_t i = 0; i < m; ++i) {
    double s = std::accumulate(adv.conditionals[i].begin(), adv.conditionals[i].end(), 0.0);
    if (std::abs(s - 1.0) > kConsistencyTol) return fail("row-mass", std::abs(s - 1.0), "conditional row does not sum to 1");
  }

  for (std::size_t k = 0; k < adv.support.size(); ++k) {
    double mass = adv.marginal(inst, k);
    if (mass <= 0.0) continue;
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      residual += inst.weight(i) * adv.conditionals[i][k] * (inst.quality(i) - adv.support[k]);
    if (std::abs(residual) > kConsistencyTol) return fail("bayes-consistency", std::abs(residual), "posterior mean mismatch");
  }

  double mean = 0.0;
  for (std::size_t k = 0; k < adv.support.size(); ++k) mean += adv.marginal(inst, k) * adv.support[k];
  double drift = std::abs(mean - prior_mean(inst));
  if (drift > kMeanTol) return fail("mean-preservation", drift, "marginal mean differs from prior mean");

  return rep;
}

Advertising no_info(const Instance& inst) {
  Advertising adv;
  adv.support = {prior_mean(inst)};
  adv.conditionals.assign(inst.num_qualities(), {1.0});
  return adv;
}

Advertising full_info(const Instance& inst) {
  const std::size_t m = inst.num_qualities();
  Advertising adv;
  adv.support = inst.qualities.qualities;
  adv.conditionals.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) adv.conditionals[i][i] = 1.0;
  return adv;
}

std::size_t sample_posterior_mean(const Advertising& adv, std::size_t quality_index, Rng& rng) {
  return rng.categorical(adv.conditionals.at(quality_index));
}

double revenue_against(double p, const Advertising& adv, const Instance& inst,
                       const std::function<double(double)>& demand_fn) {
  double total = 0.0;
  for (std::size_t k = 0; k < adv.num_points(); ++k) {
    double mass = adv.marginal(inst, k);
    if (mass <= 0.0) continue;
    total += mass * demand_fn(critical_type(inst.valuation, p, adv.support[k]));
  }
  return p * total;
}

double revenue(double p, const Advertising& adv, const Instance& inst, const TypeDistribution& dist) {
  return revenue_against(p, adv, inst, [&](double x) { return dist.demand(x); });
}

Advertising binary_support_decompose(const Advertising& adv, const Instance& inst) {
  const std::size_t m = inst.num_qualities();
  Advertising out;
  out.conditionals.assign(m, {});
  auto emit = [&](double q, const std::vector<std::pair<std::size_t, double>>& cols) {
    out.support.push_back(q);
    for (std::size_t i = 0; i < m; ++i) out.conditionals[i].push_back(0.0);
    for (auto& [i, rho] : cols) out.conditionals[i].back() = rho;
  };

  for (std::size_t k = 0; k < adv.num_points(); ++k) {
    const double q = adv.support[k];
    // Working masses w_i = lambda_i * rho_i(q).
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = inst.weight(i) * adv.conditionals[i][k];

    std::size_t lo = 0, hi = m;  // [lo, hi): indices that may still hold mass
    while (true) {
      while (lo < m && w[lo] <= kDedupTol * inst.weight(lo)) ++lo;
      while (hi > lo && w[hi - 1] <= kDedupTol * inst.weight(hi - 1)) --hi;
      if (lo >= hi) break;
      std::size_t j = hi - 1;
      double wi = w[lo], wj = w[j];
      double oi = inst.quality(lo), oj = inst.quality(j);
      if (q < oi - kConsistencyTol || q > oj + kConsistencyTol)
        throw std::invalid_argument("binary_support_decompose: point mean outside remaining quality range");
      if (lo == j) {
        // Single backing quality: Bayes consistency forces q = quality.
        if (std::abs(oi - q) > kConsistencyTol)
          throw std::invalid_argument("binary_support_decompose: inconsistent input (residual single quality)");
        emit(q, {{lo, wi / inst.weight(lo)}});
        w[lo] = 0.0;
        continue;
      }
      if (q <= oi + kDedupTol) {
        // Mean pinned at the lowest remaining quality: the pair contributes
        // nothing from above; the point is (numerically) degenerate at oi.
        emit(q, {{lo, wi / inst.weight(lo)}});
        w[lo] = 0.0;
        continue;
      }
      if (q >= oj - kDedupTol) {
        emit(q, {{j, wj / inst.weight(j)}});
        w[j] = 0.0;
        continue;
      }
      // Two-point mixture with mean q: a*(q - oi) = b*(oj - q); take the
      // largest pair exhausting one side.
      double a_full = wj * (oj - q) / (q - oi);  // mass from lo matching all of wj
      double a, b;
      if (a_full <= wi) {
        a = a_full;
        b = wj;
      } else {
        a = wi;
        b = wi * (q - oi) / (oj - q);
      }
      emit(q, {{lo, a / inst.weight(lo)}, {j, b / inst.weight(j)}});
      w[lo] -= a;
      w[j] -= b;
    }
  }
  return out;
}

Advertising enforce_no_bad_posterior(double p, const Advertising& adv, const Instance& inst) {
  const std::size_t m = inst.num_qualities();
  auto quality_index_of = [&](double q) -> std::size_t {
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(inst.quality(i) - q) <= kDedupTol) return i;
    return m;
  };

  Advertising out;
  out.conditionals.assign(m, {});
  auto emit = [&](double q, std::size_t i, double rho) {
    if (rho <= 0.0) return;
    out.support.push_back(q);
    for (std::size_t r = 0; r < m; ++r) out.conditionals[r].push_back(r == i ? rho : 0.0);
  };

  for (std::size_t k = 0; k < adv.num_points(); ++k) {
    const double q = adv.support[k];
    bool interior = quality_index_of(q) == m;
    bool unaffordable = interior && valuation_at(inst.valuation, 1.0, std::clamp(q, 0.0, 1.0)) < p;
    if (!unaffordable) {
      out.support.push_back(q);
      for (std::size_t i = 0; i < m; ++i) out.conditionals[i].push_back(adv.conditionals[i][k]);
      continue;
    }
    auto backs = adv.backing(k);
    if (backs.size() > 2)
      throw std::invalid_argument("enforce_no_bad_posterior: input not binary-supported");
    // No type affords this interior posterior at price p: its demand term is
    // zero, so splitting the mass onto the backing qualities keeps revenue.
    for (std::size_t i : backs) emit(inst.quality(i), i, adv.conditionals[i][k]);
  }
  return out.merged(inst);
}

RoundedStrategy round_strategy(double p, const Advertising& adv, const Instance& inst, const Grid& grid) {
  const double eps = grid.epsilon;
  if (p < 2.0 * eps - kDedupTol) throw std::invalid_argument("round_strategy: requires p >= 2*eps");

  // p-dagger = max{p' in P : p - 2eps <= p' <= p - eps}.
  double p_dag = 0.0;
  bool found = false;
  for (double cand : grid.prices) {
    if (cand >= p - 2.0 * eps - kDedupTol && cand <= p - eps + kDedupTol) {
      p_dag = cand;
      found = true;
    }
  }
  if (!found) throw std::logic_error("round_strategy: no grid price in [p-2eps, p-eps]");

  const std::size_t m = inst.num_qualities();
  const Valuation& val = inst.valuation;
  const auto& mesh = grid.mesh;

  Advertising out;
  out.conditionals.assign(m, {});
  auto emit = [&](double q, const std::vector<std::pair<std::size_t, double>>& cols) {
    out.support.push_back(q);
    for (std::size_t i = 0; i < m; ++i) out.conditionals[i].push_back(0.0);
    for (auto& [i, rho] : cols) out.conditionals[i].back() += rho;
  };
  auto copy_entry = [&](std::size_t k) {
    out.support.push_back(adv.support[k]);
    for (std::size_t i = 0; i < m; ++i) out.conditionals[i].push_back(adv.conditionals[i][k]);
  };

  for (std::size_t k = 0; k < adv.num_points(); ++k) {
    const double q = adv.support[k];
    const double x_dag = critical_type(val, p_dag, q);
    if (grid.snap_distance(x_dag) <= kSnapTol) {
      // q already lies in Q_{p-dagger}.
      copy_entry(k);
      continue;
    }
    auto backs = adv.backing(k);
    if (backs.size() != 2)
      throw std::invalid_argument("round_strategy: off-grid point not backed by exactly two qualities");
    const std::size_t i = backs[0], j = backs[1];
    const double oi = inst.quality(i), oj = inst.quality(j);

    // Neighbouring mesh levels around x-dagger; x-dagger is strictly
    // interior, otherwise it would have snapped to S above.
    auto it = std::upper_bound(mesh.begin(), mesh.end(), x_dag);
    if (it == mesh.begin() || it == mesh.end())
      throw std::logic_error("round_strategy: critical type escaped the mesh");
    const double level_hi = *it;        // z*eps
    const double level_lo = *(it - 1);  // (z-1)*eps

    double q_l = critical_type_inverse_or_inf(val, p_dag, level_hi);
    double q_r = critical_type_inverse_or_inf(val, p_dag, level_lo);
    double q_l_dag = std::max(q_l, oi);
    double q_r_dag = std::min(q_r, oj);

    if (q_r_dag - q_l_dag <= kDedupTol) {
      // Degenerate split; treat the point as on-grid.
      copy_entry(k);
      continue;
    }

    const double mass = inst.weight(i) * adv.conditionals[i][k] + inst.weight(j) * adv.conditionals[j][k];
    const double left_share = mass * (q_r_dag - q) / (q_r_dag - q_l_dag);
    double rho_i_l = (oj - q_l_dag) / (oj - oi) / inst.weight(i) * left_share;
    double rho_j_l = (q_l_dag - oi) / (oj - oi) / inst.weight(j) * left_share;
    rho_i_l = std::clamp(rho_i_l, 0.0, adv.conditionals[i][k]);
    rho_j_l = std::clamp(rho_j_l, 0.0, adv.conditionals[j][k]);
    emit(q_l_dag, {{i, rho_i_l}, {j, rho_j_l}});
    emit(q_r_dag, {{i, adv.conditionals[i][k] - rho_i_l}, {j, adv.conditionals[j][k] - rho_j_l}});
  }

  RoundedStrategy result;
  result.price = p_dag;
  result.advertising = out.merged(inst);
  return result;
}

}  // namespace persuade
