#include "persuade/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persuade {

namespace {

std::vector<double> sorted_dedup(std::vector<double> xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

}  // namespace

std::size_t Grid::snap_index(double x) const {
  auto it = std::lower_bound(types.begin(), types.end(), x);
  std::size_t best = types.size();
  double best_d = std::numeric_limits<double>::infinity();
  if (it != types.end()) {
    best = static_cast<std::size_t>(it - types.begin());
    best_d = std::abs(*it - x);
  }
  if (it != types.begin()) {
    auto prev = it - 1;
    double d = std::abs(*prev - x);
    if (d < best_d) {
      best = static_cast<std::size_t>(prev - types.begin());
      best_d = d;
    }
  }
  if (best_d > kSnapTol) throw std::logic_error("Grid::snap_index: critical type misses S; grid bug");
  return best;
}

double Grid::snap_distance(double x) const {
  auto it = std::lower_bound(types.begin(), types.end(), x);
  double d = std::numeric_limits<double>::infinity();
  if (it != types.end()) d = std::min(d, std::abs(*it - x));
  if (it != types.begin()) d = std::min(d, std::abs(*(it - 1) - x));
  return d;
}

bool Grid::is_grid_price(double p) const {
  auto it = std::lower_bound(prices.begin(), prices.end(), p - kSnapTol);
  return it != prices.end() && std::abs(*it - p) <= kSnapTol;
}

Grid build_grids(const Instance& inst, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw std::invalid_argument("build_grids: epsilon must lie in (0, 1]");
  Grid g;
  g.epsilon = epsilon;

  const double U = inst.price_cap;
  for (std::size_t k = 1;; ++k) {
    double p = static_cast<double>(k) * epsilon;
    if (p > U + kDedupTol) break;
    g.prices.push_back(std::min(p, U));
  }
  // Keep the highest meaningful price available when U is not an eps multiple.
  if (g.prices.empty() || U - g.prices.back() > kDedupTol) g.prices.push_back(U);

  for (std::size_t k = 0;; ++k) {
    double x = static_cast<double>(k) * epsilon;
    if (x > 1.0 + kDedupTol) break;
    g.mesh.push_back(std::min(x, 1.0));
  }
  if (1.0 - g.mesh.back() > kDedupTol) g.mesh.push_back(1.0);
  g.mesh = sorted_dedup(g.mesh, kDedupTol);

  std::vector<double> pts = g.mesh;
  for (double p : g.prices)
    for (std::size_t i = 0; i < inst.num_qualities(); ++i)
      pts.push_back(critical_type(inst.valuation, p, inst.quality(i)));
  g.types = sorted_dedup(std::move(pts), kDedupTol);
  return g;
}

std::vector<double> support_grid(const Grid& grid, const Instance& inst, double p) {
  if (!grid.is_grid_price(p)) throw std::invalid_argument("support_grid: price not in P");
  const double lo = inst.qualities.lowest();
  const double hi = inst.qualities.highest();
  const Valuation& val = inst.valuation;

  std::vector<double> out;
  out.reserve(grid.types.size() + inst.num_qualities());
  for (double x : grid.types) {
    if (x <= 0.0) {
      // kappa = 0 on the interval where v(0, q) >= p; both endpoints matter.
      double q0 = critical_type_inverse_or_inf(val, p, 0.0);
      if (q0 <= hi + kDedupTol) {
        out.push_back(std::max(q0, lo));
        out.push_back(hi);
      }
    } else if (x >= 1.0) {
      // kappa = 1 wherever v(1, q) <= p (root at exactly 1 or clamped).
      double q1 = critical_type_inverse_or_inf(val, p, 1.0);
      if (q1 >= lo - kDedupTol) {
        out.push_back(lo);
        out.push_back(std::min(q1, hi));
      }
    } else {
      double b = val.beta_at(x);
      if (b <= 0.0) {
        // Flat in q at this type level: either every q has kappa = x, or none.
        if (std::abs(val.alpha_at(x) - p) <= kRootTol) {
          out.push_back(lo);
          out.push_back(hi);
        }
        continue;
      }
      double q = critical_type_inverse(val, p, x);
      if (q >= lo - kDedupTol && q <= hi + kDedupTol) out.push_back(std::clamp(q, lo, hi));
    }
  }
  for (std::size_t i = 0; i < inst.num_qualities(); ++i) out.push_back(inst.quality(i));
  return sorted_dedup(std::move(out), kDedupTol);
}

SupportSet make_support_set(const Grid& grid, const Instance& inst, double p) {
  SupportSet s;
  s.price = p;
  s.points = support_grid(grid, inst, p);
  s.type_index.reserve(s.points.size());
  for (double q : s.points) s.type_index.push_back(grid.snap_index(critical_type(inst.valuation, p, q)));
  return s;
}

double epsilon_unit_fraction(std::size_t m, double bound) {
  if (m < 2) throw std::invalid_argument("epsilon_unit_fraction: need m >= 2");
  if (!(bound > 0.0)) throw std::invalid_argument("epsilon_unit_fraction: bound must be positive");
  double spacing = 1.0 / static_cast<double>(m - 1);
  double n = std::ceil(spacing / bound - 1e-12);
  if (n < 1.0) n = 1.0;
  return spacing / n;
}

double epsilon_equally_spaced(std::size_t m, std::int64_t horizon) {
  if (m < 2) throw std::invalid_argument("epsilon_equally_spaced: need m >= 2");
  if (horizon < 3) throw std::invalid_argument("epsilon_equally_spaced: horizon too small");
  double t = static_cast<double>(horizon);
  double bound = std::cbrt(std::log(t) / t);
  double spacing = 1.0 / static_cast<double>(m - 1);
  if (spacing < bound) return spacing;  // large quality space: eps = 1/(m-1)
  return epsilon_unit_fraction(m, bound);
}

namespace {

PooledInstance pool_from_atoms(const std::vector<double>& points, const std::vector<double>& weights,
                               const Valuation& valuation, double eps_hat, bool track_buckets) {
  if (!(eps_hat > 0.0) || eps_hat > 1.0) throw std::invalid_argument("pool_instance: eps_hat must lie in (0, 1]");
  std::size_t buckets = static_cast<std::size_t>(std::ceil(1.0 / eps_hat - 1e-12));
  // Bucket 0 is the atom at quality 0; bucket b >= 1 covers ((b-1)*eps_hat, b*eps_hat].
  std::vector<double> mass(buckets + 1, 0.0), moment(buckets + 1, 0.0);
  std::vector<std::size_t> raw_bucket(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double w = points[i];
    std::size_t b;
    if (w <= 0.0) {
      b = 0;
    } else {
      b = static_cast<std::size_t>(std::ceil(w / eps_hat - 1e-12));
      b = std::min(b, buckets);
    }
    raw_bucket[i] = b;
    mass[b] += weights[i];
    moment[b] += weights[i] * w;
  }
  std::vector<double> pooled_q, pooled_w;
  std::vector<std::size_t> bucket_to_index(buckets + 1, SIZE_MAX);
  double kept = 0.0;
  for (std::size_t b = 0; b <= buckets; ++b) {
    if (mass[b] <= 0.0) continue;  // empty buckets dropped
    bucket_to_index[b] = pooled_q.size();
    pooled_q.push_back(b == 0 ? 0.0 : moment[b] / mass[b]);
    pooled_w.push_back(mass[b]);
    kept += mass[b];
  }
  for (double& w : pooled_w) w /= kept;  // guard against accumulation drift
  PooledInstance out;
  out.instance = Instance::make(std::move(pooled_q), std::move(pooled_w), valuation);
  if (track_buckets) {
    out.bucket_of.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out.bucket_of[i] = bucket_to_index[raw_bucket[i]];
  }
  return out;
}

}  // namespace

PooledInstance pool_instance(const Instance& inst, double eps_hat) {
  return pool_from_atoms(inst.qualities.qualities, inst.prior.weights, inst.valuation, eps_hat, true);
}

PooledInstance pool_instance(const ContinuousPrior& prior, const Valuation& valuation, double eps_hat) {
  constexpr std::size_t kQuadraturePoints = 10000;
  std::vector<double> points, weights;
  points.reserve(kQuadraturePoints + 1);
  weights.reserve(kQuadraturePoints + 1);
  double h = 1.0 / static_cast<double>(kQuadraturePoints);
  double total = prior.mass_at_zero;
  if (prior.mass_at_zero > 0.0) {
    points.push_back(0.0);
    weights.push_back(prior.mass_at_zero);
  }
  for (std::size_t k = 0; k < kQuadraturePoints; ++k) {
    double x = (static_cast<double>(k) + 0.5) * h;
    double w = prior.density(x) * h;
    if (w > 0.0) {
      points.push_back(x);
      weights.push_back(w);
      total += w;
    }
  }
  if (!(total > 0.0)) throw std::invalid_argument("pool_instance: density integrates to zero");
  for (double& w : weights) w /= total;
  return pool_from_atoms(points, weights, valuation, eps_hat, false);
}

}  // namespace persuade
