#include "persuade/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace persuade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Root of the increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi),
// to absolute tolerance kRootTol.
template <typename F>
double bisect_increasing(F f, double lo, double hi) {
  while (hi - lo > kRootTol) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void QualitySpace::check() const {
  require(!qualities.empty(), "QualitySpace: empty");
  for (std::size_t i = 0; i < qualities.size(); ++i) {
    require(qualities[i] >= 0.0 && qualities[i] <= 1.0, "QualitySpace: quality outside [0,1]");
    if (i > 0) require(qualities[i] > qualities[i - 1], "QualitySpace: not strictly increasing");
  }
}

void Prior::check() const {
  require(!weights.empty(), "Prior: empty");
  double sum = 0.0;
  for (double w : weights) {
    require(w > 0.0, "Prior: nonpositive weight");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "Prior: weights must sum to 1");
}

Valuation Valuation::linear_generic(PiecewiseLinear alpha, PiecewiseLinear beta) {
  Valuation v(Family::linear_generic);
  // Assumption checks on the merged knot grid: beta >= 0 (monotone in omega),
  // v increasing and 1-Lipschitz in theta for every omega in [0,1]. Slopes
  // are piecewise constant, and the theta-slope alpha' + beta'*omega is
  // linear in omega, so checking omega in {0, 1} per interval suffices.
  std::vector<double> grid = alpha.knots();
  grid.insert(grid.end(), beta.knots().begin(), beta.knots().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  require(beta.min_value() >= -1e-12, "Valuation: beta(theta) must be nonnegative");
  const double tol = 1e-9;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double x0 = grid[i], x1 = grid[i + 1];
    double da = (alpha(x1) - alpha(x0)) / (x1 - x0);
    double db = (beta(x1) - beta(x0)) / (x1 - x0);
    require(da > tol && da + db > tol, "Valuation: v must be increasing in theta");
    require(da <= 1.0 + tol && da + db <= 1.0 + tol, "Valuation: v must be 1-Lipschitz in theta");
  }
  v.alpha_ = std::move(alpha);
  v.beta_ = std::move(beta);
  return v;
}

double Valuation::alpha_at(double theta) const {
  switch (family_) {
    case Family::additive:
      return theta;
    case Family::multiplicative:
      return theta;
    case Family::linear_generic:
      return alpha_(theta);
  }
  return 0.0;
}

double Valuation::beta_at(double theta) const {
  switch (family_) {
    case Family::additive:
      return 1.0;
    case Family::multiplicative:
      return theta;
    case Family::linear_generic:
      return beta_(theta);
  }
  return 0.0;
}

TypeDistribution TypeDistribution::uniform() { return TypeDistribution(Kind::uniform); }

TypeDistribution TypeDistribution::discrete_atoms(std::vector<double> points, std::vector<double> masses) {
  require(!points.empty() && points.size() == masses.size(), "atoms: points/masses mismatch");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  TypeDistribution d(Kind::discrete_atoms);
  double sum = 0.0;
  for (std::size_t idx : order) {
    require(points[idx] >= 0.0 && points[idx] <= 1.0, "atoms: point outside [0,1]");
    require(masses[idx] > 0.0, "atoms: nonpositive mass");
    d.points_.push_back(points[idx]);
    d.masses_.push_back(masses[idx]);
    sum += masses[idx];
  }
  require(std::abs(sum - 1.0) <= 1e-12, "atoms: masses must sum to 1");
  return d;
}

TypeDistribution TypeDistribution::piecewise_cdf(PiecewiseLinear cdf) {
  require(cdf.knots().front() >= 0.0 && cdf.knots().back() <= 1.0, "cdf: support must lie in [0,1]");
  const auto& ys = cdf.values();
  for (std::size_t i = 1; i < ys.size(); ++i) require(ys[i] >= ys[i - 1] - 1e-15, "cdf: not nondecreasing");
  require(ys.front() >= 0.0 && std::abs(ys.back() - 1.0) <= 1e-12, "cdf: F(1) must equal 1");
  TypeDistribution d(Kind::piecewise_cdf);
  d.cdf_ = std::move(cdf);
  return d;
}

double TypeDistribution::demand(double x) const {
  if (x <= 0.0) return 1.0;
  switch (kind_) {
    case Kind::uniform:
      return x >= 1.0 ? 0.0 : 1.0 - x;
    case Kind::discrete_atoms: {
      // Sum of masses of atoms >= x (weak inequality: buyers at the margin buy).
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] >= x) s += masses_[i];
      return s;
    }
    case Kind::piecewise_cdf: {
      if (x <= cdf_.knots().front()) return 1.0;
      return 1.0 - cdf_(x);
    }
  }
  return 0.0;
}

double TypeDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::uniform:
      return rng.uniform01();
    case Kind::discrete_atoms:
      return points_[rng.categorical(masses_)];
    case Kind::piecewise_cdf: {
      // Inverse-CDF transform; flat CDF stretches resolve to their left edge.
      double u = rng.uniform01();
      const auto& xs = cdf_.knots();
      const auto& ys = cdf_.values();
      if (u <= ys.front()) return xs.front();
      for (std::size_t i = 1; i < ys.size(); ++i) {
        if (u <= ys[i]) {
          double dy = ys[i] - ys[i - 1];
          if (dy <= 0.0) return xs[i - 1];
          return xs[i - 1] + (u - ys[i - 1]) / dy * (xs[i] - xs[i - 1]);
        }
      }
      return xs.back();
    }
  }
  return 0.0;
}

Instance Instance::make(std::vector<double> qualities, std::vector<double> prior, Valuation valuation,
                        std::optional<double> price_cap, bool declared) {
  require(qualities.size() == prior.size(), "Instance: qualities/prior size mismatch");
  Instance inst;
  inst.valuation = valuation;
  // Zero-mass qualities are dropped so Bayes-consistency denominators stay positive.
  for (std::size_t i = 0; i < qualities.size(); ++i) {
    if (prior[i] > 0.0) {
      inst.qualities.qualities.push_back(qualities[i]);
      inst.prior.weights.push_back(prior[i]);
    }
  }
  inst.qualities.check();
  inst.prior.check();
  if (declared) {
    require(std::abs(inst.qualities.lowest()) <= 1e-12, "Instance: declared instances need lowest quality 0");
    require(std::abs(inst.qualities.highest() - 1.0) <= 1e-12, "Instance: declared instances need highest quality 1");
  }
  inst.price_cap = price_cap.value_or(valuation_at(valuation, 1.0, inst.qualities.highest()));
  require(inst.price_cap > 0.0, "Instance: price cap must be positive");
  return inst;
}

double valuation_at(const Valuation& val, double theta, double omega) {
  require(theta >= 0.0 && theta <= 1.0, "valuation_at: theta outside [0,1]");
  require(omega >= 0.0 && omega <= 1.0, "valuation_at: omega outside [0,1]");
  return val.alpha_at(theta) + val.beta_at(theta) * omega;
}

double critical_type(const Valuation& val, double p, double q) {
  require(q >= 0.0 && q <= 1.0, "critical_type: q outside [0,1]");
  require(p >= 0.0, "critical_type: negative price");
  switch (val.family()) {
    case Valuation::Family::additive:
      return std::clamp(p - q, 0.0, 1.0);
    case Valuation::Family::multiplicative:
      // v(theta, q) = theta (1 + q)
      return std::clamp(p / (1.0 + q), 0.0, 1.0);
    case Valuation::Family::linear_generic: {
      double at0 = val.alpha_at(0.0) + val.beta_at(0.0) * q;
      if (at0 >= p) return 0.0;
      double at1 = val.alpha_at(1.0) + val.beta_at(1.0) * q;
      if (at1 < p) return 1.0;
      return bisect_increasing([&](double th) { return val.alpha_at(th) + val.beta_at(th) * q - p; }, 0.0, 1.0);
    }
  }
  return 0.0;
}

double critical_type_inverse(const Valuation& val, double p, double x) {
  require(x >= 0.0 && x <= 1.0, "critical_type_inverse: x outside [0,1]");
  switch (val.family()) {
    case Valuation::Family::additive:
      return p - x;
    case Valuation::Family::multiplicative:
      if (x <= 0.0) throw std::invalid_argument("critical_type_inverse: flat slope at x=0");
      return p / x - 1.0;
    case Valuation::Family::linear_generic: {
      double b = val.beta_at(x);
      if (b <= 0.0) {
        if (std::abs(val.alpha_at(x) - p) <= kRootTol) return 0.0;  // any q works; return one
        throw std::invalid_argument("critical_type_inverse: flat slope, no solution");
      }
      return (p - val.alpha_at(x)) / b;
    }
  }
  return 0.0;
}

double critical_type_inverse_or_inf(const Valuation& val, double p, double x) {
  double b = val.beta_at(x);
  if (b <= 0.0) {
    double a = val.alpha_at(x);
    if (std::abs(a - p) <= kRootTol) return 0.0;
    // v(x, .) sits entirely below or above p: the preimage escapes toward
    // the corresponding infinity and hull clipping takes over.
    return a < p ? kInf : -kInf;
  }
  return critical_type_inverse(val, p, x);
}

double demand(const TypeDistribution& dist, double x) {
  require(x >= 0.0 && x <= 1.0, "demand: x outside [0,1]");
  return dist.demand(x);
}

double sample_type(const TypeDistribution& dist, Rng& rng) { return dist.sample(rng); }

std::size_t sample_quality(const Instance& inst, Rng& rng) { return rng.categorical(inst.prior.weights); }

double prior_mean(const Instance& inst) {
  double s = 0.0;
  for (std::size_t i = 0; i < inst.num_qualities(); ++i) s += inst.weight(i) * inst.quality(i);
  return s;
}

}  // namespace persuade
