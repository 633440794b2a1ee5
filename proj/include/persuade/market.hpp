#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persuade/piecewise.hpp"
#include "persuade/rng.hpp"

namespace persuade {

// Tolerance hierarchy: root-finding 1e-12 < consistency residual 1e-9 <
// mean preservation 1e-8. Property tests compose against these.
inline constexpr double kRootTol = 1e-12;
inline constexpr double kDedupTol = 1e-12;
inline constexpr double kConsistencyTol = 1e-9;
inline constexpr double kMeanTol = 1e-8;

/// Ordered product qualities in [0, 1].
struct QualitySpace {
  std::vector<double> qualities;

  std::size_t size() const { return qualities.size(); }
  double lowest() const { return qualities.front(); }
  double highest() const { return qualities.back(); }

  // Throws if values are not strictly increasing inside [0, 1].
  void check() const;
};

/// Prior over qualities. Zero-mass entries are expected to be dropped before
/// construction (see Instance::make).
struct Prior {
  std::vector<double> weights;

  void check() const;  // each weight > 0, sum within 1e-12 of 1
};

/// Buyer valuation v(theta, omega) = alpha(theta) + beta(theta) * omega,
/// linear in quality. The built-in families fix alpha/beta; the generic
/// family takes piecewise-linear tables and is checked at construction for
/// monotonicity in omega (beta >= 0) and increasing, 1-Lipschitz behaviour
/// in theta at the knots.
class Valuation {
 public:
  enum class Family { additive, multiplicative, linear_generic };

  static Valuation additive() { return Valuation(Family::additive); }
  static Valuation multiplicative() { return Valuation(Family::multiplicative); }
  static Valuation linear_generic(PiecewiseLinear alpha, PiecewiseLinear beta);

  Family family() const { return family_; }

  double alpha_at(double theta) const;
  double beta_at(double theta) const;

  const PiecewiseLinear& alpha_table() const { return alpha_; }
  const PiecewiseLinear& beta_table() const { return beta_; }

 private:
  explicit Valuation(Family f) : family_(f) {}
  Family family_;
  PiecewiseLinear alpha_;
  PiecewiseLinear beta_;
};

/// Buyer type distribution on [0, 1]. The demand function D(x) = P(theta >= x)
/// uses the left-limit convention at atoms, matching the purchase rule
/// theta >= kappa.
class TypeDistribution {
 public:
  enum class Kind { uniform, discrete_atoms, piecewise_cdf };

  static TypeDistribution uniform();
  // Atoms in [0, 1] with positive masses summing to 1.
  static TypeDistribution discrete_atoms(std::vector<double> points, std::vector<double> masses);
  // Continuous CDF given by knots (x, F(x)); F nondecreasing with F(1) = 1.
  static TypeDistribution piecewise_cdf(PiecewiseLinear cdf);

  Kind kind() const { return kind_; }
  double demand(double x) const;          // P(theta >= x)
  double sample(Rng& rng) const;          // i.i.d. draw
  const std::vector<double>& atom_points() const { return points_; }
  const std::vector<double>& atom_masses() const { return masses_; }

 private:
  explicit TypeDistribution(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> points_;  // atoms, sorted
  std::vector<double> masses_;
  PiecewiseLinear cdf_;
};

/// Immutable market description. All other modules consume it read-only.
struct Instance {
  QualitySpace qualities;
  Prior prior;
  Valuation valuation = Valuation::additive();
  double price_cap = 0.0;  // U

  std::size_t num_qualities() const { return qualities.size(); }
  double quality(std::size_t i) const { return qualities.qualities[i]; }
  double weight(std::size_t i) const { return prior.weights[i]; }

  // Drops zero-mass prior entries, validates ordering/normalization and
  // defaults price_cap to v(1, highest quality) when not supplied.
  // `declared` additionally requires the quality endpoints 0 and 1
  // (user-declared instances; pooled instances are exempt).
  static Instance make(std::vector<double> qualities, std::vector<double> prior, Valuation valuation,
                       std::optional<double> price_cap = std::nullopt, bool declared = false);
};

// --- operations -------------------------------------------------------------

/// v(theta, omega); domain-checked.
double valuation_at(const Valuation& val, double theta, double omega);

/// Critical type kappa(p, q) = min{theta : v(theta, q) >= p}, clamped to
/// [0, 1]: 1 when even theta = 1 values the product below p, 0 when every
/// type does at least p.
double critical_type(const Valuation& val, double p, double q);

/// Inverse of the critical type in the quality argument: the q solving
/// v(x, q) = p. Unclamped; the result may fall outside the quality hull and
/// callers clip it. Throws when beta(x) = 0 and p != alpha(x).
double critical_type_inverse(const Valuation& val, double p, double x);

/// Non-throwing variant used by the rounding procedure and support grids:
/// flat-slope cases map to +/-infinity so that hull clipping applies.
double critical_type_inverse_or_inf(const Valuation& val, double p, double x);

double demand(const TypeDistribution& dist, double x);
double sample_type(const TypeDistribution& dist, Rng& rng);
std::size_t sample_quality(const Instance& inst, Rng& rng);
double prior_mean(const Instance& inst);

}  // namespace persuade
