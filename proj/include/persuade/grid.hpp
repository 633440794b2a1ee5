#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "persuade/market.hpp"

namespace persuade {

// Snap tolerance for matching critical types against the discretized type
// set; a miss beyond this signals a grid construction bug, not noise.
inline constexpr double kSnapTol = 1e-9;

/// Quality-and-price-dependent discretization: price grid P on an eps mesh
/// up to the price cap, and type grid S holding the eps mesh of [0, 1]
/// together with every clamped critical type kappa(p, omega).
struct Grid {
  double epsilon = 0.0;
  std::vector<double> prices;  // P, ascending
  std::vector<double> types;   // S, ascending, deduplicated
  std::vector<double> mesh;    // the eps mesh {0, eps, ..., 1} subset of S

  // Index of the S point within kSnapTol of x; throws std::logic_error on a miss.
  std::size_t snap_index(double x) const;
  // Nearest-distance variant for property checks.
  double snap_distance(double x) const;

  bool is_grid_price(double p) const;
};

/// Builds P and S for the instance at discretization eps in (0, 1]. The
/// price cap is appended to P when it is not an eps multiple.
Grid build_grids(const Instance& inst, double epsilon);

/// Restricted support Q_p = {q in quality hull : kappa(p, q) in S}, as the
/// sorted list of preimage points; interval preimages (clamped regions)
/// contribute both endpoints, and every quality is included.
std::vector<double> support_grid(const Grid& grid, const Instance& inst, double p);

/// Support points of Q_p together with the S index of each point's critical
/// type; precomputed once per price for the per-round scans.
struct SupportSet {
  double price = 0.0;
  std::vector<double> points;
  std::vector<std::size_t> type_index;  // kappa(price, points[k]) snapped into S
};

SupportSet make_support_set(const Grid& grid, const Instance& inst, double p);

/// Largest eps <= (log T / T)^(1/3) whose reciprocal relative to the quality
/// spacing 1/(m-1) is an integer; falls back to 1/(m-1) when the quality
/// space is too large for that bound.
double epsilon_equally_spaced(std::size_t m, std::int64_t horizon);

/// Inner selection rule: largest eps <= bound with (1/(m-1))/eps a positive integer.
double epsilon_unit_fraction(std::size_t m, double bound);

/// A prior over qualities given as a density on [0, 1]; consumed only
/// through bucket masses and conditional means via a 10^4-point midpoint rule.
struct ContinuousPrior {
  std::function<double(double)> density;
  double mass_at_zero = 0.0;  // optional atom at quality 0
};

struct PooledInstance {
  Instance instance;
  // bucket_of[i] = pooled quality index for original quality index i
  // (discrete inputs only).
  std::vector<std::size_t> bucket_of;
};

/// Pools qualities into buckets ((i-1)*eps_hat, i*eps_hat], keeping an atom
/// bucket at 0; each bucket is represented by its conditional mean with the
/// bucket probability as prior weight. Empty buckets are dropped.
PooledInstance pool_instance(const Instance& inst, double eps_hat);
PooledInstance pool_instance(const ContinuousPrior& prior, const Valuation& valuation, double eps_hat);

}  // namespace persuade
