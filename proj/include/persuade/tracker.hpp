#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace persuade {

/// Per-critical-type purchase statistics plus the monotone UCB demand
/// envelope. One writer per simulation run; ucb() snapshots are plain
/// vectors and may be read concurrently.
class DemandTracker {
 public:
  // grid_points: the discretized type set S (ascending). horizon: T, fixed
  // up front because the confidence radius carries log T.
  DemandTracker(std::vector<double> grid_points, std::int64_t horizon);

  void record(std::size_t index, bool purchased);

  std::int64_t visits(std::size_t index) const { return visits_[index]; }
  std::int64_t purchases(std::size_t index) const { return purchases_[index]; }
  std::int64_t rounds_recorded() const { return rounds_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  std::int64_t horizon() const { return horizon_; }

  // Empirical purchase rate; only meaningful when visits > 0.
  double empirical(std::size_t index) const;

  // sqrt(16 log T / N) + sqrt((1+N) ln(1+N)) / N, natural logs throughout.
  // Unvisited points return +infinity (treated as UCB value 1 downstream).
  double radius(std::size_t index) const;

  // The monotone envelope D^UCB over S: prefix minimum of the per-point
  // indices min(empirical + radius, 1), nonincreasing by construction.
  std::vector<double> ucb() const;

  // Diagnostics dump: x, N, purchases, empirical, radius, ucb per row.
  std::string to_csv() const;

 private:
  std::vector<double> points_;
  std::vector<std::int64_t> visits_;
  std::vector<std::int64_t> purchases_;
  std::int64_t horizon_;
  std::int64_t rounds_ = 0;
};

}  // namespace persuade
