#include "persuade/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace persuade {

DemandTracker::DemandTracker(std::vector<double> grid_points, std::int64_t horizon)
    : points_(std::move(grid_points)),
      visits_(points_.size(), 0),
      purchases_(points_.size(), 0),
      horizon_(horizon) {
  if (points_.empty()) throw std::invalid_argument("DemandTracker: empty grid");
  if (horizon_ < 2) throw std::invalid_argument("DemandTracker: horizon must be >= 2");
  if (!std::is_sorted(points_.begin(), points_.end())) throw std::invalid_argument("DemandTracker: grid not sorted");
}

void DemandTracker::record(std::size_t index, bool purchased) {
  if (index >= points_.size()) throw std::logic_error("DemandTracker::record: index outside grid");
  ++visits_[index];
  if (purchased) ++purchases_[index];
  ++rounds_;
}

double DemandTracker::empirical(std::size_t index) const {
  if (visits_[index] <= 0) throw std::logic_error("DemandTracker::empirical: unvisited point");
  return static_cast<double>(purchases_[index]) / static_cast<double>(visits_[index]);
}

double DemandTracker::radius(std::size_t index) const {
  const double n = static_cast<double>(visits_[index]);
  if (n < 1.0) return std::numeric_limits<double>::infinity();
  double t = static_cast<double>(horizon_);
  return std::sqrt(16.0 * std::log(t) / n) + std::sqrt((1.0 + n) * std::log(1.0 + n)) / n;
}

std::vector<double> DemandTracker::ucb() const {
  std::vector<double> out(points_.size(), 1.0);
  double running = 1.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    double index_value = 1.0;
    if (visits_[k] > 0) index_value = std::min(empirical(k) + radius(k), 1.0);
    running = std::min(running, index_value);
    out[k] = std::max(running, 0.0);
  }
  return out;
}

std::string DemandTracker::to_csv() const {
  std::string out = "x,visits,purchases,empirical,radius,ucb\n";
  auto envelope = ucb();
  char buf[160];
  for (std::size_t k = 0; k < points_.size(); ++k) {
    double rate = visits_[k] > 0 ? empirical(k) : -1.0;
    double rad = visits_[k] > 0 ? radius(k) : -1.0;
    std::snprintf(buf, sizeof buf, "%.12g,%lld,%lld,%.12g,%.12g,%.12g\n", points_[k],
                  static_cast<long long>(visits_[k]), static_cast<long long>(purchases_[k]), rate, rad, envelope[k]);
    out += buf;
  }
  return out;
}

}  // namespace persuade
