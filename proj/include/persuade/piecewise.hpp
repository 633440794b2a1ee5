#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace persuade {

/// Piecewise-linear table on [0, 1], defined by knots with strictly
/// increasing abscissae. Evaluation clamps to the first/last knot outside
/// the knot range.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
      throw std::invalid_argument("PiecewiseLinear: need >= 2 knots with matching values");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("PiecewiseLinear: knots must be strictly increasing");
  }

  static PiecewiseLinear constant(double c) { return PiecewiseLinear({0.0, 1.0}, {c, c}); }
  static PiecewiseLinear identity() { return PiecewiseLinear({0.0, 1.0}, {0.0, 1.0}); }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    std::size_t lo = hi - 1;
    double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + t * (ys_[hi] - ys_[lo]);
  }

  const std::vector<double>& knots() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

  double min_value() const { return *std::min_element(ys_.begin(), ys_.end()); }

  // Per-interval slope, constant between consecutive knots.
  double slope(std::size_t interval) const {
    return (ys_[interval + 1] - ys_[interval]) / (xs_[interval + 1] - xs_[interval]);
  }
  std::size_t intervals() const { return xs_.size() - 1; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace persuade
