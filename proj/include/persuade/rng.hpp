#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace persuade {

// Seeded generator with platform-independent draws. std::uniform_real_distribution
// is implementation-defined, so uniforms are built from raw 64-bit output instead;
// replays must be bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Index i with probability weights[i] / sum(weights). Weights must be
  // nonnegative with positive total.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: nonpositive total weight");
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace persuade
