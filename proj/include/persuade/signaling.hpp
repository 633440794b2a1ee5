#pragma once

#include <functional>
#include <string>
#include <vector>

#include "persuade/market.hpp"

namespace persuade {

struct Grid;  // grid.hpp

/// An advertising strategy: a finite-support distribution over posterior
/// means, stored through per-quality conditional masses. Entries may carry
/// coincident support values (binary decomposition emits one entry per
/// quality pair); merge() collapses them when per-entry backing no longer
/// matters.
struct Advertising {
  std::vector<double> support;                        // q_k, each in the quality hull
  std::vector<std::vector<double>> conditionals;      // conditionals[i][k] = rho_i(q_k)

  std::size_t num_points() const { return support.size(); }
  std::size_t num_qualities() const { return conditionals.size(); }

  // Marginal mass rho(q_k) = sum_i lambda_i rho_i(q_k).
  double marginal(const Instance& inst, std::size_t k) const;
  std::vector<double> marginals(const Instance& inst) const;

  // Quality indices with positive conditional mass at entry k.
  std::vector<std::size_t> backing(std::size_t k, double tol = 0.0) const;

  // Merges entries whose support values coincide within tol, summing
  // conditionals, and drops entries with no mass at all. Sorted by support.
  Advertising merged(const Instance& inst, double tol = kDedupTol) const;
};

struct ValidationReport {
  bool ok = true;
  std::string constraint;  // first violated constraint, empty when ok
  double residual = 0.0;
  std::string detail;
};

/// Checks shape, nonnegativity, support range, row masses, Bayes consistency
/// at every supported point and preservation of the prior mean. Reports the
/// first violation; never throws.
ValidationReport validate(const Advertising& adv, const Instance& inst);

/// Point mass at the prior mean; every signal is uninformative.
Advertising no_info(const Instance& inst);

/// Fully revealing: each quality maps to its own degenerate posterior.
Advertising full_info(const Instance& inst);

/// Draw a support index from the conditional distribution of quality i.
std::size_t sample_posterior_mean(const Advertising& adv, std::size_t quality_index, Rng& rng);

/// Exact expected per-round revenue p * sum_i lambda_i sum_k rho_i(q_k) D(kappa(p, q_k)).
double revenue(double p, const Advertising& adv, const Instance& inst, const TypeDistribution& dist);

/// Same, against an arbitrary demand curve (used by the rounding guarantee,
/// which holds for any nonincreasing demand).
double revenue_against(double p, const Advertising& adv, const Instance& inst,
                       const std::function<double(double)>& demand_fn);

/// Rewrites the strategy so every support entry is backed by at most two
/// qualities, pairing extremes greedily; the marginal over support values is
/// preserved exactly.
Advertising binary_support_decompose(const Advertising& adv, const Instance& inst);

/// Splits interior support points that no buyer type can afford at price p
/// (p > v(1, q)) back onto their two backing qualities. Requires a
/// binary-supported input.
Advertising enforce_no_bad_posterior(double p, const Advertising& adv, const Instance& inst);

struct RoundedStrategy {
  double price = 0.0;       // p-dagger, a grid price
  Advertising advertising;  // supported inside Q_{p-dagger}
};

/// Critical-type guided rounding. Input must satisfy p >= 2*eps, be
/// binary-supported and have no bad posterior for p; the output price lands
/// in P and every output support point has kappa(p-dagger, q) in S, with
/// revenue loss at most 2*eps against any nonincreasing demand.
RoundedStrategy round_strategy(double p, const Advertising& adv, const Instance& inst, const Grid& grid);

}  // namespace persuade
