#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "persuade/grid.hpp"
#include "persuade/signaling.hpp"
#include "persuade/tracker.hpp"

namespace persuade {

struct SignalingSolution {
  Advertising advertising;
  double objective = 0.0;
  std::int64_t lp_pivots = 0;
};

/// Exact maximizer of sum_{i,k} lambda_i rho_i(q_k) g(q_k) over conditionals
/// with support Q_p satisfying Bayes consistency. Solved by a dense simplex
/// over the masses w_{i,k}; single-quality and binary-quality instances take
/// exact combinatorial shortcuts (for m = 2 the feasible marginals are all
/// mean-preserving contractions, so the optimum is the upper concave
/// envelope of (q_k, g_k) evaluated at the prior mean).
SignalingSolution solve_signaling_lp(const Instance& inst, double p, const std::vector<double>& support,
                                     const std::vector<double>& g);

struct PricingSolution {
  double price = 0.0;
  Advertising advertising;
  double objective = 0.0;   // estimate of the per-round revenue p * E[g]
  std::int64_t lp_pivots = 0;
};

/// Scans P, solving the per-price signaling program with values produced by
/// `g_of` (support set -> per-point objective values). Ties in p*objective
/// within 1e-12 resolve to the smaller price. Price solves are independent;
/// `threads` > 1 fans them out with a deterministic reduction.
PricingSolution price_scan(const Instance& inst, const Grid& grid,
                           const std::function<std::vector<double>(const SupportSet&)>& g_of, int threads = 1);

/// One round of the UCB program: g(q) = D^UCB(kappa(p, q)) with critical
/// types snapped onto S.
PricingSolution solve_ucb_program(const Instance& inst, const Grid& grid, const DemandTracker& tracker,
                                  const std::vector<SupportSet>& supports);

struct ClairvoyantSolution {
  double price = 0.0;
  Advertising advertising;
  double revenue = 0.0;  // lower bound; true OPT exceeds it by at most 2*eps_opt
  double epsilon = 0.0;
};

/// Grid-restricted optimum with the true demand function; the returned value
/// is within 2*eps_opt of the continuous optimum.
ClairvoyantSolution clairvoyant_opt(const Instance& inst, const TypeDistribution& dist, double eps_opt,
                                    int threads = 1);

/// Same restricted scan with the advertising pinned (baseline oracle):
/// maximizes p * sum_i lambda_i sum_k rho_i(q_k) D(kappa(p, q_k)) over P.
ClairvoyantSolution clairvoyant_fixed_advertising(const Instance& inst, const TypeDistribution& dist,
                                                  const Advertising& adv, double eps_opt);

/// Independent enumeration oracle for LP validation on tiny problems:
/// marginals over the support are enumerated on the k-resolution simplex
/// grid and kept when Bayes-consistent within the residual window 1/(2k)
/// (mean match plus the integrated-CDF contraction inequalities). Two bests
/// are reported: over candidates repaired to exact feasibility, and over the
/// windowed set.
struct BruteForceResult {
  double best_exact = -1.0;     // max value over exactly feasible candidates (-1: none)
  double best_windowed = -1.0;  // max value over the 1/(2k) residual window
  std::int64_t candidates = 0;
};

BruteForceResult brute_force_small(const Instance& inst, const std::vector<double>& support,
                                   const std::vector<double>& g, int resolution);

}  // namespace persuade
