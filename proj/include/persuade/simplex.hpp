#pragma once

#include <cstdint>
#include <vector>

namespace persuade {

struct LpResult {
  enum class Status { optimal, infeasible };
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::int64_t pivots = 0;
  double feasibility_residual = 0.0;  // max |Ax - b| at the returned point
};

/// Maximizes c'x subject to Ax = b, x >= 0, by a two-phase dense primal
/// simplex with Bland's anti-cycling rule. The problems here are small and
/// heavily degenerate (many zero right-hand sides), which is exactly where
/// Bland's rule earns its keep. Unboundedness cannot occur for the signaling
/// polytopes this solves, so it is reported as a logic error.
LpResult solve_equality_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           const std::vector<double>& c);

}  // namespace persuade
