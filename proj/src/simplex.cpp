#include "persuade/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace persuade {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  // Columns: n structural, then rows.size() artificials, then rhs.
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b, std::size_t n)
      : n_(n), rows_(A.size()), cols_(n + A.size() + 1), t_(A.size(), std::vector<double>(n + A.size() + 1, 0.0)) {
    basis_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      double sign = b[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[r][j] = sign * A[r][j];
      t_[r][n_ + r] = 1.0;
      t_[r].back() = sign * b[r];
      basis_[r] = n_ + r;
    }
  }

  std::size_t rows() const { return rows_; }
  double rhs(std::size_t r) const { return t_[r].back(); }
  std::size_t basic(std::size_t r) const { return basis_[r]; }

  void pivot(std::size_t row, std::size_t col) {
    double piv = t_[row][col];
    for (double& v : t_[row]) v /= piv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row) continue;
      double f = t_[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) t_[r][j] -= f * t_[row][j];
      t_[r][col] = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Bland: lowest-index candidate column with positive reduced cost enters;
  // lowest basic index breaks ratio ties. Returns false at optimality.
  bool bland_step(const std::vector<double>& cost, std::size_t eligible_cols) {
    // reduced cost of column j: cost[j] - sum_r cost[basis_r] * t[r][j]
    std::size_t enter = eligible_cols;
    for (std::size_t j = 0; j < eligible_cols; ++j) {
      bool in_basis = false;
      for (std::size_t r = 0; r < rows_; ++r)
        if (basis_[r] == j) {
          in_basis = true;
          break;
        }
      if (in_basis) continue;
      double red = cost[j];
      for (std::size_t r = 0; r < rows_; ++r) red -= cost[basis_[r]] * t_[r][j];
      if (red > kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter == eligible_cols) return false;

    std::size_t leave = rows_;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (t_[r][enter] <= kPivotTol) continue;
      double ratio = t_[r].back() / t_[r][enter];
      if (leave == rows_ || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis_[r] < basis_[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows_) throw std::logic_error("simplex: unbounded direction in a bounded polytope");
    pivot(leave, enter);
    return true;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  double entry(std::size_t r, std::size_t c) const { return t_[r][c]; }
  std::int64_t pivots() const { return pivots_; }

 private:
  std::size_t n_, rows_, cols_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::int64_t pivots_ = 0;
};

}  // namespace

LpResult solve_equality_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           const std::vector<double>& c) {
  const std::size_t rows = A.size();
  const std::size_t n = c.size();
  if (b.size() != rows) throw std::invalid_argument("solve_equality_lp: A/b mismatch");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("solve_equality_lp: A/c mismatch");

  Tableau tab(A, b, n);

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1(n + rows, 0.0);
  for (std::size_t j = n; j < n + rows; ++j) phase1[j] = -1.0;
  while (tab.bland_step(phase1, n + rows)) {
  }
  double infeas = 0.0;
  for (std::size_t r = 0; r < tab.rows(); ++r)
    if (tab.basic(r) >= n) infeas += tab.rhs(r);
  LpResult res;
  if (infeas > 1e-7) {
    res.status = LpResult::Status::infeasible;
    res.pivots = tab.pivots();
    return res;
  }

  // Drive leftover zero-value artificials out; rows with no structural
  // support are redundant and dropped.
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basic(r) < n) {
      ++r;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tab.entry(r, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col < n) {
      tab.pivot(r, col);
      ++r;
    } else {
      tab.drop_row(r);
    }
  }

  // Phase 2 over structural columns only.
  std::vector<double> phase2(n + rows, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  while (tab.bland_step(phase2, n)) {
  }

  res.status = LpResult::Status::optimal;
  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r)
    if (tab.basic(r) < n) res.x[tab.basic(r)] = tab.rhs(r);
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  res.pivots = tab.pivots();
  for (std::size_t r = 0; r < rows; ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += A[r][j] * res.x[j];
    res.feasibility_residual = std::max(res.feasibility_residual, std::abs(lhs - b[r]));
  }
  return res;
}

}  // namespace persuade
