#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ctx {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// maximize objective . x  subject to  rows[i] . x (sense) rhs[i],
/// 0 <= x_j <= upper[j]  (upper is optional; empty means unbounded above).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> upper;

  explicit LinearProgram(std::size_t variables = 0) : objective(variables, 0.0) {}

  std::size_t variable_count() const { return objective.size(); }
  void add_row(std::vector<double> coeffs, RowSense sense, double b);
  /// Throws std::invalid_argument on ragged rows or non-finite entries.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpOptions {
  double pivot_tol = 1e-9;     // smallest usable pivot / improving reduced cost
  double feasibility_tol = 1e-9;
  std::size_t max_pivots = 1'000'000;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;
  std::size_t pivots = 0;
  /// Phase-one residual: total artificial mass left at the end of phase one.
  double infeasibility = 0.0;
};

/// Dense two-phase tableau simplex with Bland's smallest-index rule.
/// Throws ctx::Error(SolverFailure) when the pivot budget is exhausted.
LpResult lp_solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace ctx
