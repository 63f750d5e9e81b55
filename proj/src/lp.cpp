#include "ctx/lp.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ctx/errors.hpp"

namespace ctx {

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double b) {
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (rows.size() != senses.size() || rows.size() != rhs.size()) {
    throw std::invalid_argument("LinearProgram: rows, senses and rhs differ in length");
  }
  if (!upper.empty() && upper.size() != n) {
    throw std::invalid_argument("LinearProgram: upper bounds have wrong length");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("LinearProgram: non-finite objective");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("LinearProgram: ragged constraint row");
    if (!std::isfinite(rhs[i])) throw std::invalid_argument("LinearProgram: non-finite rhs");
    for (double a : rows[i]) {
      if (!std::isfinite(a)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
    }
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Row-major dense tableau. Column `width - 1` holds the right-hand side;
// row `height - 1` holds reduced costs (for maximization: enter on d_j > 0)
// and minus the current objective in the rhs slot.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), width_(cols + 1), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, width_ - 1); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double& neg_objective() { return at(rows_, width_ - 1); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return width_ - 1; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &data_[pr * width_];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    const auto total = static_cast<std::int64_t>(rows_ + 1);
    const std::size_t width = width_;
#pragma omp parallel for schedule(static) if ((rows_ + 1) * width_ > 200000)
    for (std::int64_t r = 0; r < total; ++r) {
      if (static_cast<std::size_t>(r) == pr) continue;
      double* row = &data_[static_cast<std::size_t>(r) * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t r) {
    // Swap with the last constraint row, then shrink; cost row moves up.
    const std::size_t last = rows_ - 1;
    if (r != last) {
      for (std::size_t c = 0; c < width_; ++c) std::swap(at(r, c), at(last, c));
      std::swap(basis_[r], basis_[last]);
    }
    for (std::size_t c = 0; c < width_; ++c) at(last, c) = at(rows_, c);
    data_.resize(rows_ * width_);
    basis_.pop_back();
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class PhaseOutcome { Optimal, Unbounded };

// Runs simplex iterations on columns [0, allowed) with Bland's rule.
PhaseOutcome run_phase(Tableau& t, std::size_t allowed, const LpOptions& opt, std::size_t& pivots) {
  while (true) {
    std::size_t enter = allowed;
    for (std::size_t c = 0; c < allowed; ++c) {
      if (t.cost(c) > opt.pivot_tol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed) return PhaseOutcome::Optimal;

    std::size_t leave = t.rows();
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = t.rhs(r) / a;
      if (leave == t.rows() || ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && t.basis()[r] < t.basis()[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == t.rows()) return PhaseOutcome::Unbounded;

    if (++pivots > opt.max_pivots) {
      throw Error(ErrorKind::SolverFailure,
                  "simplex exceeded " + std::to_string(opt.max_pivots) + " pivots (" +
                      std::to_string(t.rows()) + " rows, " + std::to_string(t.cols()) + " columns)");
    }
    t.pivot(leave, enter);
    if (t.rhs(leave) < 0.0) t.rhs(leave) = 0.0;
  }
}

}  // namespace

LpResult lp_solve(const LinearProgram& lp, const LpOptions& opt) {
  lp.validate();
  const std::size_t n = lp.variable_count();

  // Collect constraints, folding finite upper bounds into <= rows.
  std::vector<std::vector<double>> rows = lp.rows;
  std::vector<RowSense> senses = lp.senses;
  std::vector<double> rhs = lp.rhs;
  for (std::size_t j = 0; j < lp.upper.size(); ++j) {
    if (std::isfinite(lp.upper[j])) {
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      rows.push_back(std::move(row));
      senses.push_back(RowSense::LessEqual);
      rhs.push_back(lp.upper[j]);
    }
  }
  const std::size_t m = rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      for (double& a : rows[i]) a = -a;
      rhs[i] = -rhs[i];
      if (senses[i] == RowSense::LessEqual) senses[i] = RowSense::GreaterEqual;
      else if (senses[i] == RowSense::GreaterEqual) senses[i] = RowSense::LessEqual;
    }
  }

  std::size_t slack_count = 0, artificial_count = 0;
  for (auto s : senses) {
    if (s != RowSense::Equal) ++slack_count;
    if (s != RowSense::LessEqual) ++artificial_count;
  }
  const std::size_t real_cols = n + slack_count;
  Tableau t(m, real_cols + artificial_count);

  std::size_t slack = n, art = real_cols;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = rows[i][j];
    t.rhs(i) = rhs[i];
    switch (senses[i]) {
      case RowSense::LessEqual:
        t.at(i, slack) = 1.0;
        t.basis()[i] = slack++;
        break;
      case RowSense::GreaterEqual:
        t.at(i, slack++) = -1.0;
        t.at(i, art) = 1.0;
        t.basis()[i] = art++;
        break;
      case RowSense::Equal:
        t.at(i, art) = 1.0;
        t.basis()[i] = art++;
        break;
    }
  }

  LpResult result;
  std::size_t pivots = 0;

  // Phase one: maximize -sum(artificials).
  if (artificial_count > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < real_cols) continue;
      for (std::size_t c = 0; c < real_cols; ++c) t.cost(c) += t.at(i, c);
      t.neg_objective() += t.rhs(i);
    }
    run_phase(t, real_cols, opt, pivots);
    double residual = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis()[i] >= real_cols) residual += t.rhs(i);
    }
    result.infeasibility = residual;
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, std::abs(b));
    if (residual > opt.feasibility_tol * scale) {
      result.status = LpStatus::Infeasible;
      result.pivots = pivots;
      return result;
    }
    // Drive remaining zero-level artificials out of the basis; rows where
    // that is impossible are redundant.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis()[i] < real_cols) {
        ++i;
        continue;
      }
      std::size_t col = real_cols;
      for (std::size_t c = 0; c < real_cols; ++c) {
        if (std::abs(t.at(i, c)) > opt.pivot_tol) {
          col = c;
          break;
        }
      }
      if (col == real_cols) {
        t.drop_row(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
  }

  // Phase two: reduced costs of the real objective for the current basis.
  for (std::size_t c = 0; c < t.cols(); ++c) t.cost(c) = c < n ? lp.objective[c] : 0.0;
  t.neg_objective() = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t b = t.basis()[i];
    const double cb = b < n ? lp.objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < t.cols(); ++c) t.cost(c) -= cb * t.at(i, c);
    t.neg_objective() -= cb * t.rhs(i);
  }
  const PhaseOutcome outcome = run_phase(t, real_cols, opt, pivots);
  result.pivots = pivots;
  if (outcome == PhaseOutcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basis()[i] < n) result.x[t.basis()[i]] = t.rhs(i);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * result.x[j];
  result.objective = obj;
  return result;
}

}  // namespace ctx
