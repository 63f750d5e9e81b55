#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ctx/scenario.hpp"

namespace ctx {

/// Tolerance on table normalization and on consistency of overlap marginals.
inline constexpr double kProbTol = 1e-9;

using Table = std::vector<double>;

/// A box: one probability table per context of a scenario.
///
/// Tables are validated on construction (entries >= 0, each table sums to 1
/// within kProbTol). Consistency is a separate check because inconsistent
/// boxes are still useful as counterexamples.
class Box {
 public:
  Box(ScenarioPtr scenario, std::vector<Table> tables);

  const Scenario& scenario() const { return *scenario_; }
  const ScenarioPtr& scenario_ptr() const { return scenario_; }
  const Table& table(std::size_t c) const { return tables_.at(c); }
  const std::vector<Table>& tables() const { return tables_; }
  double at(std::size_t c, std::size_t row) const { return tables_[c][row]; }

  /// Largest entrywise difference to `other`; infinity on scenario mismatch.
  double max_abs_diff(const Box& other) const;

 private:
  ScenarioPtr scenario_;
  std::vector<Table> tables_;
};

/// Builds a box after rescaling every table to sum 1 and clipping tiny
/// negative entries. Used for CLI `--renormalize` and for LP residuals.
Box renormalized_box(ScenarioPtr scenario, std::vector<Table> tables);

/// Probability vector over all global assignments of a scenario.
class GlobalDistribution {
 public:
  GlobalDistribution(ScenarioPtr scenario, std::vector<double> weights);

  static GlobalDistribution uniform(ScenarioPtr scenario);
  static GlobalDistribution point_mass(ScenarioPtr scenario, std::uint64_t index);

  const Scenario& scenario() const { return *scenario_; }
  const ScenarioPtr& scenario_ptr() const { return scenario_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  ScenarioPtr scenario_;
  std::vector<double> weights_;
};

struct CorrelatorBox {
  std::vector<double> correlators;  // <m_i m_{i+1}>, i = 0..n-1
};

/// S(B) = sum_c alpha_c T_c p_B(.|c): maps a box to one distribution over a
/// common output alphabet. `matrices[c]` is column-stochastic with shape
/// outputs x table_size(c), stored row-major.
struct ReadoutOperation {
  std::vector<double> weights;
  std::size_t outputs = 0;
  std::vector<std::vector<double>> matrices;

  std::vector<double> apply(const Box& b) const;
};

struct ConsistencyViolation {
  std::size_t context_a = 0;
  std::size_t context_b = 0;
  std::vector<int> overlap;
  double max_deviation = 0.0;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

ConsistencyReport check_consistency(const Box& b, double tol = kProbTol);
/// Throws InconsistentBox listing the first violation.
void require_consistent(const Box& b);

Box from_global_distribution(const GlobalDistribution& q);
Box deterministic_box(ScenarioPtr s, const GlobalAssignment& a);
Box uniform_box(ScenarioPtr s);

Box mix(std::span<const Box> boxes, std::span<const double> weights);
Box mix2(const Box& a, const Box& b, double weight_a);

/// Product box on the scenario whose contexts are all pairs (c, c').
Box tensor(const Box& b1, const Box& b2);
/// Product restricted to matched pairs (c, c) of two boxes on one scenario.
Box tensor_matched(const Box& b1, const Box& b2);
Box direct_sum_box(const Box& b1, const Box& b2);

/// max over contexts of the variational distance sum |p - p'|, in [0, 2].
double trace_distance(const Box& b1, const Box& b2);

/// Draws a random ReadoutOperation whose output alphabet is the largest
/// context outcome space of `s`.
ReadoutOperation random_readout(const Scenario& s, std::mt19937_64& rng);

/// Relabels outcomes of `obs`: outcome k becomes perm[k].
Box relabel_outputs(const Box& b, int obs, std::span<const int> perm);
Box bit_flip(const Box& b, int obs);

/// Outcome 0 encodes +1, outcome 1 encodes -1.
Box correlator_to_box(const CorrelatorBox& cb);
CorrelatorBox box_to_correlators(const Box& b);
/// Correlator <(-1)^(sum of outcomes)> of a context of binary observables.
double context_correlator(const Box& b, std::size_t c);

/// B_rst on the (2,2,2,2) Bell scenario: 1/2 where a^b = xy^rx^sy^t.
Box make_b_rst(int r, int s, int t);
Box make_pr_box();
Box make_isotropic_box(double alpha);

Box make_xor_box(ScenarioPtr s, std::span<const int> parity);
/// XOR box whose only odd context is `odd_context`.
Box make_extremal_xor_box(ScenarioPtr s, std::size_t odd_context = 0);
Box make_correlated_box(ScenarioPtr s);

double box_inner_product(const Box& b1, const Box& b2);

}  // namespace ctx
