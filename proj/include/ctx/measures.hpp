#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctx/box.hpp"

namespace ctx {

/// Probability vector over the contexts of a scenario.
struct ContextWeights {
  std::vector<double> weights;

  static ContextWeights uniform(std::size_t contexts);
  static ContextWeights point_mass(std::size_t contexts, std::size_t c);
  /// Throws InvalidBox unless entries are >= 0 and sum to 1 within 1e-12.
  void validate(std::size_t contexts) const;
};

/// Result of a relative-entropy computation. All values are in bits.
///
/// `value` is the inner objective at `inner_model`, so the true inner
/// minimum lies in [value - gap, value]. For x_max, `upper_bound` is the
/// smallest max_c D(p_c || marginal_c(q)) over the inner models and their
/// running average, which bounds the saddle value from above.
struct MeasureResult {
  double value = 0.0;
  ContextWeights context_weights;
  std::optional<GlobalDistribution> inner_model;
  double gap = 0.0;
  double upper_bound = 0.0;
  std::size_t inner_iterations = 0;
  std::size_t outer_iterations = 0;
  bool converged = false;
};

struct InnerOptions {
  double tol = 1e-6;
  std::size_t max_iterations = 100'000;
  /// Optional warm start; replaced by the uniform model if it makes the
  /// objective infinite.
  const std::vector<double>* initial = nullptr;
  /// When set, receives the objective after every iteration.
  std::vector<double>* trace = nullptr;
};

struct OuterOptions {
  double tol = 1e-6;
  std::size_t max_outer = 2000;
  std::size_t max_inner = 100'000;
};

/// Default tolerances in bits.
inline constexpr double kDefaultTol = 1e-4;
inline constexpr double kSmallScenarioTol = 1e-6;

/// sum_i p_i log2(p_i / q_i) with 0 log 0 = 0; +infinity when some p_i > 0
/// meets q_i = 0.
double relative_entropy(std::span<const double> p, std::span<const double> q);

/// -x log2 x on [0, 1].
double eta(double x);

/// min over global models q of sum_c w_c D(p_B(.|c) || marginal_c(q)),
/// solved by pairwise Frank-Wolfe over the assignment simplex.
MeasureResult rec_fixed(const Box& b, const ContextWeights& w, const InnerOptions& opt = {});
MeasureResult rec_fixed(const Box& b, const ContextWeights& w, double tol);

MeasureResult x_uniform(const Box& b, double tol = kSmallScenarioTol);

/// sup over context weights of rec_fixed: projected supergradient ascent on
/// the weights (uniform start, step 1/sqrt(t) scaled by the first
/// supergradient's norm), each step warm-starting a loosely solved inner
/// problem. Stops once the saddle bracket closes to `tol`, then re-solves
/// at the best weights to `tol`.
MeasureResult x_max(const Box& b, const OuterOptions& opt);
MeasureResult x_max(const Box& b, double tol = kSmallScenarioTol);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

struct BetaResult {
  double value = 0.0;
  double noncontextual_bound = 0.0;  // n - 1
  bool violation = false;
};

/// 2^(m-1) <reference|b> for boxes whose contexts all have m binary members.
BetaResult beta(const Box& b, const Box& reference);

struct CostBound {
  double bound = 0.0;
  double cost = 0.0;
  double per_vertex = 0.0;        // X_max of an extremal contextual box
  bool vertex_equivalent = false;  // closed form log2(n/(n-1)) used
};

/// X_max(b) <= C(b) log2(n/(n-1)) on n-cycle scenarios (the Bell 2x2
/// scenario is a 4-cycle). Elsewhere falls back to C(b) max_E X_max(E) over
/// `contextual_vertices`; throws UnsupportedScenario when none are given.
CostBound cost_bound_xmax(const Box& b, double tol = kSmallScenarioTol,
                          const std::vector<Box>* contextual_vertices = nullptr);

struct ContinuityBoundInput {
  double delta = 0.0;
  std::uint64_t dim = 1;
};

/// d = min(number of global assignments, number of contexts).
std::uint64_t continuity_dimension(const Scenario& s);
/// g(delta) = 5 delta log2 d + 2 eta(1 - delta) + 3 eta(delta).
double continuity_g(const ContinuityBoundInput& in);
/// Bound on |X_max(B) - X_max(B')|: 6 g(delta) + 3 delta.
double continuity_bound(const ContinuityBoundInput& in);
/// Bound at fixed context weights: g(delta) + delta.
double fixed_weight_continuity_bound(const ContinuityBoundInput& in);

struct DistillationBound {
  double bound = 0.0;
  double x_box = 0.0;
  double x_target = 0.0;
  /// Always true: the bound assumes monotonicity and subadditivity of X_max.
  bool conditional = true;
};

/// X_max(b) / X_max(target). Throws UndefinedBound if target is noncontextual.
DistillationBound distillable_upper_bound(const Box& b, const Box& target,
                                          double tol = kSmallScenarioTol);

}  // namespace ctx
