#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctx/box.hpp"

namespace ctx {

/// One round of the two-copy node-wise XOR protocol on
/// B = alpha B_x + (1 - alpha) B_c.
struct DistillationReport {
  double alpha = 0.0;
  int n = 0;
  int m = 0;
  double beta_before = 0.0;
  double beta_after = 0.0;
  double predicted_after = 0.0;
  bool improved = false;
};

/// beta after one XOR round: (a^2 + (1-a)^2)(n-1) + 2a(1-a)n.
double predicted_beta_after(double alpha, int n);
/// Mixing weight of B_x after one XOR round: 2a(1-a).
double xor_round_weight(double alpha);

/// Per context, outputs a XOR a' of two independent copies measured in the
/// same context (the XOR map applied to tensor_matched(b1, b2)).
Box xor_wiring(const Box& b1, const Box& b2);

/// Scenario used for (n, m): the n-cycle for m = 2, the XOR chain otherwise.
ScenarioPtr distillation_scenario(int n, int m);

/// Throws PropertyViolation if the simulated beta deviates from the closed
/// form by more than 1e-12.
DistillationReport distillation_experiment(double alpha, int n, int m = 2);

/// beta trajectory of repeatedly XOR-wiring the current box with itself;
/// returns rounds + 1 values (the first is the input box).
std::vector<double> iterate_distillation(const Box& b, const Box& reference, int rounds);

struct PreservationReport {
  int trials = 0;
  int violations = 0;
  double max_witness_error = 0.0;   // convolved witness vs XOR output
  std::optional<Box> counterexample_first;
  std::optional<Box> counterexample_second;
};

/// Random noncontextual pairs on `s`, XOR-wired; each output must pass the
/// membership LP and match the XOR-convolved global witness.
PreservationReport verify_noncontextuality_preservation(const ScenarioPtr& s, int trials,
                                                        std::uint64_t seed);

/// Global model of xor_wiring(from_global(q1), from_global(q2)):
/// q''(l'') = sum over l ^ l' = l'' of q1(l) q2(l').
GlobalDistribution xor_global(const GlobalDistribution& q1, const GlobalDistribution& q2);

}  // namespace ctx
