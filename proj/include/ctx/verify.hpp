#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctx/boxfile.hpp"

namespace ctx {

struct SuiteOptions {
  int trials = 50;
  std::uint64_t seed = 0;
  /// Allowed numerical excess on measure inequalities, in bits.
  double slack = 2e-3;
  /// Solver tolerance for X_max / X_u evaluations.
  double measure_tol = 1e-5;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  int violations = 0;
  /// Largest (lhs - rhs) seen; negative when every check held with room.
  double worst_excess = -1e300;
  std::string detail;
  /// Boxes of the first failing trial, annotated via metadata.
  std::vector<BoxDocument> counterexample;

  bool passed() const { return violations == 0; }
};

/// consistency: random noncontextual and vertex-mixture boxes, and their
/// mixtures, relabelings and XOR wirings, stay consistent.
SuiteReport run_consistency_suite(const SuiteOptions& opt);
/// convexity: X_max(sum p_i B_i) <= sum p_i X_max(B_i) on the (2,2,2,2)
/// scenario, three boxes per mixture.
SuiteReport run_convexity_suite(const SuiteOptions& opt);
/// continuity: perturbed pairs on the (2,2,2,2) scenario with
/// delta <= 0.1 obey both continuity bounds (X_max and uniform weights).
SuiteReport run_continuity_suite(const SuiteOptions& opt);
/// costbound: X_max(B) <= C(B) log2(n/(n-1)) on n-cycles, n = 4, 5, 6;
/// `trials` boxes per n.
SuiteReport run_costbound_suite(const SuiteOptions& opt);
/// preserve: XOR wiring of random noncontextual pairs on the 4- and
/// 5-cycle stays noncontextual; `trials` pairs per scenario.
SuiteReport run_preserve_suite(const SuiteOptions& opt);

const std::vector<std::string>& suite_names();
/// Throws Parse for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace ctx
