#pragma once

#include <optional>
#include <vector>

#include "ctx/box.hpp"
#include "ctx/lp.hpp"

namespace ctx {

/// Vertices of the noncontextual polytope (and, when known, the contextual
/// extremal boxes of the consistent polytope).
struct VertexSet {
  std::vector<Box> deterministic;
  std::vector<std::uint64_t> assignment_index;  // source assignment per vertex
  std::optional<std::vector<Box>> contextual;
};

VertexSet enumerate_noncontextual_vertices(const ScenarioPtr& s);

/// All 2^(n-1) correlator boxes with entries +-1 and an odd number of -1,
/// reached from (-1, 1, ..., 1) by single-observable bit flips.
std::vector<Box> enumerate_cycle_contextual_vertices(int n);

struct MembershipResult {
  bool noncontextual = false;
  std::optional<GlobalDistribution> witness;
  double infeasibility = 0.0;  // phase-one residual of the membership LP
};

/// Marginal equalities are accepted within this tolerance.
inline constexpr double kMembershipTol = 1e-8;

MembershipResult is_noncontextual(const Box& b);

/// B = cost * valuable_part + sum_i w_i E_i, with E_i the deterministic
/// vertices (ordered as in enumerate_noncontextual_vertices).
struct CostCertificate {
  double cost = 0.0;
  std::optional<Box> valuable_part;
  std::vector<double> nonvaluable_weights;
  std::size_t pivots = 0;

  /// Largest entrywise error of the decomposition against `b`.
  double reconstruction_error(const Box& b, const VertexSet& vertices) const;
};

CostCertificate contextuality_cost(const Box& b);
CostCertificate contextuality_cost(const Box& b, const VertexSet& vertices);

}  // namespace ctx
