#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ctx/box.hpp"

// Seeded generators for random boxes; every caller passes its own engine.
namespace ctx {

/// Flat Dirichlet sample of length n.
std::vector<double> random_probability_vector(std::size_t n, std::mt19937_64& rng);

/// Random mixture of deterministic assignments: half of the draws use a
/// sparse support (1..8 assignments), half the full simplex.
GlobalDistribution random_global_distribution(const ScenarioPtr& s, std::mt19937_64& rng);

Box random_noncontextual_box(const ScenarioPtr& s, std::mt19937_64& rng);

/// Contextual boxes known for `s`: the odd-parity correlator boxes on
/// canonical n-cycles and the eight B_rst on the (2,2,2,2) Bell scenario
/// (all extremal), and on XOR chains with m > 2 the XOR boxes with a single
/// odd context (contextual, not extremal).
std::optional<std::vector<Box>> known_contextual_vertices(const ScenarioPtr& s);

/// Random convex mixture of 1..6 boxes drawn from the deterministic vertices
/// and known_contextual_vertices(s). Throws UnsupportedScenario when no
/// contextual vertices are known.
Box random_vertex_mixture(const ScenarioPtr& s, std::mt19937_64& rng);

/// Correlator box with independent uniform correlators in [-1, 1].
Box random_correlator_box(int n, std::mt19937_64& rng);

}  // namespace ctx
