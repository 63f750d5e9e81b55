#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctx/scenario.hpp"

// Data-parallel inner loops over the global-assignment simplex.
//
// `reference` holds plain serial loops kept as the testing oracle;
// `parallel` holds the OpenMP versions used by the solvers. Both must agree
// to rounding (the parallel reductions reorder sums).
namespace ctx::kernels {

/// Below this many assignments the parallel kernels run serially.
inline constexpr std::uint64_t kParallelThreshold = 4096;

namespace reference {

/// Context marginals of a distribution over global assignments.
std::vector<std::vector<double>> marginals(const Scenario& s, std::span<const double> q);

/// score[l] = sum_c ratio[c][row_c(l)]. With ratio = w_c p_c / Q_c this is
/// minus the gradient (in nats) of the weighted relative entropy.
void context_score(const Scenario& s, const std::vector<std::vector<double>>& ratio,
                   std::span<double> score);

/// out[k] = sum_i a[i] b[i ^ k]; sizes must be equal powers of two.
void xor_convolve(std::span<const double> a, std::span<const double> b, std::span<double> out);

}  // namespace reference

namespace parallel {

std::vector<std::vector<double>> marginals(const Scenario& s, std::span<const double> q);
void context_score(const Scenario& s, const std::vector<std::vector<double>>& ratio,
                   std::span<double> score);
void xor_convolve(std::span<const double> a, std::span<const double> b, std::span<double> out);

}  // namespace parallel

}  // namespace ctx::kernels
