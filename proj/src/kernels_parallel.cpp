#include <omp.h>

#include <stdexcept>

#include "ctx/kernels.hpp"

namespace ctx::kernels::parallel {

std::vector<std::vector<double>> marginals(const Scenario& s, std::span<const double> q) {
  const std::size_t contexts = s.context_count();
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < contexts; ++c) out.emplace_back(s.table_size(c), 0.0);
  const auto n = static_cast<std::int64_t>(q.size());

#pragma omp parallel if (q.size() >= kParallelThreshold)
  {
    std::vector<std::vector<double>> local = out;
#pragma omp for schedule(static) nowait
    for (std::int64_t l = 0; l < n; ++l) {
      const double v = q[l];
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < contexts; ++c) {
        local[c][s.context_index(static_cast<std::uint64_t>(l), c)] += v;
      }
    }
#pragma omp critical
    for (std::size_t c = 0; c < contexts; ++c) {
      for (std::size_t r = 0; r < local[c].size(); ++r) out[c][r] += local[c][r];
    }
  }
  return out;
}

void context_score(const Scenario& s, const std::vector<std::vector<double>>& ratio,
                   std::span<double> score) {
  const std::size_t contexts = s.context_count();
  const auto n = static_cast<std::int64_t>(score.size());
#pragma omp parallel for schedule(static) if (score.size() >= kParallelThreshold)
  for (std::int64_t l = 0; l < n; ++l) {
    double acc = 0.0;
    for (std::size_t c = 0; c < contexts; ++c) {
      acc += ratio[c][s.context_index(static_cast<std::uint64_t>(l), c)];
    }
    score[l] = acc;
  }
}

void xor_convolve(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  if (b.size() != n || out.size() != n || (n & (n - 1)) != 0) {
    throw std::invalid_argument("xor_convolve: sizes must be equal powers of two");
  }
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::int64_t k = 0; k < sn; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i ^ static_cast<std::size_t>(k)];
    out[k] = acc;
  }
}

}  // namespace ctx::kernels::parallel
