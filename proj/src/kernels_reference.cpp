#include "ctx/kernels.hpp"

#include <stdexcept>

namespace ctx::kernels::reference {

std::vector<std::vector<double>> marginals(const Scenario& s, std::span<const double> q) {
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < s.context_count(); ++c) out.emplace_back(s.table_size(c), 0.0);
  for (std::uint64_t l = 0; l < q.size(); ++l) {
    for (std::size_t c = 0; c < s.context_count(); ++c) out[c][s.context_index(l, c)] += q[l];
  }
  return out;
}

void context_score(const Scenario& s, const std::vector<std::vector<double>>& ratio,
                   std::span<double> score) {
  for (std::uint64_t l = 0; l < score.size(); ++l) {
    double acc = 0.0;
    for (std::size_t c = 0; c < s.context_count(); ++c) acc += ratio[c][s.context_index(l, c)];
    score[l] = acc;
  }
}

void xor_convolve(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  if (b.size() != n || out.size() != n || (n & (n - 1)) != 0) {
    throw std::invalid_argument("xor_convolve: sizes must be equal powers of two");
  }
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i ^ k];
    out[k] = acc;
  }
}

}  // namespace ctx::kernels::reference
