#include "ctx/random_boxes.hpp"

#include <algorithm>

#include "ctx/polytope.hpp"

namespace ctx {

std::vector<double> random_probability_vector(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) sum += (x = expo(rng));
  for (double& x : v) x /= sum;
  return v;
}

GlobalDistribution random_global_distribution(const ScenarioPtr& s, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(s->assignment_count());
  std::bernoulli_distribution sparse(0.5);
  if (!sparse(rng)) return GlobalDistribution(s, random_probability_vector(n, rng));
  std::uniform_int_distribution<std::size_t> count(1, std::min<std::size_t>(8, n));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t k = count(rng);
  const auto w = random_probability_vector(k, rng);
  std::vector<double> q(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) q[pick(rng)] += w[i];
  return GlobalDistribution(s, std::move(q));
}

Box random_noncontextual_box(const ScenarioPtr& s, std::mt19937_64& rng) {
  return from_global_distribution(random_global_distribution(s, rng));
}

std::optional<std::vector<Box>> known_contextual_vertices(const ScenarioPtr& s) {
  if (*s == *make_bipartite_bell(2, 2, 2, 2)) {
    std::vector<Box> out;
    for (int r = 0; r < 2; ++r) {
      for (int ss = 0; ss < 2; ++ss) {
        for (int t = 0; t < 2; ++t) out.push_back(make_b_rst(r, ss, t));
      }
    }
    return out;
  }
  const int n = static_cast<int>(s->observable_count());
  if (n >= 3 && *s == *make_n_cycle(n)) return enumerate_cycle_contextual_vertices(n);
  const int k = static_cast<int>(s->context_count());
  const int m = static_cast<int>(s->context(0).members.size());
  if (k >= 3 && m > 2 && n == k * (m - 1) && *s == *make_xor_chain(k, m)) {
    std::vector<Box> out;
    for (std::size_t c = 0; c < s->context_count(); ++c) out.push_back(make_extremal_xor_box(s, c));
    return out;
  }
  return std::nullopt;
}

Box random_vertex_mixture(const ScenarioPtr& s, std::mt19937_64& rng) {
  auto contextual = known_contextual_vertices(s);
  if (!contextual) {
    throw Error(ErrorKind::UnsupportedScenario, "no contextual boxes known for this scenario");
  }
  std::vector<Box> pool;
  // Use the contextual boxes' own scenario pointer so mixing never compares
  // two equal scenarios by pointer.
  const ScenarioPtr& shared = contextual->front().scenario_ptr();
  for (auto it = shared->global_assignments().begin(); it != shared->global_assignments().end(); ++it) {
    pool.push_back(deterministic_box(shared, *it));
  }
  pool.insert(pool.end(), contextual->begin(), contextual->end());

  std::uniform_int_distribution<std::size_t> count(1, 6);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::size_t k = count(rng);
  std::vector<Box> chosen;
  for (std::size_t i = 0; i < k; ++i) chosen.push_back(pool[pick(rng)]);
  const auto w = random_probability_vector(k, rng);
  const Box mixed = mix(chosen, w);
  return Box(s, mixed.tables());
}

Box random_correlator_box(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CorrelatorBox cb;
  for (int i = 0; i < n; ++i) cb.correlators.push_back(u(rng));
  return correlator_to_box(cb);
}

}  // namespace ctx
