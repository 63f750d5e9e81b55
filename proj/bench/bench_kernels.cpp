// Serial reference vs OpenMP kernels on n-cycles with 2^n assignments.

#include <benchmark/benchmark.h>

#include <random>

#include "ctx/kernels.hpp"
#include "ctx/random_boxes.hpp"

namespace {

using namespace ctx;

struct Fixture {
  ScenarioPtr s;
  std::vector<double> q, q2;
  std::vector<std::vector<double>> ratio;

  explicit Fixture(int n) : s(make_n_cycle(n)) {
    std::mt19937_64 rng(7);
    q = random_probability_vector(s->assignment_count(), rng);
    q2 = random_probability_vector(s->assignment_count(), rng);
    for (std::size_t c = 0; c < s->context_count(); ++c) {
      ratio.push_back(random_probability_vector(s->table_size(c), rng));
    }
  }
};

template <auto Marginals>
void BM_marginals(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Marginals(*f.s, f.q));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.q.size()));
}

template <auto Score>
void BM_context_score(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  std::vector<double> score(f.q.size());
  for (auto _ : state) {
    Score(*f.s, f.ratio, score);
    benchmark::DoNotOptimize(score.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.q.size()));
}

template <auto Convolve>
void BM_xor_convolve(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  std::vector<double> out(f.q.size());
  for (auto _ : state) {
    Convolve(f.q, f.q2, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_marginals<kernels::reference::marginals>)->Name("marginals/reference")->DenseRange(12, 20, 4);
BENCHMARK(BM_marginals<kernels::parallel::marginals>)->Name("marginals/parallel")->DenseRange(12, 20, 4);
BENCHMARK(BM_context_score<kernels::reference::context_score>)->Name("context_score/reference")->DenseRange(12, 20, 4);
BENCHMARK(BM_context_score<kernels::parallel::context_score>)->Name("context_score/parallel")->DenseRange(12, 20, 4);
// Quadratic in the assignment count.
BENCHMARK(BM_xor_convolve<kernels::reference::xor_convolve>)->Name("xor_convolve/reference")->DenseRange(8, 12, 2);
BENCHMARK(BM_xor_convolve<kernels::parallel::xor_convolve>)->Name("xor_convolve/parallel")->DenseRange(8, 12, 2);

BENCHMARK_MAIN();
