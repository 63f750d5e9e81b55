#include "ctx/distill.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ctx/kernels.hpp"
#include "ctx/measures.hpp"
#include "ctx/polytope.hpp"
#include "ctx/random_boxes.hpp"

namespace ctx {

double predicted_beta_after(double alpha, int n) {
  const double a = alpha, b = 1.0 - alpha;
  return (a * a + b * b) * (n - 1) + 2.0 * a * b * n;
}

double xor_round_weight(double alpha) { return 2.0 * alpha * (1.0 - alpha); }

Box xor_wiring(const Box& b1, const Box& b2) {
  const Scenario& s = b1.scenario();
  if (!(s == b2.scenario())) throw Error(ErrorKind::IncompatibleBox, "xor_wiring: boxes live on different scenarios");
  if (!s.all_binary()) throw Error(ErrorKind::UnsupportedScenario, "xor_wiring needs binary observables");
  // Row indices of a binary context are bit strings, so the XOR of the two
  // copies' outcomes is the XOR of their row indices.
  std::vector<Table> tables;
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const std::size_t size = s.table_size(c);
    Table t(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) t[i ^ j] += b1.at(c, i) * b2.at(c, j);
    }
    tables.push_back(std::move(t));
  }
  return Box(b1.scenario_ptr(), std::move(tables));
}

ScenarioPtr distillation_scenario(int n, int m) { return make_xor_chain(n, m); }

DistillationReport distillation_experiment(double alpha, int n, int m) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidBox, "alpha must lie in [0, 1]");
  if (n < 3 || m < 2) throw Error(ErrorKind::InvalidScenario, "distillation needs n >= 3 and m >= 2");
  auto s = distillation_scenario(n, m);
  const Box bx = make_extremal_xor_box(s);
  const Box bc = make_correlated_box(s);
  const Box b = mix2(bx, bc, alpha);

  DistillationReport r;
  r.alpha = alpha;
  r.n = n;
  r.m = m;
  r.beta_before = beta(b, bx).value;
  r.beta_after = beta(xor_wiring(b, b), bx).value;
  r.predicted_after = predicted_beta_after(alpha, n);
  // Closed forms can differ from the simulated tables only by rounding.
  r.improved = r.beta_after - r.beta_before > 1e-12;
  if (std::abs(r.beta_after - r.predicted_after) > 1e-12) {
    throw Error(ErrorKind::PropertyViolation,
                "XOR round gave beta " + std::to_string(r.beta_after) + ", expected " +
                    std::to_string(r.predicted_after));
  }
  return r;
}

std::vector<double> iterate_distillation(const Box& b, const Box& reference, int rounds) {
  if (rounds < 1) throw Error(ErrorKind::InvalidBox, "iterate_distillation needs rounds >= 1");
  std::vector<double> out{beta(b, reference).value};
  Box cur = b;
  for (int r = 0; r < rounds; ++r) {
    cur = xor_wiring(cur, cur);
    out.push_back(beta(cur, reference).value);
  }
  return out;
}

GlobalDistribution xor_global(const GlobalDistribution& q1, const GlobalDistribution& q2) {
  if (!q1.scenario().all_binary() || !(q1.scenario() == q2.scenario())) {
    throw Error(ErrorKind::IncompatibleBox, "xor_global needs two models on one binary scenario");
  }
  std::vector<double> out(q1.weights().size());
  kernels::parallel::xor_convolve(q1.weights(), q2.weights(), out);
  double sum = 0.0;
  for (double v : out) sum += v;
  for (double& v : out) v /= sum;
  return GlobalDistribution(q1.scenario_ptr(), std::move(out));
}

PreservationReport verify_noncontextuality_preservation(const ScenarioPtr& s, int trials,
                                                        std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidBox, "need at least one trial");
  std::mt19937_64 rng(seed);
  PreservationReport rep;
  for (int i = 0; i < trials; ++i) {
    const GlobalDistribution q1 = random_global_distribution(s, rng);
    const GlobalDistribution q2 = random_global_distribution(s, rng);
    const Box b1 = from_global_distribution(q1);
    const Box b2 = from_global_distribution(q2);
    const Box out = xor_wiring(b1, b2);
    ++rep.trials;

    const Box implied = from_global_distribution(xor_global(q1, q2));
    rep.max_witness_error = std::max(rep.max_witness_error, implied.max_abs_diff(out));

    if (!is_noncontextual(out).noncontextual) {
      ++rep.violations;
      if (!rep.counterexample_first) {
        rep.counterexample_first = b1;
        rep.counterexample_second = b2;
      }
    }
  }
  return rep;
}

}  // namespace ctx
