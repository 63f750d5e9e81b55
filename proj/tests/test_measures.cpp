#include <doctest.h>

#include <cmath>
#include <random>

#include "ctx/measures.hpp"
#include "ctx/polytope.hpp"
#include "ctx/random_boxes.hpp"

using namespace ctx;

namespace {

const double kLog43 = std::log2(4.0 / 3.0);

// Iterative scaling for min_q sum_c w_c D(p_c || Q_c): each step replaces q
// by the w-average of its context-wise conditional fits. Monotone but slow.
double em_oracle(const Box& b, const std::vector<double>& w, int iterations) {
  const Scenario& s = b.scenario();
  const std::size_t n = s.assignment_count();
  std::vector<double> q(n, 1.0 / static_cast<double>(n));
  auto marg = [&](const std::vector<double>& qq) {
    std::vector<Table> m;
    for (std::size_t c = 0; c < s.context_count(); ++c) m.emplace_back(s.table_size(c), 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t c = 0; c < s.context_count(); ++c) m[c][s.context_index(l, c)] += qq[l];
    }
    return m;
  };
  for (int it = 0; it < iterations; ++it) {
    const auto m = marg(q);
    std::vector<double> next(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t c = 0; c < s.context_count(); ++c) {
        const std::size_t r = s.context_index(l, c);
        if (m[c][r] > 0) next[l] += w[c] * b.at(c, r) * q[l] / m[c][r];
      }
    }
    q = next;
  }
  const auto m = marg(q);
  double v = 0.0;
  for (std::size_t c = 0; c < s.context_count(); ++c) v += w[c] * relative_entropy(b.table(c), m[c]);
  return v;
}

}  // namespace

TEST_CASE("relative entropy and eta") {
  const double p[] = {0.5, 0.5}, q[] = {0.25, 0.75}, z[] = {1.0, 0.0};
  CHECK(relative_entropy(p, p) == 0.0);
  CHECK(relative_entropy(p, q) == doctest::Approx(0.5 * std::log2(2.0) + 0.5 * std::log2(0.5 / 0.75)));
  CHECK(std::isinf(relative_entropy(p, z)));
  CHECK(relative_entropy(z, p) == doctest::Approx(1.0));
  const double three[] = {0.2, 0.3, 0.5};
  CHECK_THROWS(relative_entropy(p, three));
  CHECK(eta(0.0) == 0.0);
  CHECK(eta(1.0) == 0.0);
  CHECK(eta(0.5) == doctest::Approx(0.5));
  CHECK(eta(0.25) == doctest::Approx(0.5));
}

TEST_CASE("simplex projection") {
  const double v[] = {0.2, 0.2, 0.6};
  CHECK(project_to_simplex(v) == std::vector<double>{0.2, 0.2, 0.6});
  const double far[] = {3.0, 0.0, -1.0};
  const auto p = project_to_simplex(far);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == 0.0);
  const double tie[] = {1.0, 1.0};
  CHECK(project_to_simplex(tie)[0] == doctest::Approx(0.5));
}

TEST_CASE("uniform-weight measure of the PR box against iterative scaling") {
  const Box pr = make_pr_box();
  const MeasureResult r = x_uniform(pr, 1e-8);
  CHECK(r.value == doctest::Approx(kLog43).epsilon(1e-6));
  CHECK(r.gap <= 1e-8);
  CHECK(em_oracle(pr, std::vector<double>(4, 0.25), 4000) == doctest::Approx(kLog43).epsilon(1e-4));
}

TEST_CASE("fixed-weight solver matches iterative scaling on random boxes") {
  std::mt19937_64 rng(19);
  for (auto s : {make_bipartite_bell(2, 2, 2, 2), make_n_cycle(5), make_xor_chain(3, 3)}) {
    for (int i = 0; i < 4; ++i) {
      const Box b = random_vertex_mixture(s, rng);
      ContextWeights w{random_probability_vector(s->context_count(), rng)};
      const MeasureResult r = rec_fixed(b, w, 1e-9);
      const double em = em_oracle(b, w.weights, 20000);
      CHECK(r.value <= em + 1e-7);
      CHECK(em - r.value <= 1e-4);
      CHECK(r.value - r.gap >= -1e-8);
    }
  }
}

TEST_CASE("Frank-Wolfe objective is nonincreasing") {
  std::mt19937_64 rng(3);
  const Box b = random_vertex_mixture(make_n_cycle(6), rng);
  std::vector<double> trace;
  InnerOptions opt;
  opt.tol = 1e-10;
  opt.trace = &trace;
  rec_fixed(b, ContextWeights::uniform(6), opt);
  REQUIRE(trace.size() > 2);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("single-context weights see no contextuality") {
  const Box pr = make_pr_box();
  for (std::size_t c = 0; c < 4; ++c) CHECK(rec_fixed(pr, ContextWeights::point_mass(4, c), 1e-9).value <= 1e-8);
}

TEST_CASE("X_max of the PR box") {
  const MeasureResult r = x_max(make_pr_box(), 1e-6);
  CHECK(r.value == doctest::Approx(kLog43).epsilon(1e-5));
  CHECK(r.converged);
  CHECK(r.upper_bound >= r.value - r.gap - 1e-12);
  CHECK(r.upper_bound - kLog43 <= 1e-5);
  double sum = 0.0;
  for (double w : r.context_weights.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("X_max of cycle vertices") {
  for (int n : {3, 4, 5, 6}) {
    const auto verts = enumerate_cycle_contextual_vertices(n);
    for (std::size_t i = 0; i < verts.size(); i += 3) {
      CHECK(x_max(verts[i], 1e-6).value == doctest::Approx(std::log2(n / (n - 1.0))).epsilon(1e-4));
    }
  }
}

TEST_CASE("X_max vanishes on noncontextual boxes and dominates X_u") {
  std::mt19937_64 rng(6);
  auto s = make_bipartite_bell(2, 2, 2, 2);
  for (const Box& e : enumerate_noncontextual_vertices(s).deterministic) {
    CHECK(x_max(e, 1e-6).value <= 2e-6);
    CHECK(x_uniform(e, 1e-6).value <= 2e-6);
  }
  for (int i = 0; i < 5; ++i) CHECK(x_max(random_noncontextual_box(s, rng), 1e-6).value <= 1e-6);
  for (int i = 0; i < 5; ++i) {
    const Box b = random_vertex_mixture(s, rng);
    CHECK(x_max(b, 1e-6).value >= x_uniform(b, 1e-6).value - 2e-6);
  }
}

TEST_CASE("fixed-weight measure is convex") {
  std::mt19937_64 rng(8);
  auto s = make_n_cycle(5);
  for (int i = 0; i < 20; ++i) {
    const Box parts[] = {random_vertex_mixture(s, rng), random_vertex_mixture(s, rng), random_vertex_mixture(s, rng)};
    const auto p = random_probability_vector(3, rng);
    const ContextWeights w{random_probability_vector(5, rng)};
    double rhs = 0.0;
    for (int k = 0; k < 3; ++k) rhs += p[k] * rec_fixed(parts[k], w, 1e-7).value;
    CHECK(rec_fixed(mix(parts, p), w, 1e-7).value <= rhs + 2e-7);
  }
}

TEST_CASE("X_max is invariant under outcome relabeling") {
  std::mt19937_64 rng(7);
  const Box b = random_vertex_mixture(make_n_cycle(5), rng);
  CHECK(x_max(bit_flip(b, 3), 1e-6).value == doctest::Approx(x_max(b, 1e-6).value).epsilon(1e-4));
}

TEST_CASE("direct sum with a local edge") {
  const Box pr = make_pr_box();
  const Box local(make_single_context({2, 2}), {{0.5, 0.0, 0.0, 0.5}});
  const Box ds = direct_sum_box(pr, local);
  CHECK(x_max(ds, 1e-6).value == doctest::Approx(kLog43).epsilon(1e-4));
  CHECK(x_uniform(ds, 1e-8).value == doctest::Approx(0.8 * kLog43).epsilon(1e-5));
}

TEST_CASE("continuity bound evaluation") {
  const ContinuityBoundInput in{0.01, 4};
  const double g = 0.1 + 2.0 * eta(0.99) + 3.0 * eta(0.01);
  CHECK(continuity_g(in) == doctest::Approx(g));
  CHECK(continuity_g(in) == doctest::Approx(0.328026).epsilon(1e-5));
  CHECK(continuity_bound(in) == doctest::Approx(6.0 * g + 0.03));
  CHECK(fixed_weight_continuity_bound(in) == doctest::Approx(g + 0.01));
  CHECK(continuity_g({0.0, 4}) == 0.0);
  CHECK(continuity_dimension(*make_bipartite_bell(2, 2, 2, 2)) == 4);
  CHECK(continuity_dimension(*make_single_context({2, 2})) == 1);
  CHECK_THROWS(continuity_g({-0.1, 4}));
  CHECK_THROWS(continuity_g({0.1, 0}));
}

TEST_CASE("beta on xor mixtures") {
  for (int n : {3, 4, 6}) {
    auto s = make_n_cycle(n);
    const Box bx = make_extremal_xor_box(s);
    const Box bc = make_correlated_box(s);
    CHECK(beta(bx, bx).value == doctest::Approx(n));
    CHECK(beta(bc, bx).value == doctest::Approx(n - 1));
    CHECK(beta(bc, bx).noncontextual_bound == n - 1);
    CHECK_FALSE(beta(bc, bx).violation);
    CHECK(beta(mix2(bx, bc, 0.25), bx).value == doctest::Approx(n - 0.75));
  }
  auto chain = make_xor_chain(4, 3);
  const Box bx = make_extremal_xor_box(chain);
  CHECK(beta(bx, bx).value == doctest::Approx(4.0));
  CHECK(beta(make_correlated_box(chain), bx).value == doctest::Approx(3.0));
}

TEST_CASE("cost bound") {
  const CostBound pr = cost_bound_xmax(make_pr_box());
  CHECK(pr.vertex_equivalent);
  CHECK(pr.cost == doctest::Approx(1.0));
  CHECK(pr.bound == doctest::Approx(kLog43));
  const CostBound iso = cost_bound_xmax(make_isotropic_box(0.9));
  CHECK(iso.bound == doctest::Approx(0.6 * kLog43));
  CHECK(x_max(make_isotropic_box(0.9), 1e-6).value <= iso.bound + 1e-5);
  CHECK_THROWS_AS(cost_bound_xmax(uniform_box(make_xor_chain(3, 3))), Error);
}

TEST_CASE("distillation bound calculator") {
  const DistillationBound d = distillable_upper_bound(make_isotropic_box(0.9), make_pr_box(), 1e-6);
  CHECK(d.conditional);
  CHECK(d.x_target == doctest::Approx(kLog43).epsilon(1e-4));
  CHECK(d.bound > 0.0);
  CHECK(d.bound < 1.0);
  CHECK_THROWS_AS(distillable_upper_bound(make_pr_box(), make_isotropic_box(0.5), 1e-6), Error);
}

TEST_CASE("context weights validation") {
  CHECK_NOTHROW(ContextWeights::uniform(3).validate(3));
  CHECK_THROWS(ContextWeights{{0.5, 0.6}}.validate(2));
  CHECK_THROWS(ContextWeights{{0.5, 0.5}}.validate(3));
  CHECK_THROWS(ContextWeights{{1.5, -0.5}}.validate(2));
}
