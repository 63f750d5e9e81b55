#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "ctx/polytope.hpp"
#include "ctx/random_boxes.hpp"

using namespace ctx;

namespace {

// Largest of the eight CHSH expressions on the (2,2,2,2) scenario, from the
// correlators E_xy of contexts (x, y) in the order 00, 01, 10, 11.
double max_chsh(const Box& b) {
  double e[4];
  for (std::size_t c = 0; c < 4; ++c) e[c] = context_correlator(b, c);
  double best = -4.0;
  for (int odd = 0; odd < 4; ++odd) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += (c == odd ? -e[c] : e[c]);
    best = std::max({best, s, -s});
  }
  return best;
}

// Largest sum_i g_i E_i over sign vectors with an odd number of -1. With
// unbiased marginals the n-cycle box is noncontextual iff this is <= n - 2.
double max_odd_cycle_sum(const std::vector<double>& e) {
  const int n = static_cast<int>(e.size());
  double best = -1e300;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += ((mask >> i) & 1u) ? -e[i] : e[i];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST_CASE("vertex counts") {
  for (int n = 3; n <= 8; ++n) {
    const VertexSet vs = enumerate_noncontextual_vertices(make_n_cycle(n));
    CHECK(vs.deterministic.size() == (1u << n));
    REQUIRE(vs.contextual);
    CHECK(vs.contextual->size() == (1u << (n - 1)));
  }
  const VertexSet bell = enumerate_noncontextual_vertices(make_bipartite_bell(2, 2, 2, 2));
  CHECK(bell.deterministic.size() == 16);
  CHECK_FALSE(bell.contextual);
  CHECK(enumerate_noncontextual_vertices(make_bipartite_bell(2, 3, 3, 2)).deterministic.size() == 9 * 8);
  // Every observable is covered, so distinct assignments give distinct boxes.
  CHECK(enumerate_noncontextual_vertices(make_xor_chain(3, 3)).deterministic.size() == 64);
}

TEST_CASE("cycle contextual vertices") {
  for (int n : {3, 4, 5, 6}) {
    for (const Box& v : enumerate_cycle_contextual_vertices(n)) {
      CHECK(check_consistency(v).consistent);
      const auto e = box_to_correlators(v).correlators;
      int minus = 0;
      for (double x : e) minus += x < 0 ? 1 : 0;
      CHECK(minus % 2 == 1);
      CHECK_FALSE(is_noncontextual(v).noncontextual);
    }
  }
}

TEST_CASE("membership of random noncontextual boxes with witness") {
  std::mt19937_64 rng(8);
  for (auto s : {make_n_cycle(5), make_bipartite_bell(2, 2, 2, 3), make_xor_chain(3, 3)}) {
    for (int i = 0; i < 15; ++i) {
      const Box b = random_noncontextual_box(s, rng);
      const MembershipResult r = is_noncontextual(b);
      REQUIRE(r.noncontextual);
      REQUIRE(r.witness);
      CHECK(from_global_distribution(*r.witness).max_abs_diff(b) <= kMembershipTol);
    }
  }
}

TEST_CASE("membership agrees with the CHSH inequalities on the Bell scenario") {
  std::mt19937_64 rng(12);
  auto s = make_bipartite_bell(2, 2, 2, 2);
  int local = 0, nonlocal = 0;
  for (int i = 0; i < 200; ++i) {
    const Box b = random_vertex_mixture(s, rng);
    const double chsh = max_chsh(b);
    if (std::abs(chsh - 2.0) < 1e-6) continue;
    const bool nc = is_noncontextual(b).noncontextual;
    CHECK(nc == (chsh < 2.0));
    (nc ? local : nonlocal)++;
  }
  CHECK(local > 10);
  CHECK(nonlocal > 10);
  // alpha B_000 + (1 - alpha) B_001 reaches CHSH |8 alpha - 4|.
  for (int k = 0; k <= 20; ++k) {
    const double a = k / 20.0;
    if (k == 5 || k == 15) continue;
    CHECK(is_noncontextual(make_isotropic_box(a)).noncontextual == (a > 0.25 && a < 0.75));
  }
}

TEST_CASE("membership agrees with the odd-cycle inequalities") {
  std::mt19937_64 rng(13);
  for (int n : {3, 4, 5, 6}) {
    int nc_count = 0;
    for (int i = 0; i < 60; ++i) {
      const Box b = random_correlator_box(n, rng);
      const double lhs = max_odd_cycle_sum(box_to_correlators(b).correlators);
      if (std::abs(lhs - (n - 2)) < 1e-6) continue;
      const bool nc = is_noncontextual(b).noncontextual;
      CHECK(nc == (lhs < n - 2));
      nc_count += nc ? 1 : 0;
    }
    CHECK(nc_count > 0);
  }
}

TEST_CASE("inconsistent boxes are refused") {
  auto s = make_n_cycle(3);
  const Box b(s, {{0.7, 0.0, 0.0, 0.3}, {0.5, 0.0, 0.0, 0.5}, {0.5, 0.0, 0.0, 0.5}});
  CHECK_THROWS_AS(is_noncontextual(b), Error);
  CHECK_THROWS_AS(contextuality_cost(b), Error);
}

TEST_CASE("cost of the Bell vertices and isotropic boxes") {
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) CHECK(contextuality_cost(make_b_rst(r, s, t)).cost == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // CHSH of alpha B_000 + (1 - alpha) B_001 is |8 alpha - 4|. A unit of
  // B_rst weight adds at most 2 to CHSH over the local bound, so
  // C = max(0, (S - 2) / 2) = max(0, |4 alpha - 2| - 1).
  const VertexSet vs = enumerate_noncontextual_vertices(make_bipartite_bell(2, 2, 2, 2));
  for (int k = 0; k <= 20; ++k) {
    const double a = k / 20.0;
    const Box b = make_isotropic_box(a);
    const CostCertificate cert = contextuality_cost(b, vs);
    CHECK(cert.cost == doctest::Approx(std::max(0.0, std::abs(4.0 * a - 2.0) - 1.0)).epsilon(1e-9));
    CHECK(cert.cost == doctest::Approx(std::max(0.0, (max_chsh(b) - 2.0) / 2.0)).epsilon(1e-9));
    CHECK(cert.reconstruction_error(b, vs) <= 1e-7);
  }
}

TEST_CASE("cost against the CHSH excess on random Bell boxes") {
  std::mt19937_64 rng(31);
  auto s = make_bipartite_bell(2, 2, 2, 2);
  const VertexSet vs = enumerate_noncontextual_vertices(s);
  for (int i = 0; i < 100; ++i) {
    const Box b = random_vertex_mixture(s, rng);
    const CostCertificate cert = contextuality_cost(b, vs);
    CHECK(cert.cost == doctest::Approx(std::max(0.0, (max_chsh(b) - 2.0) / 2.0)).epsilon(1e-8));
    CHECK(cert.reconstruction_error(b, vs) <= 1e-7);
    if (cert.valuable_part) CHECK(check_consistency(*cert.valuable_part).consistent);
  }
}

TEST_CASE("cost vanishes on noncontextual boxes and is one on cycle vertices") {
  std::mt19937_64 rng(41);
  for (int n : {4, 5, 6}) {
    auto s = make_n_cycle(n);
    const VertexSet vs = enumerate_noncontextual_vertices(s);
    for (int i = 0; i < 10; ++i) CHECK(contextuality_cost(random_noncontextual_box(s, rng), vs).cost <= 1e-7);
    for (const Box& v : *vs.contextual) {
      const CostCertificate cert = contextuality_cost(v, vs);
      CHECK(cert.cost == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(cert.reconstruction_error(v, vs) <= 1e-7);
    }
  }
}

TEST_CASE("zero cost exactly on noncontextual boxes") {
  std::mt19937_64 rng(51);
  for (auto s : {make_bipartite_bell(2, 2, 2, 2), make_n_cycle(5)}) {
    const VertexSet vs = enumerate_noncontextual_vertices(s);
    for (const Box& e : vs.deterministic) CHECK(contextuality_cost(e, vs).cost == 0.0);
    for (int i = 0; i < 60; ++i) {
      const Box b = random_vertex_mixture(s, rng);
      const double c = contextuality_cost(b, vs).cost;
      if (c > 0.0 && c < 1e-6) continue;
      CHECK((c == 0.0) == is_noncontextual(b).noncontextual);
    }
  }
}

TEST_CASE("cost is convex") {
  std::mt19937_64 rng(52);
  auto s = make_n_cycle(4);
  const VertexSet vs = enumerate_noncontextual_vertices(s);
  for (int i = 0; i < 40; ++i) {
    const Box parts[] = {random_vertex_mixture(s, rng), random_vertex_mixture(s, rng), random_vertex_mixture(s, rng)};
    const auto p = random_probability_vector(3, rng);
    double rhs = 0.0;
    for (int k = 0; k < 3; ++k) rhs += p[k] * contextuality_cost(parts[k], vs).cost;
    CHECK(contextuality_cost(mix(parts, p), vs).cost <= rhs + 1e-7);
  }
}

TEST_CASE("cost grows along the segment from uniform to a vertex") {
  for (int n : {4, 5}) {
    auto s = make_n_cycle(n);
    const VertexSet vs = enumerate_noncontextual_vertices(s);
    const Box& ev = vs.contextual->front();
    const Box u = uniform_box(ev.scenario_ptr());
    double prev = -1.0;
    for (int k = 0; k <= 20; ++k) {
      const double c = contextuality_cost(mix2(ev, u, k / 20.0), vs).cost;
      CHECK(c >= prev - 1e-9);
      prev = c;
    }
    CHECK(prev == doctest::Approx(1.0));
  }
}
