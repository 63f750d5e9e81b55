#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ctx/kernels.hpp"
#include "ctx/random_boxes.hpp"

using namespace ctx;

namespace {

double max_diff(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (std::size_t r = 0; r < a[c].size(); ++r) d = std::max(d, std::abs(a[c][r] - b[c][r]));
  }
  return d;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  std::mt19937_64 rng(1);
  // Both sides of the parallel threshold.
  for (auto s : {make_n_cycle(6), make_n_cycle(14), make_bipartite_bell(3, 3, 2, 4)}) {
    const auto q = random_probability_vector(s->assignment_count(), rng);
    const auto mr = kernels::reference::marginals(*s, q);
    const auto mp = kernels::parallel::marginals(*s, q);
    CHECK(max_diff(mr, mp) < 1e-12);

    std::vector<std::vector<double>> ratio;
    for (std::size_t c = 0; c < s->context_count(); ++c) ratio.push_back(random_probability_vector(s->table_size(c), rng));
    std::vector<double> sr(q.size()), sp(q.size());
    kernels::reference::context_score(*s, ratio, sr);
    kernels::parallel::context_score(*s, ratio, sp);
    for (std::size_t l = 0; l < q.size(); ++l) REQUIRE(sr[l] == doctest::Approx(sp[l]).epsilon(1e-14));
  }
}

TEST_CASE("marginals by direct summation") {
  auto s = make_n_cycle(3);
  std::vector<double> q(8, 0.0);
  q[0b011] = 0.5;  // (0,1,1)
  q[0b110] = 0.5;  // (1,1,0)
  const auto m = kernels::reference::marginals(*s, q);
  CHECK(m[0] == std::vector<double>{0, 0.5, 0, 0.5});  // (m0, m1)
  CHECK(m[1] == std::vector<double>{0, 0, 0.5, 0.5});  // (m1, m2)
  CHECK(m[2] == std::vector<double>{0, 0.5, 0.5, 0});  // (m2, m0)
}

TEST_CASE("xor convolution") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {4u, 64u, 8192u}) {
    const auto a = random_probability_vector(n, rng), b = random_probability_vector(n, rng);
    std::vector<double> r(n), p(n);
    kernels::reference::xor_convolve(a, b, r);
    kernels::parallel::xor_convolve(a, b, p);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(r[k] == doctest::Approx(p[k]).epsilon(1e-12));
      sum += r[k];
    }
    CHECK(sum == doctest::Approx(1.0));
    if (n == 4) {
      // out[k] = sum_i a[i] b[i ^ k]
      CHECK(r[3] == doctest::Approx(a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]));
    }
  }
  std::vector<double> odd(6, 1.0 / 6), out(6);
  CHECK_THROWS_AS(kernels::reference::xor_convolve(odd, odd, out), std::invalid_argument);
  CHECK_THROWS_AS(kernels::parallel::xor_convolve(odd, odd, out), std::invalid_argument);
}
