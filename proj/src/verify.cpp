#include "ctx/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "ctx/distill.hpp"
#include "ctx/measures.hpp"
#include "ctx/polytope.hpp"
#include "ctx/random_boxes.hpp"

namespace ctx {

namespace {

void record(SuiteReport& rep, double excess, const std::string& what,
            std::initializer_list<std::pair<const Box*, std::string>> boxes) {
  rep.worst_excess = std::max(rep.worst_excess, excess);
  if (excess <= 0.0) return;
  if (rep.violations++ == 0) {
    rep.detail = what;
    for (const auto& [b, role] : boxes) {
      rep.counterexample.push_back(to_document(*b, {{"suite", rep.suite}, {"role", role}, {"violation", what}}));
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

SuiteReport run_consistency_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "consistency";
  std::mt19937_64 rng(opt.seed);
  const std::vector<ScenarioPtr> scenarios{make_n_cycle(4), make_n_cycle(5), make_bipartite_bell(2, 2, 2, 2)};
  for (int i = 0; i < opt.trials; ++i) {
    const ScenarioPtr& s = scenarios[static_cast<std::size_t>(i) % scenarios.size()];
    const Box a = random_noncontextual_box(s, rng);
    const Box b = random_vertex_mixture(s, rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int obs = static_cast<int>(rng() % s->observable_count());
    const Box derived[] = {a, b, mix2(a, b, p), bit_flip(b, obs), xor_wiring(a, b)};
    const char* names[] = {"noncontextual", "vertex mixture", "mixture", "bit flip", "xor wiring"};
    ++rep.trials;
    for (std::size_t k = 0; k < std::size(derived); ++k) {
      const ConsistencyReport cr = check_consistency(derived[k]);
      double worst = 0.0;
      for (const auto& v : cr.violations) worst = std::max(worst, v.max_deviation);
      record(rep, cr.consistent ? -kProbTol : std::max(worst, kProbTol),
             std::string(names[k]) + " box inconsistent by " + fmt(worst),
             {{&derived[k], names[k]}});
    }
  }
  return rep;
}

SuiteReport run_convexity_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "convexity";
  std::mt19937_64 rng(opt.seed);
  const ScenarioPtr s = make_bipartite_bell(2, 2, 2, 2);
  for (int i = 0; i < opt.trials; ++i) {
    std::vector<Box> parts;
    for (int k = 0; k < 3; ++k) parts.push_back(random_vertex_mixture(s, rng));
    const std::vector<double> p = random_probability_vector(3, rng);
    const Box mixed = mix(parts, p);
    double rhs = 0.0;
    for (int k = 0; k < 3; ++k) rhs += p[k] * x_max(parts[k], opt.measure_tol).value;
    const double lhs = x_max(mixed, opt.measure_tol).value;
    ++rep.trials;
    record(rep, lhs - rhs - opt.slack, "X_max(mixture) " + fmt(lhs) + " > average " + fmt(rhs),
           {{&mixed, "mixture"}, {&parts[0], "part 0"}, {&parts[1], "part 1"}, {&parts[2], "part 2"}});
  }
  return rep;
}

SuiteReport run_continuity_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "continuity";
  std::mt19937_64 rng(opt.seed);
  const ScenarioPtr s = make_bipartite_bell(2, 2, 2, 2);
  const std::uint64_t d = continuity_dimension(*s);
  std::uniform_real_distribution<double> eps_dist(1e-3, 0.05);
  for (int i = 0; i < opt.trials; ++i) {
    const Box b = random_vertex_mixture(s, rng);
    const Box other = random_vertex_mixture(s, rng);
    // Per-context L1 distance of the pair is at most 2 eps <= 0.1.
    const Box bp = mix2(b, other, 1.0 - eps_dist(rng));
    const ContinuityBoundInput in{trace_distance(b, bp), d};
    ++rep.trials;

    const double dx = std::abs(x_max(b, opt.measure_tol).value - x_max(bp, opt.measure_tol).value);
    const double bx = continuity_bound(in);
    record(rep, dx - bx, "|dX_max| " + fmt(dx) + " > " + fmt(bx) + " at delta " + fmt(in.delta),
           {{&b, "box"}, {&bp, "perturbed"}});

    const double du = std::abs(x_uniform(b, opt.measure_tol).value - x_uniform(bp, opt.measure_tol).value);
    const double bu = fixed_weight_continuity_bound(in);
    record(rep, du - bu, "|dX_u| " + fmt(du) + " > " + fmt(bu) + " at delta " + fmt(in.delta),
           {{&b, "box"}, {&bp, "perturbed"}});
  }
  return rep;
}

SuiteReport run_costbound_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "costbound";
  std::mt19937_64 rng(opt.seed);
  for (int n : {4, 5, 6}) {
    const ScenarioPtr s = make_n_cycle(n);
    for (int i = 0; i < opt.trials; ++i) {
      const Box b = random_vertex_mixture(s, rng);
      const CostBound cb = cost_bound_xmax(b, opt.measure_tol);
      const double x = x_max(b, opt.measure_tol).value;
      ++rep.trials;
      record(rep, x - cb.bound - opt.slack,
             std::to_string(n) + "-cycle: X_max " + fmt(x) + " > C * log2(n/(n-1)) = " + fmt(cb.bound),
             {{&b, "box"}});
    }
  }
  return rep;
}

SuiteReport run_preserve_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "preserve";
  std::uint64_t seed = opt.seed;
  for (int n : {4, 5}) {
    const PreservationReport pr = verify_noncontextuality_preservation(make_n_cycle(n), opt.trials, seed++);
    rep.trials += pr.trials;
    for (int v = 0; v < pr.violations; ++v) {
      record(rep, 1.0, std::to_string(n) + "-cycle: XOR output failed membership",
             {{&*pr.counterexample_first, "first"}, {&*pr.counterexample_second, "second"}});
    }
    record(rep, pr.max_witness_error - 1e-9,
           std::to_string(n) + "-cycle: convolved witness off by " + fmt(pr.max_witness_error), {});
  }
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"consistency", "convexity", "continuity", "costbound", "preserve"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (opt.trials < 1) throw Error(ErrorKind::Parse, "trials must be >= 1");
  if (name == "consistency") return run_consistency_suite(opt);
  if (name == "convexity") return run_convexity_suite(opt);
  if (name == "continuity") return run_continuity_suite(opt);
  if (name == "costbound") return run_costbound_suite(opt);
  if (name == "preserve") return run_preserve_suite(opt);
  throw Error(ErrorKind::Parse, "unknown suite '" + name + "'");
}

}  // namespace ctx
