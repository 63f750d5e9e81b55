// ctxbox: command-line front end for box files, measures, distillation
// sweeps and property suites.
//
// Exit codes: 0 ok, 2 usage/parse, 3 invalid box, 4 solver failure,
// 5 property violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "ctx/boxfile.hpp"
#include "ctx/distill.hpp"
#include "ctx/measures.hpp"
#include "ctx/polytope.hpp"
#include "ctx/random_boxes.hpp"
#include "ctx/verify.hpp"

namespace {

using namespace ctx;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidBox = 3;
constexpr int kExitSolver = 4;
constexpr int kExitProperty = 5;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidScenario:
    case ErrorKind::ScenarioTooLarge:
    case ErrorKind::BadPermutation:
      return kExitUsage;
    case ErrorKind::InvalidBox:
    case ErrorKind::IncompatibleBox:
    case ErrorKind::InconsistentBox:
    case ErrorKind::NotRepresentable:
    case ErrorKind::UnsupportedScenario:
    case ErrorKind::UndefinedBound:
      return kExitInvalidBox;
    case ErrorKind::SolverFailure:
      return kExitSolver;
    case ErrorKind::PropertyViolation:
      return kExitProperty;
  }
  return kExitUsage;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct MeasureArgs {
  std::string file;
  std::string measure = "xmax";
  std::string reference;
  std::string format = "text";
  double tol = kSmallScenarioTol;
  std::uint64_t seed = 0;
  bool renormalize = false;
};

int cmd_measure(const MeasureArgs& a) {
  const Box b = to_box(read_box_file(a.file), a.renormalize);
  const ConsistencyReport cr = check_consistency(b);
  if (!cr.consistent) {
    std::cerr << "inconsistent box: " << cr.violations.size() << " overlapping context pair(s) disagree\n";
    for (const auto& v : cr.violations) {
      std::cerr << "  contexts " << v.context_a << " and " << v.context_b << " on observables";
      for (int o : v.overlap) std::cerr << ' ' << o;
      std::cerr << ": max deviation " << num(v.max_deviation) << "\n";
    }
    return kExitInvalidBox;
  }

  double value = 0.0, gap = 0.0, upper = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<double> weights;
  std::string note;

  if (a.measure == "xmax" || a.measure == "xu") {
    const MeasureResult r = a.measure == "xmax" ? x_max(b, a.tol) : x_uniform(b, a.tol);
    value = r.value;
    gap = r.gap;
    upper = a.measure == "xmax" ? r.upper_bound : r.value;
    iterations = a.measure == "xmax" ? r.outer_iterations : r.inner_iterations;
    converged = r.converged;
    weights = r.context_weights.weights;
  } else if (a.measure == "cost") {
    const VertexSet vs = enumerate_noncontextual_vertices(b.scenario_ptr());
    const CostCertificate cert = contextuality_cost(b, vs);
    value = upper = cert.cost;
    iterations = cert.pivots;
    note = "reconstruction error " + num(cert.reconstruction_error(b, vs));
  } else if (a.measure == "beta") {
    const Box ref = a.reference.empty() ? make_extremal_xor_box(b.scenario_ptr())
                                        : to_box(read_box_file(a.reference), a.renormalize);
    const BetaResult r = beta(b, ref);
    value = upper = r.value;
    note = "noncontextual bound " + num(r.noncontextual_bound) + (r.violation ? ", violated" : ", not violated");
  } else {
    std::cerr << "unknown measure '" << a.measure << "'\n";
    return kExitUsage;
  }

  if (a.format == "csv") {
    std::cout << "measure,value,gap,upper_bound,iterations,converged\n";
    std::cout << a.measure << ',' << num(value) << ',' << num(gap) << ',' << num(upper) << ',' << iterations << ','
              << (converged ? 1 : 0) << "\n";
    return kExitOk;
  }
  std::cout << a.measure << " = " << num(value) << (a.measure == "xmax" || a.measure == "xu" ? " bits\n" : "\n");
  std::cout << "gap " << num(gap) << ", upper bound " << num(upper) << ", iterations " << iterations
            << (converged ? ", converged" : ", NOT converged") << "\n";
  if (!weights.empty()) {
    std::cout << "context weights";
    for (double w : weights) std::cout << ' ' << num(w);
    std::cout << "\n";
  }
  if (!note.empty()) std::cout << note << "\n";
  return kExitOk;
}

struct DistillArgs {
  std::vector<double> alphas;
  int n = 4;
  int m = 2;
  int rounds = 1;
};

int cmd_distill(const DistillArgs& a) {
  if (a.alphas.empty() || a.n < 3 || a.m < 2 || a.rounds < 1) {
    std::cerr << "invalid grid: need alphas, n >= 3, m >= 2, rounds >= 1\n";
    return kExitUsage;
  }
  for (double alpha : a.alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      std::cerr << "invalid grid: alpha " << alpha << " outside [0, 1]\n";
      return kExitUsage;
    }
  }
  std::cout << "alpha,n,m,round,beta_before,beta_after,predicted_after,improved\n";
  for (double alpha : a.alphas) {
    // Each round maps alpha B_x + (1 - alpha) B_c to the same family.
    double cur = alpha;
    for (int r = 1; r <= a.rounds; ++r) {
      const DistillationReport rep = distillation_experiment(cur, a.n, a.m);
      std::cout << num(alpha) << ',' << a.n << ',' << a.m << ',' << r << ',' << num(rep.beta_before) << ','
                << num(rep.beta_after) << ',' << num(rep.predicted_after) << ',' << (rep.improved ? 1 : 0) << "\n";
      cur = xor_round_weight(cur);
    }
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  int trials = 50;
  std::uint64_t seed = 0;
  std::string counterexample_prefix = "counterexample";
};

int cmd_verify(const VerifyArgs& a) {
  SuiteOptions opt;
  opt.trials = a.trials;
  opt.seed = a.seed;
  const SuiteReport rep = run_suite(a.suite, opt);
  std::cout << rep.suite << ": " << (rep.passed() ? "PASS" : "FAIL") << " (" << rep.trials << " trials, "
            << rep.violations << " violations, worst excess " << num(rep.worst_excess) << ")\n";
  if (rep.passed()) return kExitOk;
  std::cout << "first violation: " << rep.detail << "\n";
  for (std::size_t i = 0; i < rep.counterexample.size(); ++i) {
    const std::string path = a.counterexample_prefix + "_" + rep.suite + "_" + std::to_string(i) + ".box";
    write_box_file(path, rep.counterexample[i]);
    std::cout << "counterexample written to " << path << "\n";
  }
  return kExitProperty;
}

struct RandomArgs {
  std::string scenario;
  std::string kind = "noncontextual";
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_random(const RandomArgs& a) {
  const ScenarioPtr s = parse_scenario_spec(a.scenario);
  std::mt19937_64 rng(a.seed);
  std::vector<std::pair<std::string, std::string>> meta{
      {"kind", a.kind}, {"scenario", a.scenario}, {"seed", std::to_string(a.seed)}};
  std::optional<Box> b;
  if (a.kind == "noncontextual") {
    b = random_noncontextual_box(s, rng);
  } else if (a.kind == "vertexmix") {
    b = random_vertex_mixture(s, rng);
  } else if (a.kind == "isotropic") {
    if (!(*s == *make_bipartite_bell(2, 2, 2, 2))) {
      std::cerr << "isotropic boxes need scenario bell:2,2,2,2\n";
      return kExitUsage;
    }
    if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) {
      std::cerr << "alpha must lie in [0, 1]\n";
      return kExitUsage;
    }
    b = make_isotropic_box(a.alpha);
    meta.emplace_back("alpha", num(a.alpha));
  } else {
    std::cerr << "unknown kind '" << a.kind << "'\n";
    return kExitUsage;
  }
  const std::string text = write_box_document(to_document(*b, std::move(meta)));
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error(ErrorKind::Parse, "cannot write " + a.out);
    f << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality boxes: measures, cost, distillation and property suites"};
  app.require_subcommand(1);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Evaluate a measure on a box file");
  measure->add_option("file", ma.file, "Box file")->required();
  measure->add_option("--measure", ma.measure, "xmax, xu, cost or beta")
      ->check(CLI::IsMember({"xmax", "xu", "cost", "beta"}));
  measure->add_option("--tol", ma.tol, "Solver tolerance in bits");
  measure->add_option("--seed", ma.seed, "Random seed (the solvers are deterministic)");
  measure->add_option("--format", ma.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  measure->add_option("--reference", ma.reference, "Reference box file for beta");
  measure->add_flag("--renormalize", ma.renormalize, "Rescale each table to sum to 1 before validation");

  DistillArgs da;
  auto* distill = app.add_subcommand("distill", "XOR distillation sweep (CSV)");
  distill->add_option("--alpha", da.alphas, "Mixing weight(s) of the extremal box")->required()->delimiter(',');
  distill->add_option("--n", da.n, "Number of contexts");
  distill->add_option("--m", da.m, "Observables per context");
  distill->add_option("--rounds", da.rounds, "XOR rounds");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("--suite", va.suite, "consistency, convexity, continuity, costbound or preserve")->required();
  verify->add_option("--trials", va.trials, "Trials");
  verify->add_option("--seed", va.seed, "Random seed");
  verify->add_option("--counterexample-prefix", va.counterexample_prefix, "Path prefix for counterexample files");

  RandomArgs ra;
  auto* random = app.add_subcommand("random", "Write a random box file");
  random->add_option("--scenario", ra.scenario, "cycle:N, bell:NX,NY,NA,NB or chain:N,M")->required();
  random->add_option("--kind", ra.kind, "noncontextual, vertexmix or isotropic")
      ->check(CLI::IsMember({"noncontextual", "vertexmix", "isotropic"}));
  random->add_option("--alpha", ra.alpha, "Isotropic weight");
  random->add_option("--seed", ra.seed, "Random seed");
  random->add_option("--out", ra.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*measure) return cmd_measure(ma);
    if (*distill) return cmd_distill(da);
    if (*verify) return cmd_verify(va);
    if (*random) return cmd_random(ra);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
