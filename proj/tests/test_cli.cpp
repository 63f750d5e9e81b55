#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ctx/boxfile.hpp"

using namespace ctx;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CTXBOX_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Second field of the second CSV line.
double csv_value(const std::string& out) {
  const auto line = out.substr(out.find('\n') + 1);
  const auto a = line.find(',') + 1;
  return std::stod(line.substr(a, line.find(',', a) - a));
}

}  // namespace

TEST_CASE("random isotropic box and its X_max") {
  REQUIRE(run("random --scenario bell:2,2,2,2 --kind isotropic --alpha 1 --out cli_pr.box").code == 0);
  CHECK(to_box(read_box_file("cli_pr.box")).max_abs_diff(make_pr_box()) == 0.0);
  const Run r = run("measure cli_pr.box --measure xmax --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("measure,value,gap,upper_bound,iterations,converged\n", 0) == 0);
  CHECK(csv_value(r.out) == doctest::Approx(0.415037).epsilon(1e-4));
  CHECK(run("measure cli_pr.box --measure cost --format csv").out.find("cost,1,") != std::string::npos);
}

TEST_CASE("same seed, same bytes") {
  const Run a = run("random --scenario cycle:5 --kind vertexmix --seed 42");
  const Run b = run("random --scenario cycle:5 --kind vertexmix --seed 42");
  const Run c = run("random --scenario cycle:5 --kind vertexmix --seed 43");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("noncontextual file has zero cost") {
  REQUIRE(run("random --scenario cycle:4 --kind noncontextual --seed 3 --out cli_nc.box").code == 0);
  const Run r = run("measure cli_nc.box --measure cost --format csv");
  CHECK(r.code == 0);
  CHECK(csv_value(r.out) == 0.0);
}

TEST_CASE("5-cycle extremal box") {
  write_box_file("cli_e5.box", to_document(make_extremal_xor_box(make_n_cycle(5))));
  const Run r = run("measure cli_e5.box --measure xmax --format csv");
  CHECK(r.code == 0);
  CHECK(csv_value(r.out) == doctest::Approx(0.321928).epsilon(1e-4));
  CHECK(csv_value(run("measure cli_e5.box --measure beta --format csv").out) == doctest::Approx(5.0));
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("measure does_not_exist.box").code == 2);
  CHECK(run("measure cli_pr.box --measure entropy").code == 2);
  write("cli_garbage.box", "format_version 1\nobservables 2 2\nbogus\n");
  CHECK(run("measure cli_garbage.box").code == 2);

  write("cli_unnormalized.box",
        "format_version 1\nobservables 2 2\ncontext 0 1\ntable 1 1 0 0\n");
  CHECK(run("measure cli_unnormalized.box --measure cost").code == 3);
  CHECK(run("measure cli_unnormalized.box --measure cost --renormalize").code == 0);

  write("cli_inconsistent.box",
        "format_version 1\nobservables 2 2 2\ncontext 0 1\ncontext 1 2\ncontext 2 0\n"
        "table 0.7 0 0 0.3\ntable 0.5 0 0 0.5\ntable 0.5 0 0 0.5\n");
  CHECK(run("measure cli_inconsistent.box --measure xmax").code == 3);

  CHECK(run("verify --suite nonsense").code == 2);
  CHECK(run("random --scenario torus:3").code == 2);
  CHECK(run("random --scenario cycle:4 --kind isotropic").code == 2);
  CHECK(run("distill --alpha 1.5 --n 4").code == 2);
  CHECK(run("distill --alpha 0.2 --n 2").code == 2);
}

TEST_CASE("distill rows") {
  const Run r = run("distill --alpha 0.25,0,0.5 --n 4");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("alpha,n,m,round,beta_before,beta_after,predicted_after,improved\n", 0) == 0);
  CHECK(r.out.find("0.25,4,2,1,3.25,3.375,3.375,1\n") != std::string::npos);
  CHECK(r.out.find("0,4,2,1,3,3,3,0\n") != std::string::npos);
  CHECK(r.out.find("0.5,4,2,1,3.5,3.5,3.5,0\n") != std::string::npos);

  const Run rounds = run("distill --alpha 0.1 --n 5 --m 3 --rounds 3");
  CHECK(rounds.code == 0);
  CHECK(rounds.out.find("0.1,5,3,3,") != std::string::npos);
}

TEST_CASE("verify suites") {
  const Run r = run("verify --suite preserve --trials 5 --seed 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("preserve: PASS") == 0);
  CHECK(run("verify --suite consistency --trials 5").code == 0);
}
