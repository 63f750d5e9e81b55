#include <doctest.h>

#include <random>

#include "ctx/boxfile.hpp"
#include "ctx/random_boxes.hpp"

using namespace ctx;

namespace {

const char* kPr =
    "# PR box\n"
    "format_version 1\n"
    "ordering mixed-radix first-member-major\n"
    "observables 2 2 2 2\n"
    "context 0 2\n"
    "context 0 3\n"
    "context 1 2\n"
    "context 1 3\n"
    "table 0.5 0 0 0.5\n"
    "table 0.5 0 0 0.5\n"
    "table 0.5 0 0 0.5\n"
    "table 0 0.5 0.5 0\n"
    "meta name PR box\n";

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::PropertyViolation;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("parse a PR box") {
  const BoxDocument doc = parse_box_document(std::string(kPr));
  CHECK(doc.outcome_counts == std::vector<int>{2, 2, 2, 2});
  REQUIRE(doc.metadata.size() == 1);
  CHECK(doc.metadata[0].first == "name");
  CHECK(doc.metadata[0].second == "PR box");
  CHECK(to_box(doc).max_abs_diff(make_pr_box()) == 0.0);
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(23);
  for (auto s : {make_n_cycle(5), make_bipartite_bell(2, 3, 3, 2), make_xor_chain(3, 3)}) {
    for (int i = 0; i < 10; ++i) {
      const Box b = i % 2 ? random_noncontextual_box(s, rng) : mix2(random_noncontextual_box(s, rng), uniform_box(s), 0.3);
      const std::string text = write_box_document(to_document(b, {{"seed", "23"}}));
      const BoxDocument back = parse_box_document(text);
      CHECK(to_box(back).max_abs_diff(b) <= 1e-12);
      CHECK(write_box_document(back) == text);
      CHECK(back.metadata == std::vector<std::pair<std::string, std::string>>{{"seed", "23"}});
    }
  }
}

TEST_CASE("parse errors") {
  const std::string pr = kPr;
  CHECK(kind_of([&] { parse_box_document(std::string("")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "format_version 1", "format_version 2")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "first-member-major", "last-member-major")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "table 0 0.5 0.5 0", "table 0 0.5 0.5")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "table 0 0.5 0.5 0\n", "")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "table 0 0.5", "table inf 0.5")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "table 0 0.5", "table nan 0.5")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "table 0 0.5", "table 0x0 0.5")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "context 1 3", "context 1 7")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "meta name", "colour name")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { parse_box_document(replace(pr, "format_version 1\n", "")); }) == ErrorKind::Parse);
  // Structurally fine but an observable is left uncovered.
  CHECK(kind_of([&] { to_box(parse_box_document(replace(pr, "observables 2 2 2 2", "observables 2 2 2 2 2"))); }) ==
        ErrorKind::Parse);
}

TEST_CASE("normalization is enforced unless renormalizing") {
  const std::string bad = replace(kPr, "table 0 0.5 0.5 0", "table 0 1 1 0");
  const BoxDocument doc = parse_box_document(bad);
  CHECK(kind_of([&] { to_box(doc); }) == ErrorKind::InvalidBox);
  CHECK(to_box(doc, true).max_abs_diff(make_pr_box()) == 0.0);
}

TEST_CASE("scenario specs") {
  CHECK(*parse_scenario_spec("cycle:5") == *make_n_cycle(5));
  CHECK(*parse_scenario_spec("bell:2,2,2,2") == *make_bipartite_bell(2, 2, 2, 2));
  CHECK(*parse_scenario_spec("chain:4,3") == *make_xor_chain(4, 3));
  for (const char* bad : {"cycle", "cycle:2", "cycle:x", "bell:2,2", "torus:3", "chain:4"}) {
    CHECK(kind_of([&] { parse_scenario_spec(bad); }) == ErrorKind::Parse);
  }
}
