#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ctx/box.hpp"

namespace ctx {

/// Text box file.
///
///     format_version 1
///     ordering mixed-radix first-member-major
///     observables 2 2 2 2
///     context 0 2
///     ...
///     table 0.5 0 0 0.5
///     ...
///     meta key free text
///
/// One `context` line per context and one `table` line per context, in the
/// same order. Table rows enumerate the context's joint outcomes in mixed
/// radix with the first listed member most significant. `#` starts a
/// comment line.
struct BoxDocument {
  int format_version = 1;
  std::vector<int> outcome_counts;
  std::vector<Context> contexts;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, std::string>> metadata;
};

inline constexpr int kBoxFormatVersion = 1;
inline constexpr const char* kBoxOrdering = "mixed-radix first-member-major";

BoxDocument parse_box_document(std::istream& in);
BoxDocument parse_box_document(const std::string& text);
BoxDocument read_box_file(const std::string& path);
std::string write_box_document(const BoxDocument& doc);
void write_box_file(const std::string& path, const BoxDocument& doc);

BoxDocument to_document(const Box& b, std::vector<std::pair<std::string, std::string>> metadata = {});
/// Builds the scenario and box; `renormalize` rescales each table first.
Box to_box(const BoxDocument& doc, bool renormalize = false);

/// "cycle:N", "bell:NX,NY,NA,NB" or "chain:N,M".
ScenarioPtr parse_scenario_spec(const std::string& spec);

}  // namespace ctx
