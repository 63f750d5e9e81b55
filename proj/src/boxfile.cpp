#include "ctx/boxfile.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ctx {

namespace {

[[noreturn]] void parse_error(int line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_error(line, "expected integer, got '" + tok + "'");
  return v;
}

// Plain decimal notation only: no inf/nan/hex.
double parse_probability(const std::string& tok, int line) {
  for (char ch : tok) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == 'e' || ch == 'E' ||
          ch == '-' || ch == '+')) {
      parse_error(line, "not a decimal number: '" + tok + "'");
    }
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    parse_error(line, "not a finite decimal: '" + tok + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BoxDocument parse_box_document(std::istream& in) {
  BoxDocument doc;
  bool have_version = false, have_observables = false;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tokens = split(line);
    const std::string& key = tokens[0];

    if (!have_version && key != "format_version") parse_error(line_no, "file must start with format_version");
    if (key == "format_version") {
      if (have_version || tokens.size() != 2) parse_error(line_no, "malformed format_version");
      doc.format_version = parse_int(tokens[1], line_no);
      if (doc.format_version != kBoxFormatVersion) {
        parse_error(line_no, "unsupported format_version " + tokens[1]);
      }
      have_version = true;
    } else if (key == "ordering") {
      const std::string rest = line.substr(line.find("ordering") + 8);
      const auto a = rest.find_first_not_of(" \t");
      const auto b = rest.find_last_not_of(" \t");
      if (a == std::string::npos || rest.substr(a, b - a + 1) != kBoxOrdering) {
        parse_error(line_no, std::string("ordering must be '") + kBoxOrdering + "'");
      }
    } else if (key == "observables") {
      if (have_observables) parse_error(line_no, "duplicate observables line");
      for (std::size_t i = 1; i < tokens.size(); ++i) doc.outcome_counts.push_back(parse_int(tokens[i], line_no));
      if (doc.outcome_counts.empty()) parse_error(line_no, "no observables declared");
      have_observables = true;
    } else if (key == "context") {
      if (!doc.tables.empty()) parse_error(line_no, "context lines must precede table lines");
      Context c;
      for (std::size_t i = 1; i < tokens.size(); ++i) c.members.push_back(parse_int(tokens[i], line_no));
      doc.contexts.push_back(std::move(c));
    } else if (key == "table") {
      Table t;
      for (std::size_t i = 1; i < tokens.size(); ++i) t.push_back(parse_probability(tokens[i], line_no));
      doc.tables.push_back(std::move(t));
    } else if (key == "meta") {
      if (tokens.size() < 2) parse_error(line_no, "meta needs a key");
      std::string value;
      const auto pos = line.find(tokens[1], line.find("meta") + 4) + tokens[1].size();
      const auto vstart = line.find_first_not_of(" \t", pos);
      if (vstart != std::string::npos) value = line.substr(vstart);
      doc.metadata.emplace_back(tokens[1], value);
    } else {
      parse_error(line_no, "unknown keyword '" + key + "'");
    }
  }
  if (!have_version) parse_error(line_no, "empty document");
  if (!have_observables) parse_error(line_no, "missing observables line");
  if (doc.contexts.empty()) parse_error(line_no, "no contexts declared");
  if (doc.tables.size() != doc.contexts.size()) {
    parse_error(line_no, std::to_string(doc.contexts.size()) + " contexts but " +
                             std::to_string(doc.tables.size()) + " tables");
  }
  for (std::size_t c = 0; c < doc.contexts.size(); ++c) {
    std::size_t size = 1;
    for (int m : doc.contexts[c].members) {
      if (m < 0 || m >= static_cast<int>(doc.outcome_counts.size())) {
        parse_error(line_no, "context " + std::to_string(c) + " names unknown observable");
      }
      size *= static_cast<std::size_t>(std::max(doc.outcome_counts[m], 1));
    }
    if (doc.tables[c].size() != size) {
      parse_error(line_no, "table " + std::to_string(c) + " has " + std::to_string(doc.tables[c].size()) +
                               " entries, context needs " + std::to_string(size));
    }
  }
  return doc;
}

BoxDocument parse_box_document(const std::string& text) {
  std::istringstream in(text);
  return parse_box_document(in);
}

BoxDocument read_box_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return parse_box_document(in);
}

std::string write_box_document(const BoxDocument& doc) {
  std::ostringstream out;
  out << "format_version " << doc.format_version << "\n";
  out << "ordering " << kBoxOrdering << "\n";
  out << "observables";
  for (int m : doc.outcome_counts) out << ' ' << m;
  out << "\n";
  for (const auto& c : doc.contexts) {
    out << "context";
    for (int m : c.members) out << ' ' << m;
    out << "\n";
  }
  for (const auto& t : doc.tables) {
    out << "table";
    for (double v : t) out << ' ' << format_double(v);
    out << "\n";
  }
  for (const auto& [k, v] : doc.metadata) out << "meta " << k << (v.empty() ? "" : " ") << v << "\n";
  return out.str();
}

void write_box_file(const std::string& path, const BoxDocument& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << write_box_document(doc);
}

BoxDocument to_document(const Box& b, std::vector<std::pair<std::string, std::string>> metadata) {
  BoxDocument doc;
  doc.outcome_counts = b.scenario().outcome_counts();
  doc.contexts = b.scenario().contexts();
  doc.tables = b.tables();
  doc.metadata = std::move(metadata);
  return doc;
}

Box to_box(const BoxDocument& doc, bool renormalize) {
  ScenarioPtr s;
  try {
    s = std::make_shared<const Scenario>(doc.outcome_counts, doc.contexts);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid scenario: ") + e.what());
  }
  if (renormalize) return renormalized_box(std::move(s), doc.tables);
  return Box(std::move(s), doc.tables);
}

ScenarioPtr parse_scenario_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::Parse, "scenario spec needs kind:params, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<int> params;
  std::stringstream in(spec.substr(colon + 1));
  for (std::string tok; std::getline(in, tok, ',');) params.push_back(parse_int(tok, 0));
  try {
    if (kind == "cycle" && params.size() == 1) return make_n_cycle(params[0]);
    if (kind == "bell" && params.size() == 4) return make_bipartite_bell(params[0], params[1], params[2], params[3]);
    if (kind == "chain" && params.size() == 2) return make_xor_chain(params[0], params[1]);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("invalid scenario spec: ") + e.what());
  }
  throw Error(ErrorKind::Parse, "unknown scenario spec '" + spec + "'");
}

}  // namespace ctx
