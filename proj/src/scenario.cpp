#include "ctx/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace ctx {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidScenario: return "invalid-scenario";
    case ErrorKind::ScenarioTooLarge: return "scenario-too-large";
    case ErrorKind::InvalidBox: return "invalid-box";
    case ErrorKind::IncompatibleBox: return "incompatible-box";
    case ErrorKind::InconsistentBox: return "inconsistent-box";
    case ErrorKind::NotRepresentable: return "not-representable";
    case ErrorKind::BadPermutation: return "bad-permutation";
    case ErrorKind::UnsupportedScenario: return "unsupported-scenario";
    case ErrorKind::UndefinedBound: return "undefined-bound";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::PropertyViolation: return "property-violation";
  }
  return "unknown";
}

Scenario::Scenario(std::vector<int> outcome_counts, std::vector<Context> contexts)
    : outcome_counts_(std::move(outcome_counts)), contexts_(std::move(contexts)) {
  if (outcome_counts_.empty()) {
    throw Error(ErrorKind::InvalidScenario, "scenario has no observables");
  }
  if (contexts_.empty()) {
    throw Error(ErrorKind::InvalidScenario, "scenario has no contexts");
  }
  const int k = static_cast<int>(outcome_counts_.size());
  for (int i = 0; i < k; ++i) {
    if (outcome_counts_[i] < 2) {
      throw Error(ErrorKind::InvalidScenario,
                  "observable " + std::to_string(i) + " has fewer than 2 outcomes");
    }
  }

  std::vector<bool> covered(k, false);
  std::set<std::vector<int>> seen;
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    const auto& members = contexts_[c].members;
    if (members.empty()) {
      throw Error(ErrorKind::InvalidScenario, "context " + std::to_string(c) + " is empty");
    }
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::InvalidScenario,
                  "context " + std::to_string(c) + " repeats an observable");
    }
    for (int m : members) {
      if (m < 0 || m >= k) {
        throw Error(ErrorKind::InvalidScenario,
                    "context " + std::to_string(c) + " names unknown observable " +
                        std::to_string(m));
      }
      covered[m] = true;
    }
    if (!seen.insert(sorted).second) {
      throw Error(ErrorKind::InvalidScenario,
                  "context " + std::to_string(c) + " duplicates an earlier context");
    }
  }
  for (int i = 0; i < k; ++i) {
    if (!covered[i]) {
      throw Error(ErrorKind::InvalidScenario,
                  "observable " + std::to_string(i) + " belongs to no context");
    }
  }

  strides_.assign(k, 1);
  assignment_count_ = 1;
  for (int i = k - 1; i >= 0; --i) {
    strides_[i] = assignment_count_;
    assignment_count_ *= static_cast<std::uint64_t>(outcome_counts_[i]);
    if (assignment_count_ > kMaxAssignments) {
      throw Error(ErrorKind::ScenarioTooLarge,
                  "scenario exceeds the cap of 2^22 global assignments");
    }
  }

  for (const auto& ctxt : contexts_) {
    const auto& members = ctxt.members;
    std::vector<std::size_t> strides(members.size());
    std::size_t size = 1;
    for (std::size_t j = members.size(); j-- > 0;) {
      strides[j] = size;
      size *= static_cast<std::size_t>(outcome_counts_[members[j]]);
    }
    member_strides_.push_back(std::move(strides));
    table_sizes_.push_back(size);
  }
}

std::vector<Observable> Scenario::observables() const {
  std::vector<Observable> out;
  out.reserve(outcome_counts_.size());
  for (std::size_t i = 0; i < outcome_counts_.size(); ++i) {
    out.push_back({static_cast<int>(i), outcome_counts_[i]});
  }
  return out;
}

std::size_t Scenario::total_table_entries() const {
  return std::accumulate(table_sizes_.begin(), table_sizes_.end(), std::size_t{0});
}

bool Scenario::all_binary() const {
  return std::all_of(outcome_counts_.begin(), outcome_counts_.end(),
                     [](int m) { return m == 2; });
}

bool Scenario::contains(std::size_t c, int obs) const { return position_in_context(c, obs) >= 0; }

int Scenario::position_in_context(std::size_t c, int obs) const {
  const auto& members = contexts_.at(c).members;
  auto it = std::find(members.begin(), members.end(), obs);
  return it == members.end() ? -1 : static_cast<int>(it - members.begin());
}

GlobalAssignment Scenario::decode(std::uint64_t index) const {
  GlobalAssignment a;
  a.values.resize(outcome_counts_.size());
  for (std::size_t i = 0; i < outcome_counts_.size(); ++i) {
    a.values[i] = digit(index, static_cast<int>(i));
  }
  return a;
}

std::uint64_t Scenario::encode(const GlobalAssignment& a) const {
  if (a.values.size() != outcome_counts_.size()) {
    throw Error(ErrorKind::InvalidScenario, "assignment is not total");
  }
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < outcome_counts_.size(); ++i) {
    if (a.values[i] < 0 || a.values[i] >= outcome_counts_[i]) {
      throw Error(ErrorKind::InvalidScenario, "assignment value out of range");
    }
    index += static_cast<std::uint64_t>(a.values[i]) * strides_[i];
  }
  return index;
}

std::size_t Scenario::context_index(std::uint64_t index, std::size_t c) const {
  const auto& members = contexts_[c].members;
  const auto& strides = member_strides_[c];
  std::size_t row = 0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    row += static_cast<std::size_t>(digit(index, members[j])) * strides[j];
  }
  return row;
}

std::vector<int> Scenario::context_tuple(std::size_t c, std::size_t row) const {
  const auto& members = contexts_.at(c).members;
  std::vector<int> tuple(members.size());
  for (std::size_t j = members.size(); j-- > 0;) {
    const auto m = static_cast<std::size_t>(outcome_counts_[members[j]]);
    tuple[j] = static_cast<int>(row % m);
    row /= m;
  }
  return tuple;
}

std::size_t Scenario::context_row(std::size_t c, std::span<const int> tuple) const {
  const auto& strides = member_strides_.at(c);
  std::size_t row = 0;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    row += static_cast<std::size_t>(tuple[j]) * strides[j];
  }
  return row;
}

AssignmentRange Scenario::global_assignments() const { return AssignmentRange(this); }

bool Scenario::operator==(const Scenario& other) const {
  if (outcome_counts_ != other.outcome_counts_ || contexts_.size() != other.contexts_.size()) {
    return false;
  }
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    if (contexts_[c].members != other.contexts_[c].members) return false;
  }
  return true;
}

AssignmentRange::iterator::iterator(const Scenario* s, std::uint64_t index)
    : scenario_(s), index_(index) {
  if (index_ < s->assignment_count()) current_ = s->decode(index_);
}

AssignmentRange::iterator& AssignmentRange::iterator::operator++() {
  ++index_;
  if (index_ >= scenario_->assignment_count()) return *this;
  // Mixed-radix increment, last observable fastest.
  auto& v = current_.values;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (++v[i] < scenario_->outcome_count(static_cast<int>(i))) break;
    v[i] = 0;
  }
  return *this;
}

ScenarioPtr make_n_cycle(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidScenario, "n-cycle needs n >= 3");
  std::vector<Context> contexts;
  for (int i = 0; i < n; ++i) contexts.push_back({{i, (i + 1) % n}});
  return std::make_shared<const Scenario>(std::vector<int>(n, 2), std::move(contexts));
}

ScenarioPtr make_bipartite_bell(int nx, int ny, int na, int nb) {
  if (nx < 1 || ny < 1) {
    throw Error(ErrorKind::InvalidScenario, "Bell scenario needs at least one input per party");
  }
  if (na < 2 || nb < 2) {
    throw Error(ErrorKind::InvalidScenario, "Bell scenario needs at least two outcomes per input");
  }
  std::vector<int> counts(nx, na);
  counts.insert(counts.end(), ny, nb);
  std::vector<Context> contexts;
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) contexts.push_back({{x, nx + y}});
  }
  return std::make_shared<const Scenario>(std::move(counts), std::move(contexts));
}

ScenarioPtr make_single_context(std::vector<int> outcome_counts) {
  std::vector<int> members(outcome_counts.size());
  std::iota(members.begin(), members.end(), 0);
  return std::make_shared<const Scenario>(std::move(outcome_counts),
                                          std::vector<Context>{{members}});
}

ScenarioPtr make_xor_chain(int n, int m) {
  if (n < 3) throw Error(ErrorKind::InvalidScenario, "XOR chain needs n >= 3 contexts");
  if (m < 2) throw Error(ErrorKind::InvalidScenario, "XOR chain needs contexts of size >= 2");
  if (m == 2) return make_n_cycle(n);
  // Context i owns observables i*(m-1) .. i*(m-1)+m-1, the last one shared
  // with context i+1.
  const int k = n * (m - 1);
  std::vector<Context> contexts;
  for (int i = 0; i < n; ++i) {
    Context c;
    for (int j = 0; j < m; ++j) c.members.push_back((i * (m - 1) + j) % k);
    contexts.push_back(std::move(c));
  }
  return std::make_shared<const Scenario>(std::vector<int>(k, 2), std::move(contexts));
}

ScenarioPtr direct_sum(const Scenario& s1, const Scenario& s2) {
  std::vector<int> counts = s1.outcome_counts();
  counts.insert(counts.end(), s2.outcome_counts().begin(), s2.outcome_counts().end());
  const int shift = static_cast<int>(s1.observable_count());
  std::vector<Context> contexts = s1.contexts();
  for (const auto& c : s2.contexts()) {
    Context shifted;
    for (int m : c.members) shifted.members.push_back(m + shift);
    contexts.push_back(std::move(shifted));
  }
  return std::make_shared<const Scenario>(std::move(counts), std::move(contexts));
}

bool is_cycle_scenario(const Scenario& s, int* n_out) {
  const int n = static_cast<int>(s.observable_count());
  if (n < 3 || static_cast<int>(s.context_count()) != n || !s.all_binary()) return false;
  std::vector<std::vector<int>> adj(n);
  for (const auto& c : s.contexts()) {
    if (c.members.size() != 2) return false;
    adj[c.members[0]].push_back(c.members[1]);
    adj[c.members[1]].push_back(c.members[0]);
  }
  for (const auto& a : adj) {
    if (a.size() != 2) return false;
  }
  // Walk the ring from 0 and require it to visit every vertex.
  int prev = -1, cur = 0, steps = 0;
  do {
    int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
    ++steps;
  } while (cur != 0 && steps <= n);
  if (steps != n) return false;
  if (n_out) *n_out = n;
  return true;
}

}  // namespace ctx
