#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <memory>
#include <span>
#include <vector>

#include "ctx/errors.hpp"

namespace ctx {

/// Largest number of global assignments a scenario may have (2^22).
inline constexpr std::uint64_t kMaxAssignments = std::uint64_t{1} << 22;

struct Observable {
  int id = 0;
  int outcome_count = 2;
};

/// Members are ordered; outcome tuples of the context are indexed in
/// mixed radix with the first member most significant.
struct Context {
  std::vector<int> members;
};

/// A total assignment of outcomes to every observable of a scenario.
struct GlobalAssignment {
  std::vector<int> values;

  bool operator==(const GlobalAssignment&) const = default;
};

class AssignmentRange;

/// Hypergraph of observables and measurement contexts.
///
/// Immutable after construction. Global assignments are enumerated in
/// mixed-radix lexicographic order with observable 0 most significant.
class Scenario {
 public:
  Scenario(std::vector<int> outcome_counts, std::vector<Context> contexts);

  std::size_t observable_count() const { return outcome_counts_.size(); }
  std::size_t context_count() const { return contexts_.size(); }
  int outcome_count(int obs) const { return outcome_counts_.at(obs); }
  const std::vector<int>& outcome_counts() const { return outcome_counts_; }
  std::vector<Observable> observables() const;

  const Context& context(std::size_t c) const { return contexts_.at(c); }
  const std::vector<Context>& contexts() const { return contexts_; }

  /// Number of joint outcomes of context `c`.
  std::size_t table_size(std::size_t c) const { return table_sizes_[c]; }
  std::size_t total_table_entries() const;

  std::uint64_t assignment_count() const { return assignment_count_; }
  bool all_binary() const;
  bool contains(std::size_t c, int obs) const;
  /// Position of `obs` inside context `c`, or -1.
  int position_in_context(std::size_t c, int obs) const;

  GlobalAssignment decode(std::uint64_t index) const;
  std::uint64_t encode(const GlobalAssignment& a) const;
  /// Digit of observable `obs` in assignment `index`.
  int digit(std::uint64_t index, int obs) const {
    return static_cast<int>((index / strides_[obs]) % outcome_counts_[obs]);
  }
  /// Row of context `c`'s table that assignment `index` restricts to.
  std::size_t context_index(std::uint64_t index, std::size_t c) const;
  /// Decode a context-table row into per-member outcomes.
  std::vector<int> context_tuple(std::size_t c, std::size_t row) const;
  std::size_t context_row(std::size_t c, std::span<const int> tuple) const;

  AssignmentRange global_assignments() const;

  bool operator==(const Scenario& other) const;

 private:
  std::vector<int> outcome_counts_;
  std::vector<Context> contexts_;
  std::vector<std::uint64_t> strides_;
  std::vector<std::vector<std::size_t>> member_strides_;
  std::vector<std::size_t> table_sizes_;
  std::uint64_t assignment_count_ = 1;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

/// Lazy, ordered view over all global assignments of a scenario.
class AssignmentRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = GlobalAssignment;
    using difference_type = std::ptrdiff_t;
    using pointer = const GlobalAssignment*;
    using reference = const GlobalAssignment&;

    iterator() = default;
    iterator(const Scenario* s, std::uint64_t index);

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

    std::uint64_t index() const { return index_; }

   private:
    const Scenario* scenario_ = nullptr;
    std::uint64_t index_ = 0;
    GlobalAssignment current_;
  };

  explicit AssignmentRange(const Scenario* s) : scenario_(s) {}
  iterator begin() const { return {scenario_, 0}; }
  iterator end() const { return {scenario_, scenario_->assignment_count()}; }
  std::uint64_t size() const { return scenario_->assignment_count(); }

 private:
  const Scenario* scenario_;
};

ScenarioPtr make_n_cycle(int n);
ScenarioPtr make_bipartite_bell(int nx, int ny, int na, int nb);
/// One context over `outcome_counts.size()` observables.
ScenarioPtr make_single_context(std::vector<int> outcome_counts);
/// n binary contexts of size m arranged in a ring where consecutive contexts
/// share exactly one observable; for m = 2 this is the n-cycle.
ScenarioPtr make_xor_chain(int n, int m);
ScenarioPtr direct_sum(const Scenario& s1, const Scenario& s2);

/// True when the scenario is a single ring of binary observables with
/// two-element contexts (n-cycle up to relabeling). Sets `n` on success.
bool is_cycle_scenario(const Scenario& s, int* n = nullptr);

}  // namespace ctx
