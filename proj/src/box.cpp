#include "ctx/box.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctx/kernels.hpp"

namespace ctx {

namespace {

void require_same_scenario(const Box& a, const Box& b, const char* op) {
  if (a.scenario_ptr() != b.scenario_ptr() && !(a.scenario() == b.scenario())) {
    throw Error(ErrorKind::IncompatibleBox, std::string(op) + ": boxes live on different scenarios");
  }
}

void check_distribution(std::span<const double> p, const std::string& what) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidBox, what + " has a non-finite entry");
    if (v < 0.0) throw Error(ErrorKind::InvalidBox, what + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw Error(ErrorKind::InvalidBox, what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

// Marginal of context c's table on the observables `overlap` (in that order).
std::vector<double> overlap_marginal(const Box& b, std::size_t c, const std::vector<int>& overlap) {
  const Scenario& s = b.scenario();
  std::size_t size = 1;
  for (int o : overlap) size *= static_cast<std::size_t>(s.outcome_count(o));
  std::vector<int> pos;
  for (int o : overlap) pos.push_back(s.position_in_context(c, o));
  std::vector<double> out(size, 0.0);
  const Table& t = b.table(c);
  for (std::size_t row = 0; row < t.size(); ++row) {
    const auto tuple = s.context_tuple(c, row);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < overlap.size(); ++j) {
      idx = idx * static_cast<std::size_t>(s.outcome_count(overlap[j])) +
            static_cast<std::size_t>(tuple[pos[j]]);
    }
    out[idx] += t[row];
  }
  return out;
}

}  // namespace

Box::Box(ScenarioPtr scenario, std::vector<Table> tables)
    : scenario_(std::move(scenario)), tables_(std::move(tables)) {
  if (!scenario_) throw Error(ErrorKind::InvalidBox, "box without scenario");
  if (tables_.size() != scenario_->context_count()) {
    throw Error(ErrorKind::InvalidBox, "box has " + std::to_string(tables_.size()) +
                                           " tables for " +
                                           std::to_string(scenario_->context_count()) + " contexts");
  }
  for (std::size_t c = 0; c < tables_.size(); ++c) {
    if (tables_[c].size() != scenario_->table_size(c)) {
      throw Error(ErrorKind::InvalidBox, "table " + std::to_string(c) + " has wrong size");
    }
    check_distribution(tables_[c], "table " + std::to_string(c));
  }
}

double Box::max_abs_diff(const Box& other) const {
  if (!(scenario() == other.scenario())) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t c = 0; c < tables_.size(); ++c) {
    for (std::size_t r = 0; r < tables_[c].size(); ++r) {
      d = std::max(d, std::abs(tables_[c][r] - other.tables_[c][r]));
    }
  }
  return d;
}

Box renormalized_box(ScenarioPtr scenario, std::vector<Table> tables) {
  for (auto& t : tables) {
    double sum = 0.0;
    for (double& v : t) {
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (!(sum > 0.0)) throw Error(ErrorKind::InvalidBox, "cannot renormalize an all-zero table");
    for (double& v : t) v /= sum;
  }
  return Box(std::move(scenario), std::move(tables));
}

GlobalDistribution::GlobalDistribution(ScenarioPtr scenario, std::vector<double> weights)
    : scenario_(std::move(scenario)), weights_(std::move(weights)) {
  if (weights_.size() != scenario_->assignment_count()) {
    throw Error(ErrorKind::InvalidBox, "global distribution has wrong length");
  }
  check_distribution(weights_, "global distribution");
}

GlobalDistribution GlobalDistribution::uniform(ScenarioPtr scenario) {
  const auto n = scenario->assignment_count();
  return GlobalDistribution(scenario, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GlobalDistribution GlobalDistribution::point_mass(ScenarioPtr scenario, std::uint64_t index) {
  std::vector<double> w(scenario->assignment_count(), 0.0);
  w.at(index) = 1.0;
  return GlobalDistribution(std::move(scenario), std::move(w));
}

std::vector<double> ReadoutOperation::apply(const Box& b) const {
  std::vector<double> out(outputs, 0.0);
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const Table& p = b.table(c);
    const auto& m = matrices[c];
    for (std::size_t o = 0; o < outputs; ++o) {
      double acc = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) acc += m[o * p.size() + j] * p[j];
      out[o] += weights[c] * acc;
    }
  }
  return out;
}

ConsistencyReport check_consistency(const Box& b, double tol) {
  ConsistencyReport report;
  const Scenario& s = b.scenario();
  for (std::size_t i = 0; i < s.context_count(); ++i) {
    for (std::size_t j = i + 1; j < s.context_count(); ++j) {
      std::vector<int> overlap;
      for (int o : s.context(i).members) {
        if (s.contains(j, o)) overlap.push_back(o);
      }
      if (overlap.empty()) continue;
      std::sort(overlap.begin(), overlap.end());
      const auto mi = overlap_marginal(b, i, overlap);
      const auto mj = overlap_marginal(b, j, overlap);
      double dev = 0.0;
      for (std::size_t k = 0; k < mi.size(); ++k) dev = std::max(dev, std::abs(mi[k] - mj[k]));
      if (dev > tol) {
        report.consistent = false;
        report.violations.push_back({i, j, overlap, dev});
      }
    }
  }
  return report;
}

void require_consistent(const Box& b) {
  const auto report = check_consistency(b);
  if (!report.consistent) {
    const auto& v = report.violations.front();
    throw Error(ErrorKind::InconsistentBox,
                "contexts " + std::to_string(v.context_a) + " and " + std::to_string(v.context_b) +
                    " disagree on their overlap by " + std::to_string(v.max_deviation));
  }
}

Box from_global_distribution(const GlobalDistribution& q) {
  return Box(q.scenario_ptr(), kernels::parallel::marginals(q.scenario(), q.weights()));
}

Box deterministic_box(ScenarioPtr s, const GlobalAssignment& a) {
  const std::uint64_t index = s->encode(a);
  std::vector<Table> tables;
  for (std::size_t c = 0; c < s->context_count(); ++c) {
    Table t(s->table_size(c), 0.0);
    t[s->context_index(index, c)] = 1.0;
    tables.push_back(std::move(t));
  }
  return Box(std::move(s), std::move(tables));
}

Box uniform_box(ScenarioPtr s) {
  std::vector<Table> tables;
  for (std::size_t c = 0; c < s->context_count(); ++c) {
    const auto n = s->table_size(c);
    tables.emplace_back(n, 1.0 / static_cast<double>(n));
  }
  return Box(std::move(s), std::move(tables));
}

Box mix(std::span<const Box> boxes, std::span<const double> weights) {
  if (boxes.empty() || boxes.size() != weights.size()) {
    throw Error(ErrorKind::IncompatibleBox, "mix: need one weight per box");
  }
  check_distribution(weights, "mixing weights");
  std::vector<Table> tables = boxes[0].tables();
  for (auto& t : tables) std::fill(t.begin(), t.end(), 0.0);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    require_same_scenario(boxes[0], boxes[i], "mix");
    for (std::size_t c = 0; c < tables.size(); ++c) {
      for (std::size_t r = 0; r < tables[c].size(); ++r) tables[c][r] += weights[i] * boxes[i].at(c, r);
    }
  }
  return Box(boxes[0].scenario_ptr(), std::move(tables));
}

Box mix2(const Box& a, const Box& b, double weight_a) {
  const Box boxes[] = {a, b};
  const double w[] = {weight_a, 1.0 - weight_a};
  return mix(boxes, w);
}

Box tensor(const Box& b1, const Box& b2) {
  const Scenario& s1 = b1.scenario();
  const Scenario& s2 = b2.scenario();
  std::vector<int> counts = s1.outcome_counts();
  counts.insert(counts.end(), s2.outcome_counts().begin(), s2.outcome_counts().end());
  const int shift = static_cast<int>(s1.observable_count());
  std::vector<Context> contexts;
  std::vector<Table> tables;
  for (std::size_t c1 = 0; c1 < s1.context_count(); ++c1) {
    for (std::size_t c2 = 0; c2 < s2.context_count(); ++c2) {
      Context c = s1.context(c1);
      for (int m : s2.context(c2).members) c.members.push_back(m + shift);
      contexts.push_back(std::move(c));
      const Table& p = b1.table(c1);
      const Table& q = b2.table(c2);
      Table t(p.size() * q.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) t[i * q.size() + j] = p[i] * q[j];
      }
      tables.push_back(std::move(t));
    }
  }
  auto s = std::make_shared<const Scenario>(std::move(counts), std::move(contexts));
  return Box(std::move(s), std::move(tables));
}

Box tensor_matched(const Box& b1, const Box& b2) {
  require_same_scenario(b1, b2, "tensor_matched");
  const Scenario& s1 = b1.scenario();
  std::vector<int> counts = s1.outcome_counts();
  counts.insert(counts.end(), s1.outcome_counts().begin(), s1.outcome_counts().end());
  const int shift = static_cast<int>(s1.observable_count());
  std::vector<Context> contexts;
  std::vector<Table> tables;
  for (std::size_t c = 0; c < s1.context_count(); ++c) {
    Context ctxt = s1.context(c);
    for (int m : s1.context(c).members) ctxt.members.push_back(m + shift);
    contexts.push_back(std::move(ctxt));
    const Table& p = b1.table(c);
    const Table& q = b2.table(c);
    Table t(p.size() * q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) t[i * q.size() + j] = p[i] * q[j];
    }
    tables.push_back(std::move(t));
  }
  auto s = std::make_shared<const Scenario>(std::move(counts), std::move(contexts));
  return Box(std::move(s), std::move(tables));
}

Box direct_sum_box(const Box& b1, const Box& b2) {
  auto s = direct_sum(b1.scenario(), b2.scenario());
  std::vector<Table> tables = b1.tables();
  tables.insert(tables.end(), b2.tables().begin(), b2.tables().end());
  return Box(std::move(s), std::move(tables));
}

double trace_distance(const Box& b1, const Box& b2) {
  require_same_scenario(b1, b2, "trace_distance");
  double worst = 0.0;
  for (std::size_t c = 0; c < b1.tables().size(); ++c) {
    double d = 0.0;
    for (std::size_t r = 0; r < b1.table(c).size(); ++r) d += std::abs(b1.at(c, r) - b2.at(c, r));
    worst = std::max(worst, d);
  }
  return worst;
}

ReadoutOperation random_readout(const Scenario& s, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  ReadoutOperation op;
  std::size_t outputs = 0;
  for (std::size_t c = 0; c < s.context_count(); ++c) outputs = std::max(outputs, s.table_size(c));
  op.outputs = outputs;

  op.weights.resize(s.context_count());
  double sum = 0.0;
  for (double& w : op.weights) sum += (w = expo(rng));
  for (double& w : op.weights) w /= sum;

  std::uniform_int_distribution<int> coin(0, 2);
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const std::size_t cols = s.table_size(c);
    std::vector<double> m(outputs * cols, 0.0);
    // Mix of Dirichlet columns and deterministic columns so that sharp
    // readouts close to the supremum are sampled too.
    const bool deterministic = coin(rng) == 0;
    std::uniform_int_distribution<std::size_t> pick(0, outputs - 1);
    for (std::size_t j = 0; j < cols; ++j) {
      if (deterministic) {
        m[pick(rng) * cols + j] = 1.0;
        continue;
      }
      double colsum = 0.0;
      for (std::size_t o = 0; o < outputs; ++o) colsum += (m[o * cols + j] = expo(rng));
      for (std::size_t o = 0; o < outputs; ++o) m[o * cols + j] /= colsum;
    }
    op.matrices.push_back(std::move(m));
  }
  return op;
}

Box relabel_outputs(const Box& b, int obs, std::span<const int> perm) {
  const Scenario& s = b.scenario();
  if (obs < 0 || obs >= static_cast<int>(s.observable_count())) {
    throw Error(ErrorKind::BadPermutation, "relabel_outputs: unknown observable");
  }
  const int m = s.outcome_count(obs);
  std::vector<int> sorted(perm.begin(), perm.end());
  std::sort(sorted.begin(), sorted.end());
  if (static_cast<int>(perm.size()) != m) {
    throw Error(ErrorKind::BadPermutation, "relabel_outputs: permutation has wrong length");
  }
  for (int k = 0; k < m; ++k) {
    if (sorted[k] != k) throw Error(ErrorKind::BadPermutation, "relabel_outputs: not a bijection");
  }
  std::vector<Table> tables = b.tables();
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const int pos = s.position_in_context(c, obs);
    if (pos < 0) continue;
    Table t(tables[c].size(), 0.0);
    for (std::size_t row = 0; row < t.size(); ++row) {
      auto tuple = s.context_tuple(c, row);
      tuple[pos] = perm[tuple[pos]];
      t[s.context_row(c, tuple)] = b.at(c, row);
    }
    tables[c] = std::move(t);
  }
  return Box(b.scenario_ptr(), std::move(tables));
}

Box bit_flip(const Box& b, int obs) {
  const int perm[] = {1, 0};
  return relabel_outputs(b, obs, perm);
}

Box correlator_to_box(const CorrelatorBox& cb) {
  const int n = static_cast<int>(cb.correlators.size());
  auto s = make_n_cycle(n);
  std::vector<Table> tables;
  for (int i = 0; i < n; ++i) {
    const double e = cb.correlators[i];
    if (!(std::abs(e) <= 1.0)) {
      throw Error(ErrorKind::InvalidBox, "correlator " + std::to_string(i) + " outside [-1, 1]");
    }
    // Rows (0,0),(0,1),(1,0),(1,1): products +1,-1,-1,+1.
    tables.push_back({(1 + e) / 4, (1 - e) / 4, (1 - e) / 4, (1 + e) / 4});
  }
  return Box(std::move(s), std::move(tables));
}

double context_correlator(const Box& b, std::size_t c) {
  const Scenario& s = b.scenario();
  double e = 0.0;
  for (std::size_t row = 0; row < s.table_size(c); ++row) {
    const auto tuple = s.context_tuple(c, row);
    int parity = 0;
    for (int v : tuple) parity ^= (v & 1);
    e += (parity ? -1.0 : 1.0) * b.at(c, row);
  }
  return e;
}

CorrelatorBox box_to_correlators(const Box& b) {
  const Scenario& s = b.scenario();
  const int n = static_cast<int>(s.observable_count());
  if (n < 3 || !(s == *make_n_cycle(n))) {
    throw Error(ErrorKind::NotRepresentable, "box_to_correlators needs an n-cycle scenario");
  }
  CorrelatorBox cb;
  for (int i = 0; i < n; ++i) {
    const Table& t = b.table(i);
    const double first = t[0] + t[1];   // p(m_i = 0)
    const double second = t[0] + t[2];  // p(m_{i+1} = 0)
    if (std::abs(first - 0.5) > kProbTol || std::abs(second - 0.5) > kProbTol) {
      throw Error(ErrorKind::NotRepresentable,
                  "context " + std::to_string(i) + " has non-uniform single-observable marginals");
    }
    cb.correlators.push_back(context_correlator(b, i));
  }
  return cb;
}

Box make_b_rst(int r, int s, int t) {
  auto scn = make_bipartite_bell(2, 2, 2, 2);
  std::vector<Table> tables;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const int target = (x & y) ^ (r & x) ^ (s & y) ^ (t & 1);
      Table tab(4, 0.0);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if ((a ^ b) == target) tab[a * 2 + b] = 0.5;
        }
      }
      tables.push_back(std::move(tab));
    }
  }
  return Box(std::move(scn), std::move(tables));
}

Box make_pr_box() { return make_b_rst(0, 0, 0); }

Box make_isotropic_box(double alpha) { return mix2(make_b_rst(0, 0, 0), make_b_rst(0, 0, 1), alpha); }

Box make_xor_box(ScenarioPtr s, std::span<const int> parity) {
  if (!s->all_binary()) throw Error(ErrorKind::InvalidScenario, "XOR boxes need binary observables");
  if (parity.size() != s->context_count()) {
    throw Error(ErrorKind::InvalidBox, "make_xor_box: need one parity bit per context");
  }
  std::vector<Table> tables;
  for (std::size_t c = 0; c < s->context_count(); ++c) {
    const std::size_t size = s->table_size(c);
    const double mass = 2.0 / static_cast<double>(size);
    Table t(size, 0.0);
    for (std::size_t row = 0; row < size; ++row) {
      if ((std::popcount(row) & 1) == (parity[c] & 1)) t[row] = mass;
    }
    tables.push_back(std::move(t));
  }
  return Box(std::move(s), std::move(tables));
}

Box make_extremal_xor_box(ScenarioPtr s, std::size_t odd_context) {
  std::vector<int> parity(s->context_count(), 0);
  parity.at(odd_context) = 1;
  return make_xor_box(std::move(s), parity);
}

Box make_correlated_box(ScenarioPtr s) {
  std::vector<int> parity(s->context_count(), 0);
  return make_xor_box(std::move(s), parity);
}

double box_inner_product(const Box& b1, const Box& b2) {
  require_same_scenario(b1, b2, "box_inner_product");
  double acc = 0.0;
  for (std::size_t c = 0; c < b1.tables().size(); ++c) {
    for (std::size_t r = 0; r < b1.table(c).size(); ++r) acc += b1.at(c, r) * b2.at(c, r);
  }
  return acc;
}

}  // namespace ctx
