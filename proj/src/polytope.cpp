#include "ctx/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace ctx {

VertexSet enumerate_noncontextual_vertices(const ScenarioPtr& s) {
  VertexSet vs;
  // Boxes are identified by the table row each context lands on.
  std::set<std::vector<std::size_t>> seen;
  for (auto it = s->global_assignments().begin(); it != s->global_assignments().end(); ++it) {
    std::vector<std::size_t> signature;
    for (std::size_t c = 0; c < s->context_count(); ++c) {
      signature.push_back(s->context_index(it.index(), c));
    }
    if (!seen.insert(std::move(signature)).second) continue;
    vs.deterministic.push_back(deterministic_box(s, *it));
    vs.assignment_index.push_back(it.index());
  }
  if (int n = 0; is_cycle_scenario(*s, &n) && *s == *make_n_cycle(n)) {
    vs.contextual = enumerate_cycle_contextual_vertices(n);
  }
  return vs;
}

std::vector<Box> enumerate_cycle_contextual_vertices(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidScenario, "n-cycle needs n >= 3");
  // Flipping m_j negates the two correlators touching j: <m_{j-1} m_j> and
  // <m_j m_{j+1}>.
  using Signs = std::vector<int>;
  Signs start(n, 1);
  start[0] = -1;
  std::set<Signs> seen{start};
  std::deque<Signs> queue{start};
  std::vector<Box> out;
  while (!queue.empty()) {
    Signs cur = queue.front();
    queue.pop_front();
    CorrelatorBox cb;
    cb.correlators.assign(cur.begin(), cur.end());
    out.push_back(correlator_to_box(cb));
    for (int j = 0; j < n; ++j) {
      Signs next = cur;
      next[(j + n - 1) % n] *= -1;
      next[j] *= -1;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return out;
}

namespace {

// For each deterministic vertex and context, the table row it occupies.
std::vector<std::vector<std::size_t>> vertex_rows(const Scenario& s, const VertexSet& vs) {
  std::vector<std::vector<std::size_t>> rows;
  for (std::uint64_t idx : vs.assignment_index) {
    std::vector<std::size_t> r;
    for (std::size_t c = 0; c < s.context_count(); ++c) r.push_back(s.context_index(idx, c));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::size_t> table_offsets(const Scenario& s) {
  std::vector<std::size_t> offset(s.context_count() + 1, 0);
  for (std::size_t c = 0; c < s.context_count(); ++c) offset[c + 1] = offset[c] + s.table_size(c);
  return offset;
}

}  // namespace

MembershipResult is_noncontextual(const Box& b) {
  require_consistent(b);
  const Scenario& s = b.scenario();
  const auto n = static_cast<std::size_t>(s.assignment_count());
  const auto offset = table_offsets(s);

  LinearProgram lp(n);
  std::vector<std::vector<double>> rows(offset.back(), std::vector<double>(n, 0.0));
  for (std::uint64_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < s.context_count(); ++c) rows[offset[c] + s.context_index(l, c)][l] = 1.0;
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    for (std::size_t r = 0; r < s.table_size(c); ++r) {
      lp.add_row(std::move(rows[offset[c] + r]), RowSense::Equal, b.at(c, r));
    }
  }
  lp.add_row(std::vector<double>(n, 1.0), RowSense::Equal, 1.0);

  const LpResult res = lp_solve(lp);
  MembershipResult out;
  out.infeasibility = res.infeasibility;
  if (res.status != LpStatus::Optimal) return out;

  std::vector<double> q = res.x;
  double sum = 0.0;
  for (double& v : q) sum += (v = std::max(v, 0.0));
  for (double& v : q) v /= sum;
  GlobalDistribution witness(b.scenario_ptr(), std::move(q));
  const Box implied = from_global_distribution(witness);
  if (implied.max_abs_diff(b) > kMembershipTol) return out;
  out.noncontextual = true;
  out.witness = std::move(witness);
  return out;
}

CostCertificate contextuality_cost(const Box& b) {
  return contextuality_cost(b, enumerate_noncontextual_vertices(b.scenario_ptr()));
}

CostCertificate contextuality_cost(const Box& b, const VertexSet& vs) {
  require_consistent(b);
  const Scenario& s = b.scenario();
  const auto rows_of = vertex_rows(s, vs);
  const std::size_t k = vs.deterministic.size();
  const auto offset = table_offsets(s);

  // maximize sum_i w_i  s.t.  sum_i w_i E_i <= B entrywise, w >= 0.
  LinearProgram lp(k);
  std::fill(lp.objective.begin(), lp.objective.end(), 1.0);
  std::vector<std::vector<double>> rows(offset.back(), std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < s.context_count(); ++c) rows[offset[c] + rows_of[i][c]][i] = 1.0;
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    for (std::size_t r = 0; r < s.table_size(c); ++r) {
      lp.add_row(std::move(rows[offset[c] + r]), RowSense::LessEqual, b.at(c, r));
    }
  }
  const LpResult res = lp_solve(lp);
  if (res.status != LpStatus::Optimal) {
    throw Error(ErrorKind::SolverFailure,
                std::string("cost LP ended ") + to_string(res.status) + " after " +
                    std::to_string(res.pivots) + " pivots");
  }

  CostCertificate cert;
  cert.pivots = res.pivots;
  cert.nonvaluable_weights = res.x;
  double local = 0.0;
  for (double& w : cert.nonvaluable_weights) local += (w = std::max(w, 0.0));
  cert.cost = std::clamp(1.0 - local, 0.0, 1.0);
  if (cert.cost <= 1e-9) {
    cert.cost = 0.0;
    return cert;
  }
  if (local <= 1e-12) {
    cert.valuable_part = b;
    return cert;
  }
  std::vector<Table> residual = b.tables();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < s.context_count(); ++c) {
      residual[c][rows_of[i][c]] -= cert.nonvaluable_weights[i];
    }
  }
  cert.valuable_part = renormalized_box(b.scenario_ptr(), std::move(residual));
  return cert;
}

double CostCertificate::reconstruction_error(const Box& b, const VertexSet& vs) const {
  std::vector<Table> rebuilt = b.tables();
  for (auto& t : rebuilt) std::fill(t.begin(), t.end(), 0.0);
  if (valuable_part) {
    for (std::size_t c = 0; c < rebuilt.size(); ++c) {
      for (std::size_t r = 0; r < rebuilt[c].size(); ++r) rebuilt[c][r] += cost * valuable_part->at(c, r);
    }
  }
  for (std::size_t i = 0; i < nonvaluable_weights.size(); ++i) {
    const Box& e = vs.deterministic[i];
    for (std::size_t c = 0; c < rebuilt.size(); ++c) {
      for (std::size_t r = 0; r < rebuilt[c].size(); ++r) rebuilt[c][r] += nonvaluable_weights[i] * e.at(c, r);
    }
  }
  double err = 0.0;
  for (std::size_t c = 0; c < rebuilt.size(); ++c) {
    for (std::size_t r = 0; r < rebuilt[c].size(); ++r) err = std::max(err, std::abs(rebuilt[c][r] - b.at(c, r)));
  }
  return err;
}

}  // namespace ctx
