#include "ctx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctx/kernels.hpp"
#include "ctx/polytope.hpp"

namespace ctx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

using Tables = std::vector<std::vector<double>>;

// Weighted relative entropy sum_c w_c D(p_c || Q_c), in bits.
double weighted_objective(const Box& b, std::span<const double> w, const Tables& marg) {
  double f = 0.0;
  for (std::size_t c = 0; c < marg.size(); ++c) {
    if (w[c] == 0.0) continue;
    const double d = relative_entropy(b.table(c), marg[c]);
    if (d == kInf) return kInf;
    f += w[c] * d;
  }
  return f;
}

// Pairwise Frank-Wolfe on the simplex of global models.
class InnerSolver {
 public:
  InnerSolver(const Box& b, std::span<const double> w)
      : box_(b), s_(b.scenario()), w_(w.begin(), w.end()),
        n_(static_cast<std::size_t>(s_.assignment_count())), score_(n_, 0.0) {
    for (std::size_t c = 0; c < s_.context_count(); ++c) ratio_.emplace_back(s_.table_size(c), 0.0);
  }

  MeasureResult solve(const InnerOptions& opt) {
    init(opt.initial);
    double f = weighted_objective(box_, w_, marg_);
    double gap = kInf;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
      if (it % 64 == 63) marg_ = kernels::parallel::marginals(s_, q_);
      refresh_scores();

      std::size_t fw = 0, away = n_;
      double qscore = 0.0;
      for (std::size_t l = 0; l < n_; ++l) {
        if (score_[l] > score_[fw]) fw = l;
        if (q_[l] > 0.0) {
          qscore += q_[l] * score_[l];
          if (away == n_ || score_[l] < score_[away]) away = l;
        }
      }
      const double fw_gap = score_[fw] - qscore;  // nats
      gap = std::max(0.0, fw_gap / kLn2);
      if (gap <= opt.tol) break;

      if (away != fw) {
        // Pairwise step: move mass from the worst support vertex to the best.
        const double gmax = q_[away];
        set_direction_pairwise(fw, away);
        const double g = line_search(gmax);
        q_[fw] += g;
        q_[away] = g >= gmax ? 0.0 : q_[away] - g;
        apply_direction(g);
      } else {
        set_direction_fw(fw);
        const double g = line_search(1.0);
        for (double& v : q_) v *= (1.0 - g);
        q_[fw] += g;
        apply_direction(g);
      }
      f = weighted_objective(box_, w_, marg_);
      if (opt.trace) opt.trace->push_back(f);
    }

    marg_ = kernels::parallel::marginals(s_, q_);
    refresh_scores();
    double qscore = 0.0, top = 0.0;
    for (std::size_t l = 0; l < n_; ++l) {
      qscore += q_[l] * score_[l];
      top = std::max(top, score_[l]);
    }
    gap = std::max(0.0, (top - qscore) / kLn2);

    MeasureResult r;
    r.value = std::max(0.0, weighted_objective(box_, w_, marg_));
    r.gap = gap;
    r.inner_iterations = it;
    r.converged = gap <= opt.tol;
    r.context_weights.weights = w_;
    double sum = std::accumulate(q_.begin(), q_.end(), 0.0);
    std::vector<double> q = q_;
    for (double& v : q) v = std::max(0.0, v) / sum;
    r.inner_model = GlobalDistribution(box_.scenario_ptr(), std::move(q));
    return r;
  }

  const Tables& marginals() const { return marg_; }

 private:
  void init(const std::vector<double>* initial) {
    if (initial && initial->size() == n_) {
      q_ = *initial;
      marg_ = kernels::parallel::marginals(s_, q_);
      if (weighted_objective(box_, w_, marg_) < kInf) return;
      // Pull the warm start into the interior.
      for (double& v : q_) v = 0.9 * v + 0.1 / static_cast<double>(n_);
      marg_ = kernels::parallel::marginals(s_, q_);
      if (weighted_objective(box_, w_, marg_) < kInf) return;
    }
    q_.assign(n_, 1.0 / static_cast<double>(n_));
    marg_ = kernels::parallel::marginals(s_, q_);
  }

  void refresh_scores() {
    for (std::size_t c = 0; c < ratio_.size(); ++c) {
      const auto& p = box_.table(c);
      for (std::size_t t = 0; t < p.size(); ++t) {
        ratio_[c][t] = (w_[c] == 0.0 || p[t] == 0.0) ? 0.0 : w_[c] * p[t] / marg_[c][t];
      }
    }
    kernels::parallel::context_score(s_, ratio_, score_);
  }

  void set_direction_fw(std::size_t vertex) {
    dir_ = marg_;
    for (std::size_t c = 0; c < dir_.size(); ++c) {
      for (double& v : dir_[c]) v = -v;
      dir_[c][s_.context_index(vertex, c)] += 1.0;
    }
  }

  void set_direction_pairwise(std::size_t to, std::size_t from) {
    dir_ = marg_;
    for (std::size_t c = 0; c < dir_.size(); ++c) {
      std::fill(dir_[c].begin(), dir_[c].end(), 0.0);
      dir_[c][s_.context_index(to, c)] += 1.0;
      dir_[c][s_.context_index(from, c)] -= 1.0;
    }
  }

  void apply_direction(double g) {
    for (std::size_t c = 0; c < marg_.size(); ++c) {
      for (std::size_t t = 0; t < marg_[c].size(); ++t) {
        marg_[c][t] = std::max(0.0, marg_[c][t] + g * dir_[c][t]);
      }
    }
  }

  // Derivative (nats) of the objective along dir_ at step g; +inf when the
  // step leaves the support of some weighted table.
  double slope(double g, double* curvature) const {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t c = 0; c < marg_.size(); ++c) {
      if (w_[c] == 0.0) continue;
      const auto& p = box_.table(c);
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t] == 0.0 || dir_[c][t] == 0.0) continue;
        const double m = marg_[c][t] + g * dir_[c][t];
        if (m <= 0.0) return kInf;
        const double r = dir_[c][t] / m;
        d1 -= w_[c] * p[t] * r;
        d2 += w_[c] * p[t] * r * r;
      }
    }
    if (curvature) *curvature = d2;
    return d1;
  }

  // Exact line search on [0, gmax] for the convex 1-D restriction.
  double line_search(double gmax) const {
    if (slope(gmax, nullptr) <= 0.0) return gmax;
    double lo = 0.0, hi = gmax, g = 0.0;
    for (int i = 0; i < 100; ++i) {
      double curv = 0.0;
      const double d = slope(g, &curv);
      if (d == kInf || d > 0.0) {
        hi = g;
      } else {
        lo = g;
        if (-d < 1e-15) break;
      }
      double next = (curv > 0.0 && d != kInf) ? g - d / curv : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-16 * std::max(1.0, gmax)) break;
      g = next;
    }
    return lo;
  }

  const Box& box_;
  const Scenario& s_;
  std::vector<double> w_;
  std::size_t n_;
  std::vector<double> q_;
  std::vector<double> score_;
  Tables marg_;
  Tables ratio_;
  Tables dir_;
};

}  // namespace

ContextWeights ContextWeights::uniform(std::size_t contexts) {
  return {std::vector<double>(contexts, 1.0 / static_cast<double>(contexts))};
}

ContextWeights ContextWeights::point_mass(std::size_t contexts, std::size_t c) {
  std::vector<double> w(contexts, 0.0);
  w.at(c) = 1.0;
  return {std::move(w)};
}

void ContextWeights::validate(std::size_t contexts) const {
  if (weights.size() != contexts) throw Error(ErrorKind::InvalidBox, "context weights have wrong length");
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidBox, "context weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorKind::InvalidBox, "context weights must sum to 1");
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::IncompatibleBox, "relative_entropy: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

double eta(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::InvalidBox, "eta: argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x);
}

MeasureResult rec_fixed(const Box& b, const ContextWeights& w, const InnerOptions& opt) {
  require_consistent(b);
  w.validate(b.scenario().context_count());
  InnerSolver solver(b, w.weights);
  return solver.solve(opt);
}

MeasureResult rec_fixed(const Box& b, const ContextWeights& w, double tol) {
  InnerOptions opt;
  opt.tol = tol;
  return rec_fixed(b, w, opt);
}

MeasureResult x_uniform(const Box& b, double tol) {
  return rec_fixed(b, ContextWeights::uniform(b.scenario().context_count()), tol);
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += (out[i] = std::max(0.0, v[i] - theta));
  for (double& x : out) x /= sum;
  return out;
}

constexpr double kOuterStep = 0.5;

MeasureResult x_max(const Box& b, const OuterOptions& opt) {
  require_consistent(b);
  const Scenario& s = b.scenario();
  const std::size_t contexts = s.context_count();

  auto worst_divergence = [&](const std::vector<std::vector<double>>& marg) {
    double worst = 0.0;
    for (std::size_t c = 0; c < contexts; ++c) worst = std::max(worst, relative_entropy(b.table(c), marg[c]));
    return worst;
  };

  std::vector<double> w = ContextWeights::uniform(contexts).weights;
  std::vector<double> q, q_avg, best_w = w, best_q;
  double avg_mass = 0.0;
  double best_lower = -kInf;
  double upper = kInf;
  double grad_scale = 1.0;
  std::size_t total_inner = 0;
  std::size_t t = 1;

  for (; t <= opt.max_outer; ++t) {
    InnerOptions inner;
    // Early supergradient steps only need a rough inner solution; tighten as
    // the bracket closes.
    const double bracket = upper - best_lower;
    inner.tol = std::isfinite(bracket) ? std::clamp(0.25 * bracket, opt.tol, 1e-2) : 1e-2;
    inner.max_iterations = opt.max_inner;
    inner.initial = q.empty() ? nullptr : &q;
    InnerSolver solver(b, w);
    const MeasureResult r = solver.solve(inner);
    total_inner += r.inner_iterations;
    q = r.inner_model->weights();

    // Per-context divergences are the supergradient of the concave outer
    // objective; their maximum bounds the saddle value from above, as does
    // the maximum at the step-weighted average of the inner models.
    std::vector<double> grad(contexts);
    for (std::size_t c = 0; c < contexts; ++c) grad[c] = relative_entropy(b.table(c), solver.marginals()[c]);
    upper = std::min(upper, *std::max_element(grad.begin(), grad.end()));

    // Steps scale with 1 / |first supergradient| so tiny and large measures
    // move the weights alike.
    if (t == 1) {
      double norm = 0.0;
      for (double g : grad) norm += std::min(g, 64.0) * std::min(g, 64.0);
      grad_scale = 1.0 / std::max(std::sqrt(norm), 1e-6);
    }
    const double step = kOuterStep * grad_scale / std::sqrt(static_cast<double>(t));
    if (q_avg.empty()) q_avg.assign(q.size(), 0.0);
    avg_mass += step;
    for (std::size_t l = 0; l < q.size(); ++l) q_avg[l] += step / avg_mass * (q[l] - q_avg[l]);
    upper = std::min(upper, worst_divergence(kernels::parallel::marginals(s, q_avg)));

    if (r.value - r.gap > best_lower) {
      best_lower = r.value - r.gap;
      best_w = w;
      best_q = q;
    }
    if (upper - best_lower <= opt.tol) break;

    for (std::size_t c = 0; c < contexts; ++c) {
      // A context with infinite divergence cannot occur with an interior
      // warm start; clamp anyway so the projection stays finite.
      w[c] += step * std::min(grad[c], 64.0);
    }
    w = project_to_simplex(w);
  }

  // Re-solve at the best weights to full tolerance.
  InnerOptions polish;
  polish.tol = opt.tol;
  polish.max_iterations = opt.max_inner;
  polish.initial = &best_q;
  MeasureResult best = InnerSolver(b, best_w).solve(polish);
  total_inner += best.inner_iterations;
  best_lower = std::max(best_lower, best.value - best.gap);

  best.upper_bound = upper;
  best.inner_iterations = total_inner;
  best.outer_iterations = std::min(t, opt.max_outer);
  best.converged = upper - best_lower <= opt.tol;
  return best;
}

MeasureResult x_max(const Box& b, double tol) {
  OuterOptions opt;
  opt.tol = tol;
  return x_max(b, opt);
}

BetaResult beta(const Box& b, const Box& reference) {
  const Scenario& s = b.scenario();
  const std::size_t m = s.context(0).members.size();
  for (const auto& c : s.contexts()) {
    if (c.members.size() != m) throw Error(ErrorKind::UnsupportedScenario, "beta: mixed context sizes");
  }
  if (!s.all_binary()) throw Error(ErrorKind::UnsupportedScenario, "beta: observables must be binary");
  BetaResult r;
  r.value = std::ldexp(box_inner_product(reference, b), static_cast<int>(m) - 1);
  r.noncontextual_bound = static_cast<double>(s.context_count()) - 1.0;
  r.violation = r.value > r.noncontextual_bound + 1e-12;
  return r;
}

CostBound cost_bound_xmax(const Box& b, double tol, const std::vector<Box>* contextual_vertices) {
  CostBound out;
  int n = 0;
  if (is_cycle_scenario(b.scenario(), &n)) {
    out.cost = contextuality_cost(b).cost;
    out.per_vertex = std::log2(static_cast<double>(n) / (n - 1));
    out.vertex_equivalent = true;
    out.bound = out.cost * out.per_vertex;
    return out;
  }
  if (!contextual_vertices || contextual_vertices->empty()) {
    throw Error(ErrorKind::UnsupportedScenario,
                "cost bound needs an n-cycle scenario or a list of extremal contextual boxes");
  }
  out.cost = contextuality_cost(b).cost;
  for (const Box& e : *contextual_vertices) out.per_vertex = std::max(out.per_vertex, x_max(e, tol).value);
  out.bound = out.cost * out.per_vertex;
  return out;
}

std::uint64_t continuity_dimension(const Scenario& s) {
  return std::min<std::uint64_t>(s.assignment_count(), s.context_count());
}

double continuity_g(const ContinuityBoundInput& in) {
  if (!(in.delta >= 0.0 && in.delta <= 2.0) || in.dim < 1) {
    throw Error(ErrorKind::InvalidBox, "continuity bound: need delta in [0, 2] and d >= 1");
  }
  // eta is only defined on [0, 1]; for delta > 1 the 1 - delta term is 0.
  const double d = std::min(in.delta, 1.0);
  return 5.0 * in.delta * std::log2(static_cast<double>(in.dim)) + 2.0 * eta(1.0 - d) + 3.0 * eta(d);
}

double continuity_bound(const ContinuityBoundInput& in) { return 6.0 * continuity_g(in) + 3.0 * in.delta; }

double fixed_weight_continuity_bound(const ContinuityBoundInput& in) {
  return continuity_g(in) + in.delta;
}

DistillationBound distillable_upper_bound(const Box& b, const Box& target, double tol) {
  DistillationBound out;
  out.x_target = x_max(target, tol).value;
  if (out.x_target <= 2.0 * tol) {
    throw Error(ErrorKind::UndefinedBound, "distillation bound undefined: target box is noncontextual");
  }
  out.x_box = x_max(b, tol).value;
  out.bound = out.x_box / out.x_target;
  return out;
}

}  // namespace ctx
