#include "seqexp/mdp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "seqexp/csv.hpp"

namespace seqexp {

namespace {

constexpr double kTie = 1e-12;

struct Interp {
  std::size_t j;
  double w;  // value = (1-w) v[j] + w v[j+1]
};

Interp locate(double p, std::size_t n, double h) {
  double s = p / h;
  if (s >= static_cast<double>(n - 1)) return {n - 2, 1.0};
  if (s <= 0.0) return {0, 0.0};
  auto j = static_cast<std::size_t>(s);
  if (j >= n - 1) j = n - 2;
  return {j, s - static_cast<double>(j)};
}

double interp(const std::vector<double>& v, double p, double h) {
  Interp ip = locate(p, v.size(), h);
  return (1.0 - ip.w) * v[ip.j] + ip.w * v[ip.j + 1];
}

// Undiscounted expectation of v at the posterior of experiment e from delta.
double expect(const Experiment& e, double delta, const std::vector<double>& v, double h) {
  const auto& q0 = e.q0();
  const auto& q1 = e.q1();
  const auto& l = e.ratios();
  double s = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    double p = delta * q0[x] + (1.0 - delta) * q1[x];
    double post = delta / (delta + (1.0 - delta) * l[x]);
    s += p * interp(v, post, h);
  }
  return s;
}

double expect_mixture(const Instance& inst, const std::vector<std::pair<int, double>>& mix,
                      double delta, const std::vector<double>& v, double h) {
  double s = 0.0;
  for (const auto& [e, w] : mix) s += w * expect(inst.experiments()[e], delta, v, h);
  return s;
}

struct Greedy {
  double value;
  int choice;
  double best_cont;
  int best_exp;
};

// Bellman maximization at one node. Ties go to Stop, then to the lower id.
Greedy greedy_at(const Instance& inst, double delta, double g, const std::vector<double>& v,
                 double h) {
  const double rho = inst.discount();
  const auto& exps = inst.experiments();
  double best = -INFINITY;
  int arg = 0;
  for (std::size_t e = 0; e < exps.size(); ++e) {
    double c = rho * expect(exps[e], delta, v, h);
    double d = c - best;
    if (d > kTie || (d >= -kTie && exps[e].id() < exps[arg].id())) {
      best = std::max(best, c);
      arg = static_cast<int>(e);
    }
  }
  if (g >= best - kTie) return {g, kStop, best, arg};
  return {best, arg, best, arg};
}

std::vector<double> sample_g(const Instance& inst, const BeliefGrid& grid) {
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = terminal_value(inst.actions(), grid.node(i));
  return g;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Exact value of a per-node rule: Stop nodes are pinned to G, others satisfy
// v_i = rho * sum_e w_e E_e[v(post)].
std::vector<double> evaluate_direct(const Instance& inst, const BeliefGrid& grid,
                                    const std::vector<double>& g,
                                    const std::vector<std::vector<std::pair<int, double>>>& rule) {
  const std::size_t n = grid.size();
  const double h = grid.mesh();
  const double rho = inst.discount();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<int>(i);
    trip.emplace_back(row, row, 1.0);
    if (rule[i].empty()) {
      b[row] = g[i];
      continue;
    }
    double delta = grid.node(i);
    for (const auto& [ei, w] : rule[i]) {
      const Experiment& e = inst.experiments()[ei];
      for (std::size_t x = 0; x < e.size(); ++x) {
        double p = delta * e.q0()[x] + (1.0 - delta) * e.q1()[x];
        double post = delta / (delta + (1.0 - delta) * e.ratios()[x]);
        Interp ip = locate(post, n, h);
        double c = rho * w * p;
        if (ip.w < 1.0) trip.emplace_back(row, static_cast<int>(ip.j), -c * (1.0 - ip.w));
        if (ip.w > 0.0) trip.emplace_back(row, static_cast<int>(ip.j + 1), -c * ip.w);
      }
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("policy evaluation: singular system");
  Eigen::VectorXd x = lu.solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

void finish_report(const Instance& inst, ValueFunction& v, SolveReport& rep,
                   std::chrono::steady_clock::time_point t0) {
  ValueFunction next = bellman_apply(inst, v);
  double res = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i)
    res = std::max(res, std::abs(next.values[i] - v.values[i]));
  v.choice = next.choice;
  rep.final_residual = res;
  rep.continuation_intervals = continuation_intervals(v);
  rep.wall_time = seconds_since(t0);
}

SolveResult solve_policy_iteration(const Instance& inst, const BeliefGrid& grid, double tol,
                                   const SolveOptions& opts,
                                   std::chrono::steady_clock::time_point t0) {
  const std::size_t n = grid.size();
  const double h = grid.mesh();
  const auto g = sample_g(inst, grid);
  std::vector<int> pol(n, kStop);
  std::vector<double> v = g;
  SolveReport rep;
  for (long it = 0;; ++it) {
    if (it >= opts.max_iterations)
      throw ConvergenceError("policy iteration cap exceeded", INFINITY);
    bool changed = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      Greedy gr = greedy_at(inst, grid.node(i), g[i], v, h);
      int keep = pol[i];
      // Keep the incumbent under near-ties so the iteration cannot cycle.
      double incumbent =
          keep == kStop ? g[i]
                        : inst.discount() * expect(inst.experiments()[keep], grid.node(i), v, h);
      if (incumbent >= gr.value - kTie * (1.0 + std::abs(gr.value))) continue;
      pol[i] = gr.choice;
      changed = true;
    }
    rep.iterations = it + 1;
    if (!changed && it > 0) break;
    std::vector<std::vector<std::pair<int, double>>> rule(n);
    for (std::size_t i = 0; i < n; ++i)
      if (pol[i] != kStop) rule[i] = {{pol[i], 1.0}};
    v = evaluate_direct(inst, grid, g, rule);
  }
  ValueFunction out(grid);
  out.values = v;
  finish_report(inst, out, rep, t0);
  if (rep.final_residual > tol)
    throw ConvergenceError("policy iteration residual above tolerance", rep.final_residual);
  return {out, rep};
}

}  // namespace

BeliefGrid::BeliefGrid(double mesh_size) {
  if (!(mesh_size > 0.0) || mesh_size > 0.1)
    throw std::invalid_argument("mesh size must lie in (0, 0.1]");
  auto cells = static_cast<std::size_t>(std::llround(1.0 / mesh_size));
  n_ = cells + 1;
  h_ = 1.0 / static_cast<double>(cells);
}

std::vector<double> BeliefGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

double ValueFunction::at(double delta) const { return interp(values, delta, grid.mesh()); }

ValueFunction terminal_function(const Instance& inst, const BeliefGrid& grid) {
  ValueFunction v(grid);
  v.values = sample_g(inst, grid);
  return v;
}

ValueFunction bellman_apply(const Instance& inst, const ValueFunction& v) {
  const BeliefGrid& grid = v.grid;
  ValueFunction out(grid);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    double delta = grid.node(i);
    double g = terminal_value(inst.actions(), delta);
    if (i == 0 || i + 1 == n) {
      out.values[i] = g;
      continue;
    }
    Greedy gr = greedy_at(inst, delta, g, v.values, grid.mesh());
    out.values[i] = gr.value;
    out.choice[i] = gr.choice;
  }
  return out;
}

double bellman_residual(const Instance& inst, const ValueFunction& v) {
  ValueFunction next = bellman_apply(inst, v);
  double res = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i)
    res = std::max(res, std::abs(next.values[i] - v.values[i]));
  return res;
}

SolveResult solve(const Instance& inst, const BeliefGrid& grid, double tol, bool gauss_seidel,
                  const SolveOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  if (opts.method == SolveMethod::PolicyIteration)
    return solve_policy_iteration(inst, grid, tol, opts, t0);

  const std::size_t n = grid.size();
  const double h = grid.mesh();
  const auto g = sample_g(inst, grid);
  ValueFunction v(grid);
  v.values = g;
  SolveReport rep;
  double change = INFINITY;
  for (long it = 0;; ++it) {
    if (it >= opts.max_iterations)
      throw ConvergenceError("value iteration cap exceeded", change);
    change = 0.0;
    if (gauss_seidel) {
      // Alternate sweep direction; updates are used immediately.
      bool forward = (it % 2 == 0);
      for (std::size_t k = 1; k + 1 < n; ++k) {
        std::size_t i = forward ? k : n - 1 - k;
        double nv = greedy_at(inst, grid.node(i), g[i], v.values, h).value;
        change = std::max(change, std::abs(nv - v.values[i]));
        v.values[i] = nv;
      }
    } else {
      ValueFunction next = bellman_apply(inst, v);
      for (std::size_t i = 0; i < n; ++i)
        change = std::max(change, std::abs(next.values[i] - v.values[i]));
      v.values = std::move(next.values);
    }
    rep.iterations = it + 1;
    rep.change_history.push_back(change);
    if (change <= tol && bellman_residual(inst, v) <= tol) break;
  }
  finish_report(inst, v, rep, t0);
  return {v, rep};
}

namespace {

std::vector<std::vector<std::pair<int, double>>> rule_of(const Policy& policy,
                                                         const BeliefGrid& grid,
                                                         std::vector<int>& choice) {
  std::vector<std::vector<std::pair<int, double>>> rule(grid.size());
  choice.assign(grid.size(), kStop);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Decision d = policy.decide(grid.node(i));
    if (d.stop) continue;
    rule[i] = policy.mixture(grid.node(i));
    if (rule[i].size() == 1 && rule[i][0].first != d.experiment) rule[i] = {{d.experiment, 1.0}};
    choice[i] = d.experiment;
  }
  return rule;
}

}  // namespace

ValueFunction policy_value(const Instance& inst, const Policy& policy, const BeliefGrid& grid,
                           double tol, EvalMethod method) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  ValueFunction out(grid);
  const auto g = sample_g(inst, grid);
  auto rule = rule_of(policy, grid, out.choice);
  if (method == EvalMethod::Direct) {
    out.values = evaluate_direct(inst, grid, g, rule);
    return out;
  }
  const std::size_t n = grid.size();
  out.values = g;
  for (long it = 0;; ++it) {
    if (it >= 1000000) throw ConvergenceError("policy evaluation cap exceeded", INFINITY);
    double change = 0.0;
    bool forward = (it % 2 == 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t i = forward ? k : n - 1 - k;
      if (rule[i].empty()) continue;
      double nv =
          inst.discount() * expect_mixture(inst, rule[i], grid.node(i), out.values, grid.mesh());
      change = std::max(change, std::abs(nv - out.values[i]));
      out.values[i] = nv;
    }
    if (change <= tol) break;
  }
  return out;
}

ValueFunction finite_budget_value(const Instance& inst, const Policy& policy, int T,
                                  const BeliefGrid& grid, BudgetMode mode) {
  return finite_budget_values(inst, policy, {T}, grid, mode).front();
}

std::vector<ValueFunction> finite_budget_values(const Instance& inst, const Policy& policy,
                                                const std::vector<int>& budgets,
                                                const BeliefGrid& grid, BudgetMode mode) {
  int horizon = 0;
  for (int T : budgets) {
    if (T < 0) throw std::invalid_argument("budget T must be nonnegative");
    horizon = std::max(horizon, T);
  }
  const std::size_t n = grid.size();
  const double h = grid.mesh();
  const auto g = sample_g(inst, grid);
  std::vector<std::vector<std::pair<int, double>>> rule(n);
  for (std::size_t i = 0; i < n; ++i) rule[i] = policy.mixture(grid.node(i));

  // The value with t votes left depends only on t, so budget T is iterate T.
  std::vector<ValueFunction> out(budgets.size(), ValueFunction(grid));
  std::vector<double> prev = g, cur(n);
  std::vector<int> choice(n, kStop);
  auto emit = [&](int t) {
    for (std::size_t b = 0; b < budgets.size(); ++b)
      if (budgets[b] == t) {
        out[b].values = prev;
        out[b].choice = choice;
      }
  };
  emit(0);
  for (int t = 1; t <= horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double c = inst.discount() * expect_mixture(inst, rule[i], grid.node(i), prev, h);
      bool stop = mode == BudgetMode::AtMostT && g[i] >= c - kTie;
      cur[i] = stop ? g[i] : c;
      choice[i] = stop ? kStop : rule[i].front().first;
    }
    std::swap(cur, prev);
    emit(t);
  }
  return out;
}

std::vector<ChoiceRun> choice_runs(const ValueFunction& v) {
  std::vector<ChoiceRun> runs;
  const std::size_t n = v.grid.size();
  const double h = v.grid.mesh();
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && v.choice[i] == v.choice[start]) continue;
    double lo = start == 0 ? 0.0 : v.grid.node(start) - 0.5 * h;
    double hi = i == n ? 1.0 : v.grid.node(i - 1) + 0.5 * h;
    runs.push_back({v.choice[start], lo, hi});
    start = i;
  }
  return runs;
}

std::vector<std::pair<double, double>> continuation_intervals(const ValueFunction& v) {
  std::vector<std::pair<double, double>> out;
  const std::size_t n = v.grid.size();
  const double h = v.grid.mesh();
  std::size_t i = 0;
  while (i < n) {
    if (v.choice[i] == kStop) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && v.choice[j + 1] != kStop) ++j;
    out.emplace_back(std::max(0.0, v.grid.node(i) - 0.5 * h),
                     std::min(1.0, v.grid.node(j) + 0.5 * h));
    i = j + 1;
  }
  return out;
}

OptimalPolicy::OptimalPolicy(const Instance& inst, ValueFunction v)
    : actions_(inst.actions()), v_(std::move(v)) {
  greedy_.resize(v_.grid.size());
  for (std::size_t i = 0; i < v_.grid.size(); ++i) {
    double delta = v_.grid.node(i);
    greedy_[i] = greedy_at(inst, delta, terminal_value(actions_, delta), v_.values,
                           v_.grid.mesh())
                     .best_exp;
  }
}

namespace {
std::size_t nearest(const BeliefGrid& grid, double delta) {
  auto i = static_cast<std::size_t>(std::llround(std::clamp(delta, 0.0, 1.0) / grid.mesh()));
  return std::min(i, grid.size() - 1);
}
}  // namespace

Decision OptimalPolicy::decide(double delta) const {
  std::size_t i = nearest(v_.grid, delta);
  if (v_.choice[i] == kStop) return Decision::stop_with(static_cast<int>(best_action(actions_, delta)));
  return Decision::run(v_.choice[i]);
}

int OptimalPolicy::experiment_at(double delta) const { return greedy_[nearest(v_.grid, delta)]; }

Decision StopPolicy::decide(double delta) const {
  return Decision::stop_with(static_cast<int>(best_action(actions_, delta)));
}

void write_value_csv(const std::string& path, const Instance& inst, const ValueFunction& v) {
  CsvWriter w(path, {"delta", "value", "choice"});
  for (std::size_t i = 0; i < v.grid.size(); ++i) {
    std::string c = v.choice[i] == kStop ? "stop"
                                         : std::to_string(inst.experiments()[v.choice[i]].id());
    w.row({fmt12(v.grid.node(i)), fmt12(v.values[i]), c});
  }
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Optimal: return "Optimal";
    case PolicyKind::Asymptotic: return "A";
    case PolicyKind::MaxVol: return "MV";
    case PolicyKind::MaxRange: return "MR";
    case PolicyKind::FullDisplay: return "F";
    case PolicyKind::LookAhead: return "LA";
    case PolicyKind::TTPS: return "TTPS";
    case PolicyKind::MNLBandit: return "MNLBandit";
    case PolicyKind::AlwaysStop: return "Stop";
  }
  return "?";
}

}  // namespace seqexp
