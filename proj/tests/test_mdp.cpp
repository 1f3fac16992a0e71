#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "seqexp/mdp.hpp"

using namespace seqexp;

namespace {

const ValueFunction& example1_solution() {
  static const SolveResult res = solve(fixtures::example1(), BeliefGrid(1e-3), 1e-3);
  return res.value;
}

// Exact finite-horizon optimum on the continuous belief, no interpolation.
double enumerate_rules(const Instance& inst, double delta, int depth) {
  double g = terminal_value(inst.actions(), delta);
  if (depth == 0) return g;
  double best = -INFINITY;
  for (const auto& e : inst.experiments()) {
    double s = 0.0;
    for (const auto& a : posterior_distribution(delta, e))
      s += a.prob * enumerate_rules(inst, a.posterior, depth - 1);
    best = std::max(best, inst.discount() * s);
  }
  return std::max(g, best);
}

class FixedExperiment : public Policy {
 public:
  FixedExperiment(const Instance& inst, int e) : inst_(inst), e_(e) {}
  PolicyKind kind() const override { return PolicyKind::FullDisplay; }
  Decision decide(double) const override { return Decision::run(e_); }
  int experiment_at(double) const override { return e_; }

 private:
  const Instance& inst_;
  int e_;
};

}  // namespace

TEST_CASE("grid construction") {
  BeliefGrid g(1e-3);
  CHECK(g.size() == 1001);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(1000) == 1.0);
  CHECK_THROWS_AS(BeliefGrid(0.2), std::invalid_argument);
  CHECK_THROWS_AS(BeliefGrid(0.0), std::invalid_argument);
}

TEST_CASE("zero arrival rate leaves G as the fixed point") {
  Instance inst(fixtures::four_line_payoffs(), fixtures::nine_experiments(), 0.0, 0.5);
  auto res = solve(inst, BeliefGrid(1e-2), 1e-6);
  for (std::size_t i = 0; i < res.value.grid.size(); ++i) {
    CHECK(res.value.values[i] == doctest::Approx(terminal_value(inst.actions(), res.value.grid.node(i))));
    CHECK(res.value.choice[i] == kStop);
  }
}

TEST_CASE("huge discount rate leaves G") {
  Instance inst(fixtures::four_line_payoffs(), fixtures::nine_experiments(), 8.0, 1e6);
  auto res = solve(inst, BeliefGrid(1e-2), 1e-3);
  for (std::size_t i = 0; i < res.value.grid.size(); ++i)
    CHECK(std::abs(res.value.values[i] - terminal_value(inst.actions(), res.value.grid.node(i))) <= 1e-3);
}

TEST_CASE("one Bellman application improves on G inside the experimentation region") {
  auto inst = fixtures::example1();
  auto g = terminal_function(inst, BeliefGrid(1e-3));
  auto next = bellman_apply(inst, g);
  bool strict = false;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    CHECK(next.values[i] >= g.values[i]);
    double d = g.grid.node(i);
    if (d > 0.31 && d < 0.69 && next.values[i] > g.values[i] + 1e-9) strict = true;
  }
  CHECK(strict);
}

TEST_CASE("worked example regions") {
  const auto& v = example1_solution();
  std::pair<double, double> mid{-1.0, -1.0};
  for (const auto& c : continuation_intervals(v))
    if (c.first < 0.5 && c.second > 0.5) mid = c;
  CHECK(std::abs(mid.first - 0.31) <= 0.02);
  CHECK(std::abs(mid.second - 0.69) <= 0.02);
  for (double d : {0.11, 0.2, 0.3})
    CHECK(v.choice[static_cast<std::size_t>(std::llround(d * 1000))] == kStop);
  // Nodes just below the region stop with action 2.
  auto inst = fixtures::example1();
  for (double d : {0.11, 0.2, 0.3})
    CHECK(inst.actions()[best_action(inst.actions(), d)].id == 2);
  for (double d : {0.46, 0.5}) {
    auto i = static_cast<std::size_t>(std::llround(d * 1000));
    CHECK(inst.experiments()[v.choice[i]].id() == 3);
  }
  for (double d : {0.52, 0.56, 0.6}) {
    auto i = static_cast<std::size_t>(std::llround(d * 1000));
    CHECK(inst.experiments()[v.choice[i]].id() == 4);
  }
}

TEST_CASE("policy iteration agrees with value iteration") {
  auto inst = fixtures::example1();
  SolveOptions opts;
  opts.method = SolveMethod::PolicyIteration;
  auto pi = solve(inst, BeliefGrid(1e-3), 1e-3, true, opts);
  const auto& vi = example1_solution();
  double gap = 0.0;
  for (std::size_t i = 0; i < vi.grid.size(); ++i)
    gap = std::max(gap, std::abs(pi.value.values[i] - vi.values[i]));
  // Value-iteration error is bounded by the residual times rho/(1-rho).
  CHECK(gap <= 1e-3 * inst.discount() / (1 - inst.discount()));
  CHECK(pi.report.final_residual <= 1e-9);
}

TEST_CASE("Jacobi value iteration contracts at rate at most rho") {
  auto inst = fixtures::example1();
  ValueFunction v = terminal_function(inst, BeliefGrid(1e-2));
  std::vector<double> diffs;
  for (int k = 0; k < 30; ++k) {
    ValueFunction next = bellman_apply(inst, v);
    double d = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
      d = std::max(d, std::abs(next.values[i] - v.values[i]));
    diffs.push_back(d);
    v = next;
  }
  for (std::size_t k = 1; k < diffs.size(); ++k)
    if (diffs[k - 1] > 1e-12) CHECK(diffs[k] <= inst.discount() * diffs[k - 1] + 1e-14);
}

TEST_CASE("Gauss-Seidel sweeps contract at rate at most rho") {
  auto inst = fixtures::example1();
  auto res = solve(inst, BeliefGrid(1e-2), 1e-10);
  const auto& h = res.report.change_history;
  REQUIRE(h.size() > 3);
  // Sweeps alternate direction, so compare changes one full cycle apart.
  const double rho = inst.discount();
  for (std::size_t k = 2; k < h.size(); ++k)
    if (h[k - 2] > 1e-13) CHECK(h[k] <= rho * rho * h[k - 2] + 1e-13);
  double rate = std::pow(h.back() / h.front(), 1.0 / static_cast<double>(h.size() - 1));
  CHECK(rate <= rho);
  CHECK(res.report.final_residual <= 1e-10);
}

TEST_CASE("solved values are convex and sandwiched") {
  auto inst = fixtures::example1();
  const auto& v = example1_solution();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = u(rng), b = u(rng), t = u(rng);
    CHECK(v.at(t * a + (1 - t) * b) <= t * v.at(a) + (1 - t) * v.at(b) + 1e-9);
  }
  double g0 = terminal_value(inst.actions(), 0.0), g1 = terminal_value(inst.actions(), 1.0);
  CHECK(v.values.front() == doctest::Approx(g0));
  CHECK(v.values.back() == doctest::Approx(g1));
  for (std::size_t i = 0; i < v.grid.size(); ++i) {
    double d = v.grid.node(i);
    CHECK(v.values[i] >= terminal_value(inst.actions(), d) - 1e-12);
    CHECK(v.values[i] <= (1 - d) * g0 + d * g1 + 1e-3);
  }
}

TEST_CASE("mesh refinement moves values by less than five tolerances") {
  auto inst = fixtures::example1();
  const auto& coarse = example1_solution();
  auto fine = solve(inst, BeliefGrid(5e-4), 1e-3).value;
  for (std::size_t i = 0; i < coarse.grid.size(); ++i)
    CHECK(std::abs(coarse.values[i] - fine.values[2 * i]) < 5e-3);
}

TEST_CASE("depth-12 enumeration oracle on strongly discounted binary instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    auto e = fixtures::random_binary(1, rng);
    Instance inst({{1, 3.0, -2.0}, {2, 0.5, 2.0}}, {e}, 1.0, 1.0);  // rho = 0.5
    auto v = solve(inst, BeliefGrid(1e-3), 1e-9).value;
    for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      double oracle = enumerate_rules(inst, d, 12);
      CHECK(oracle <= v.at(d) + 1e-3);
      CHECK(std::abs(oracle - v.at(d)) <= 1e-3);
    }
  }
}

TEST_CASE("pruning leaves the optimal value unchanged") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Experiment> exps;
    for (int k = 0; k < 4; ++k) exps.push_back(fixtures::random_binary(k + 1, rng));
    auto kept = prune_dominated(exps).kept;
    Instance all(fixtures::four_line_payoffs(), exps, 8.0, 0.5);
    Instance few(fixtures::four_line_payoffs(), kept, 8.0, 0.5);
    BeliefGrid grid(1e-2);
    SolveOptions opts;
    opts.method = SolveMethod::PolicyIteration;
    auto va = solve(all, grid, 1e-6, true, opts).value;
    auto vk = solve(few, grid, 1e-6, true, opts).value;
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(va.values[i] - vk.values[i]) <= 1e-6);
  }
}

TEST_CASE("policy evaluation") {
  auto inst = fixtures::example1();
  BeliefGrid grid(1e-3);
  auto g = terminal_function(inst, grid);

  auto stop = policy_value(inst, StopPolicy(inst), grid, 1e-3);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(stop.values[i] == doctest::Approx(g.values[i]));

  const auto& v = example1_solution();
  OptimalPolicy opt(inst, v);
  for (auto method : {EvalMethod::Direct, EvalMethod::GaussSeidel}) {
    auto pv = policy_value(inst, opt, grid, 1e-3, method);
    double bound = 2e-3 / (1 - inst.discount());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(pv.values[i] - v.values[i]) <= bound);
  }
  auto pv = policy_value(inst, opt, grid, 1e-3);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(pv.values[i] <= v.values[i] + 2e-3);
}

TEST_CASE("finite budget values") {
  auto inst = fixtures::example1();
  BeliefGrid grid(1e-2);
  SolveOptions opts;
  opts.method = SolveMethod::PolicyIteration;
  auto sol = solve(inst, grid, 1e-9, true, opts).value;
  OptimalPolicy opt(inst, sol);
  auto g = terminal_function(inst, grid);
  for (auto mode : {BudgetMode::ExactlyT, BudgetMode::AtMostT}) {
    auto v0 = finite_budget_value(inst, opt, 0, grid, mode);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(v0.values[i] == g.values[i]);
  }
  ValueFunction prev = g;
  for (int T = 1; T <= 40; ++T) {
    auto v = finite_budget_value(inst, opt, T, grid, BudgetMode::AtMostT);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(v.values[i] >= prev.values[i] - 1e-12);
    prev = v;
  }
  int big = static_cast<int>(10 * inst.lambda() / inst.r()) * 4;
  auto lim = finite_budget_value(inst, opt, big, grid, BudgetMode::AtMostT);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(lim.values[i] - sol.values[i]) <= 1e-3);

  // With forced experimentation the boundary nodes only lose to discounting.
  auto exact = finite_budget_value(inst, opt, 3, grid, BudgetMode::ExactlyT);
  CHECK(exact.values[0] == doctest::Approx(g.values[0] * std::pow(inst.discount(), 3)));
}

TEST_CASE("fixed experiment policy without stopping has zero value at absorbing ends") {
  auto inst = fixtures::example1();
  FixedExperiment f(inst, 0);
  auto v = policy_value(inst, f, BeliefGrid(1e-2), 1e-6);
  CHECK(std::abs(v.values.front()) <= 1e-12);
  CHECK(std::abs(v.values.back()) <= 1e-12);
}
