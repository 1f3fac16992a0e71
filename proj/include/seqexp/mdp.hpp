#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqexp/model.hpp"
#include "seqexp/policy_base.hpp"

namespace seqexp {

// Uniform mesh {0, h, ..., 1}. The requested mesh size is rounded so that
// 1/h is an integer.
class BeliefGrid {
 public:
  explicit BeliefGrid(double mesh_size = 1e-3);

  double mesh() const { return h_; }
  std::size_t size() const { return n_; }
  double node(std::size_t i) const { return i == n_ - 1 ? 1.0 : static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

 private:
  std::size_t n_;
  double h_;
};

inline constexpr int kStop = -1;

struct ValueFunction {
  BeliefGrid grid;
  std::vector<double> values;
  std::vector<int> choice;  // kStop or a position in Instance::experiments()

  explicit ValueFunction(const BeliefGrid& g)
      : grid(g), values(g.size(), 0.0), choice(g.size(), kStop) {}
  // Linear interpolation.
  double at(double delta) const;
};

struct SolveReport {
  long iterations = 0;
  double final_residual = 0.0;
  double wall_time = 0.0;
  std::vector<std::pair<double, double>> continuation_intervals;
  std::vector<double> change_history;  // sup change per sweep (value iteration only)
};

struct SolveResult {
  ValueFunction value;
  SolveReport report;
};

enum class SolveMethod { ValueIteration, PolicyIteration };

struct SolveOptions {
  long max_iterations = 1000000;
  SolveMethod method = SolveMethod::ValueIteration;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// G sampled on the grid, all nodes marked Stop.
ValueFunction terminal_function(const Instance& inst, const BeliefGrid& grid);

// One Jacobi application of the Bellman operator.
ValueFunction bellman_apply(const Instance& inst, const ValueFunction& v);

// Sup-norm distance between v and bellman_apply(v).
double bellman_residual(const Instance& inst, const ValueFunction& v);

SolveResult solve(const Instance& inst, const BeliefGrid& grid, double tol,
                  bool gauss_seidel = true, const SolveOptions& opts = {});

enum class EvalMethod { Direct, GaussSeidel };

// Value of a stationary policy. Direct solves the linear fixed-point system
// exactly; GaussSeidel iterates to the requested tolerance.
ValueFunction policy_value(const Instance& inst, const Policy& policy, const BeliefGrid& grid,
                           double tol, EvalMethod method = EvalMethod::Direct);

enum class BudgetMode { ExactlyT, AtMostT };

// T votes run the policy's experiments; AtMostT may also stop early.
ValueFunction finite_budget_value(const Instance& inst, const Policy& policy, int T,
                                  const BeliefGrid& grid, BudgetMode mode);
// The same values for every requested budget in one sweep of max(budgets) votes;
// output order follows the input.
std::vector<ValueFunction> finite_budget_values(const Instance& inst, const Policy& policy,
                                                const std::vector<int>& budgets,
                                                const BeliefGrid& grid, BudgetMode mode);

// Maximal runs of non-Stop nodes; endpoints sit half a mesh outside the run.
std::vector<std::pair<double, double>> continuation_intervals(const ValueFunction& v);

struct ChoiceRun {
  int choice;  // kStop or experiment position
  double lo, hi;
};
// Maximal runs of constant choice with half-mesh endpoints (clamped to [0,1]).
std::vector<ChoiceRun> choice_runs(const ValueFunction& v);

// Policy that replays a solved value function's choices.
class OptimalPolicy : public Policy {
 public:
  OptimalPolicy(const Instance& inst, ValueFunction v);
  PolicyKind kind() const override { return PolicyKind::Optimal; }
  Decision decide(double delta) const override;
  int experiment_at(double delta) const override;
  const ValueFunction& value() const { return v_; }

 private:
  std::vector<ActionPayoff> actions_;
  std::vector<int> greedy_;  // best experiment per node ignoring stopping
  ValueFunction v_;
};

class StopPolicy : public Policy {
 public:
  explicit StopPolicy(const Instance& inst) : actions_(inst.actions()) {}
  PolicyKind kind() const override { return PolicyKind::AlwaysStop; }
  Decision decide(double delta) const override;
  int experiment_at(double) const override { return 0; }

 private:
  std::vector<ActionPayoff> actions_;
};

void write_value_csv(const std::string& path, const Instance& inst, const ValueFunction& v);

}  // namespace seqexp
