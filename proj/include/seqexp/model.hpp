#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace seqexp {

enum class Hypothesis { Theta0, Theta1 };

// Affine terminal payoff R(delta) = alpha + beta * delta.
// alpha is the payoff under theta1, alpha + beta the payoff under theta0.
struct ActionPayoff {
  int id = 0;
  double alpha = 0.0;
  double beta = 0.0;

  double at(double delta) const { return alpha + beta * delta; }
  double under_theta0() const { return alpha + beta; }
  double under_theta1() const { return alpha; }
};

// Finite-outcome experiment with strictly positive outcome laws under both
// hypotheses. Immutable after construction.
class Experiment {
 public:
  Experiment(int id, std::vector<double> q0, std::vector<double> q1);
  Experiment(int id, std::vector<std::string> labels, std::vector<double> q0,
             std::vector<double> q1);

  int id() const { return id_; }
  std::size_t size() const { return q0_.size(); }
  const std::vector<double>& q0() const { return q0_; }
  const std::vector<double>& q1() const { return q1_; }
  // Likelihood ratios q1/q0, one per outcome.
  const std::vector<double>& ratios() const { return lr_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t outcome_index(const std::string& label) const;

 private:
  int id_;
  std::vector<std::string> labels_;
  std::vector<double> q0_, q1_, lr_;
};

class Instance {
 public:
  // Actions dominated on [0,1] by another action are dropped (lower id kept
  // on exact ties). lambda == 0 is accepted as a degenerate test case.
  Instance(std::vector<ActionPayoff> actions, std::vector<Experiment> experiments,
           double lambda, double r);

  const std::vector<ActionPayoff>& actions() const { return actions_; }
  const std::vector<ActionPayoff>& removed_actions() const { return removed_; }
  const std::vector<Experiment>& experiments() const { return experiments_; }
  double lambda() const { return lambda_; }
  double r() const { return r_; }
  // Expected discount over one inter-vote gap, Lambda / (Lambda + r).
  double discount() const { return lambda_ / (lambda_ + r_); }
  // Index into experiments() of the experiment with the given id, or -1.
  int experiment_index(int id) const;

 private:
  std::vector<ActionPayoff> actions_;
  std::vector<ActionPayoff> removed_;
  std::vector<Experiment> experiments_;
  double lambda_;
  double r_;
};

struct TerminalValue {
  double value = 0.0;
  std::vector<int> argmax;  // action ids within 1e-12 of the max
};

TerminalValue terminal_payoff(const std::vector<ActionPayoff>& actions, double delta);
TerminalValue terminal_payoff(const Instance& inst, double delta);
// G(delta) without the argmax bookkeeping.
double terminal_value(const std::vector<ActionPayoff>& actions, double delta);
// Position in `actions` of the lowest-id maximizer.
std::size_t best_action(const std::vector<ActionPayoff>& actions, double delta);

double likelihood_ratio(const Experiment& e, std::size_t x);
double likelihood_ratio(const Experiment& e, const std::string& label);

double belief_update(double delta, const Experiment& e, std::size_t x);
// Jump eta = belief_update - delta, written in closed form.
double jump_size(double delta, const Experiment& e, std::size_t x);

struct PosteriorAtom {
  double posterior = 0.0;
  double prob = 0.0;
};

std::vector<PosteriorAtom> posterior_distribution(double delta, const Experiment& e);

// a dominates b in convex order of posteriors at every delta of `mesh`.
// Binary pairs use likelihood-ratio range containment instead (exact).
bool convex_order_dominates(const Experiment& a, const Experiment& b,
                            const std::vector<double>& mesh);

struct PruneResult {
  std::vector<Experiment> kept;
  std::vector<Experiment> eliminated;
};

// Empty mesh selects the default 101-point mesh for non-binary experiments.
PruneResult prune_dominated(const std::vector<Experiment>& experiments,
                            const std::vector<double>& mesh = {});

}  // namespace seqexp
