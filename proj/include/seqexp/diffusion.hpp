#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqexp/model.hpp"

namespace seqexp {

struct AsymptoticExperiment {
  int experiment_id = 0;
  std::vector<double> kernel;
  std::vector<double> alpha0;
  std::vector<double> alpha1;
  double vol_term = 0.0;   // sum_x (alpha1 - alpha0)^2 kernel
  double objective = 0.0;  // min-max relative deviation reached by the kernel
  double centering = 0.0;  // largest |kernel-mean of alpha| removed after recovery

  bool degenerate() const { return !(vol_term > 0.0); }
};

// Min-max kernel fit followed by alpha = sqrt(lambda) * (Q / kernel - 1).
AsymptoticExperiment calibrate_kernel(const Experiment& e, double lambda);

// Asymptotic data given directly (kernel and unit-scale alphas).
AsymptoticExperiment make_asymptotic(int id, std::vector<double> kernel,
                                     std::vector<double> alpha0, std::vector<double> alpha1);

struct MaxVolResult {
  int winner_id = 0;
  std::size_t winner_index = 0;
  double vol_term = 0.0;
  bool degenerate = false;
};

MaxVolResult select_max_vol(const std::vector<AsymptoticExperiment>& asyms);

struct DiffusionModel {
  double sigma2 = 0.0;  // belief volatility per unit time
  double r = 0.0;
  int selected_experiment = -1;
};

// sigma2 = rate_multiplier * vol_term of the winner. Calibrated alphas already
// carry sqrt(lambda), so their multiplier is 1; unit-scale alphas use lambda.
DiffusionModel make_model(const std::vector<AsymptoticExperiment>& asyms, double rate_multiplier,
                          double r);

double gamma_exponent(double r, double sigma2);

struct PairSolution {
  int i = 0, j = 0;       // action ids; i is the branch that is larger at 0
  ActionPayoff left, right;
  double gamma = 0.0;
  double delta_hat = 0.0;
  double lo = 0.0, hi = 0.0;
  double c0 = 0.0, c1 = 0.0;
  bool degenerate = false;
  // Closed form anchored at lo: A * phi0(d)/phi0(lo) + B * phi1(d)/phi1(lo).
  double anchor_a = 0.0, anchor_b = 0.0;

  double value(double delta) const;
  double derivative(double delta) const;
  // Continuation closed form on all of (0,1), ignoring the thresholds.
  double closed_form(double delta) const;
  long double closed_form_ld(long double delta) const;
  double closed_form_derivative(double delta) const;
  double closed_form_second(double delta) const;
  double payoff(double delta) const;  // max of the two branches
};

// Throws std::invalid_argument when the branches do not cross inside (0,1)
// or cross at a negative value.
PairSolution solve_pair(const ActionPayoff& a, const ActionPayoff& b, const DiffusionModel& model);

struct Segment {
  double lo = 0.0, hi = 0.0;
  bool stop = true;
  int action_id = -1;  // for stop segments
  int pair = -1;       // index into DiffusionValue::pairs() for continuation
};

struct QviReport {
  double continuation_residual = 0.0;  // max |H V| on the continuation set
  double intervention_residual = 0.0;  // max H V on the intervention set
  double min_gap = 0.0;                // min V - G over the mesh
  std::size_t checked_nodes = 0;
};

class DiffusionValue {
 public:
  DiffusionValue(std::vector<ActionPayoff> actions, DiffusionModel model,
                 std::vector<PairSolution> pairs, std::vector<std::string> skipped);

  const std::vector<PairSolution>& pairs() const { return pairs_; }
  const std::vector<std::string>& skipped() const { return skipped_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<double> breakpoints() const;
  const DiffusionModel& model() const { return model_; }
  const std::vector<ActionPayoff>& actions() const { return actions_; }

  double value(double delta) const;
  long double value_ld(long double delta) const;
  // One-sided derivative of the piece active just left (side < 0) or right of delta.
  double derivative(double delta, int side) const;
  bool in_intervention(double delta) const;
  bool in_continuation(double delta) const { return !in_intervention(delta); }
  // Continuation pair index at delta, -1 inside the intervention set.
  int active_pair(double delta) const;
  const Segment& segment_at(double delta) const;
  std::vector<std::pair<double, double>> continuation_intervals() const;

 private:
  std::vector<ActionPayoff> actions_;
  DiffusionModel model_;
  std::vector<PairSolution> pairs_;
  std::vector<std::string> skipped_;
  std::vector<Segment> segments_;

  int argmax_pair(double delta) const;
  void build_segments();
};

QviReport qvi_residual(const DiffusionValue& dv, double mesh = 1e-3);

// Builds all pair solutions, composes their maximum and verifies the QVI
// residuals; a violation throws std::runtime_error.
DiffusionValue compose_value(const Instance& inst, const DiffusionModel& model,
                             bool verify = true);
DiffusionValue compose_value(const std::vector<ActionPayoff>& actions, const DiffusionModel& model,
                             bool verify = true);

// Calibration of every experiment at the instance rate, the max-volatility
// winner and the composed value under it.
struct AsymptoticPlan {
  std::vector<AsymptoticExperiment> asymptotic;  // instance experiment order
  MaxVolResult winner;
  DiffusionModel model;
  DiffusionValue value;
};

AsymptoticPlan plan_asymptotic(const Instance& inst, bool verify = true);

struct StoppingStats {
  double p_hi = 0.0;
  double expected_tau = 0.0;
};

StoppingStats stopping_stats(double lo, double hi, double sigma2, double delta);
StoppingStats stopping_stats(const PairSolution& pair, const DiffusionModel& model, double delta);

// Euler-Maruyama path of d delta = sigma delta (1 - delta) dW, clamped to [0,1].
std::vector<double> simulate_sde(const DiffusionModel& model, double delta0, double dt,
                                 double horizon, std::uint64_t seed);

void write_pairs_csv(const std::string& path, const DiffusionValue& dv);
void write_diffusion_csv(const std::string& path, const DiffusionValue& dv, double mesh);

}  // namespace seqexp
