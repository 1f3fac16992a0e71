#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "seqexp/mdp.hpp"
#include "seqexp/mnl.hpp"
#include "seqexp/model.hpp"
#include "seqexp/policy.hpp"

namespace seqexp {

// PoissonGaps draws exponential inter-vote gaps at rate Lambda and discounts by
// exp(-r t). UnitGaps discounts each vote by Lambda / (Lambda + r); both give
// the same expected discounted value.
enum class TimeModel { PoissonGaps, UnitGaps };

struct SimConfig {
  std::uint64_t seed = 1;
  long replications = 1000;
  long horizon = -1;  // votes; -1 = run until the policy stops
  TimeModel time_model = TimeModel::UnitGaps;
  int threads = 1;
  bool record_events = false;
  std::optional<Hypothesis> force_theta;  // sample Theta from delta0 when empty
  long unbounded_cap = 10000000;          // safety cap for horizon = -1
};

// Per-replication stream: splitmix64 of (root seed, replication index).
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index);

// Runs fn(i) for i in [0, n) on up to `threads` workers. fn must write only to
// slot i of its output, which makes results independent of the thread count.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

struct SimEvent {
  double time = 0.0;
  double belief_before = 0.0;
  int experiment = -1;  // position in Instance::experiments()
  int outcome = -1;
  double belief_after = 0.0;
};

struct Trajectory {
  Hypothesis theta = Hypothesis::Theta0;
  std::vector<SimEvent> events;  // only with record_events
  long votes = 0;
  double stop_time = 0.0;
  double discount = 1.0;
  double terminal_belief = 0.0;
  int terminal_action = -1;    // position in Instance::actions()
  bool stopped = true;         // false when the horizon forced the decision
  double reward_belief = 0.0;  // discount * R_a(terminal belief)
  double reward_true = 0.0;    // discount * R_a(Theta)
};

// Randomized policies are sampled through mixture(); deterministic ones use
// decide(). With a finite horizon the decision at the horizon is best_action.
std::vector<Trajectory> run_policy(const Instance& inst, const Policy& policy, double delta0,
                                   const SimConfig& cfg);

struct SampleStats {
  double mean = 0.0, max = 0.0, stdev = 0.0, stderr_ = 0.0;
  long n = 0;
};
SampleStats summarize(const std::vector<double>& xs);

struct MetricRow {
  std::string metric, policy;
  double param = 0.0;
  SampleStats stats;
};

class MetricTable {
 public:
  void add(const std::string& metric, const std::string& policy, double param,
           const std::vector<double>& samples);
  const std::vector<MetricRow>& rows() const { return rows_; }
  const MetricRow& find(const std::string& metric, const std::string& policy,
                        double param) const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<MetricRow> rows_;
};

// max over interior nodes with Pi > 1e-12 of (Pi - Pi_j) / Pi.
double optimality_gap(const ValueFunction& optimal, const ValueFunction& v);
// Solves the instance and evaluates the policy exactly on the grid.
double optimality_gap(const Instance& inst, const Policy& policy, const BeliefGrid& grid,
                      double tol = 1e-9);

// Trapezoidal integral over [0,1] of (ref - v) / ref; nodes with ref <= 1e-12
// contribute zero.
double relative_error_integral(const ValueFunction& ref, const ValueFunction& v);
double relative_error_integral(const Instance& inst, const Policy& ref, const Policy& p,
                               const BeliefGrid& grid);

// max over nodes of (Pi_policy - Pi_T) / Pi_policy with Pi_T the T-vote budget value.
double value_of_stopping(const ValueFunction& policy_value, const ValueFunction& budget_value);
double value_of_stopping(const Instance& inst, const Policy& policy, int T, BudgetMode mode,
                         const BeliefGrid& grid);

// ---------------------------------------------------------------------------
// Regret on an MNL market with singleton launches.

enum class RegretRule { MaxVol, TTPS, MNLBandit, Clairvoyant };
std::string to_string(RegretRule rule);

struct RegretSetup {
  MnlMarket market;
  Instance instance;                  // singleton actions, every informative display
  std::vector<int> ttps_candidates;   // per action position
  double ttps_beta = 0.5;
  double bandit_c = 1.0;
  bool mv_keep_voting = false;        // keep offering MV displays after the stop signal
};

RegretSetup make_regret_setup(const MnlMarket& market);

struct RegretCurve {
  std::vector<long> checkpoints;
  // [checkpoint][replication]
  std::vector<std::vector<double>> terminal, cumulative_per_vote;
};

// One pass of max(checkpoints) votes per replication, uniform prior. The
// terminal action at T depends only on the first T votes, so every checkpoint
// is an exact T-vote experiment. Per-vote regret is the clairvoyant
// per-vote revenue minus the revenue of the offered assortment under Theta.
RegretCurve regret_curve(const RegretSetup& setup, RegretRule rule,
                         const std::vector<long>& checkpoints, const SimConfig& cfg,
                         const Policy* mv_policy = nullptr);

// Clairvoyant and realized launch rewards under Theta.
double clairvoyant_reward(const Instance& inst, Hypothesis theta);
double clairvoyant_revenue(const MnlMarket& m, Hypothesis theta);

}  // namespace seqexp
