#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqexp/mnl.hpp"
#include "seqexp/model.hpp"
#include "seqexp/sim.hpp"

namespace seqexp {

// Canonical instances used by the presets.
std::vector<ActionPayoff> four_line_payoffs();
// Nine binary experiments, Lambda = 8, r = 0.5.
Instance worked_example();
// Experiments 2..7 with theta1 law Q (1 + a / sqrt(k)), Lambda = 8k, r = 0.5.
Instance scaled_example(double k);
// Five-product launch market scored by attraction exp(u); mu = 1, lambda_s = r.
MnlMarket launch_market(double lambda_v = 1.0, double r = 1.0);

// Random MNL ensembles: instance i draws its utilities from stream_seed(seed, i),
// so results do not depend on the worker count.
struct EnsembleConfig {
  int instances = 100;
  int products = 5;
  double mu = 1.0;
  double lambda = 1.0;
  double r = 0.05;
  std::uint64_t seed = 1;
  int threads = 1;
};

MnlMarket ensemble_market(const EnsembleConfig& cfg, int index);
// Four-line payoffs with every informative display as an experiment.
Instance ensemble_instance(const MnlMarket& m);

// Optimality gaps of MV and A against the DP optimum over the noisy-preferences
// family; Lambda = lambda * k. meshes[j] is the grid used at ks[j].
struct GapSuiteConfig {
  EnsembleConfig ensemble;
  std::vector<double> ks{1.0, 1e2, 1e4};
  std::vector<double> meshes{1e-3, 1e-3, 1e-4};
  double tol = 1e-9;
};
// Rows: metric "optimality_gap", policies "MV" and "A", param k.
MetricTable run_gap_suite(const GapSuiteConfig& cfg);

struct BenchmarkSuiteConfig {
  EnsembleConfig ensemble{100, 10, 1.0, 2.0, 0.05, 1, 1};
  double mesh = 1e-3;
  double tol = 1e-9;
};
// Rows: metric "relative_error" against MV, policies "MR", "LA", "F", param 0.
MetricTable run_benchmark_suite(const BenchmarkSuiteConfig& cfg);

struct StoppingSuiteConfig {
  EnsembleConfig ensemble{100, 5, 1.0, 2.0, 0.05, 1, 1};
  std::vector<int> budgets;  // empty = 1..200
  bool full_display = true;
  double mesh = 1e-3;
  double tol = 1e-9;
};
// Rows: metrics "stopping_exactly" and "stopping_at_most", policies "MV" (and
// "F"), param T.
MetricTable run_stopping_suite(const StoppingSuiteConfig& cfg);

struct RegretSuiteConfig {
  std::optional<MnlMarket> market;  // launch_market(lambda_v, r) when empty
  double lambda_v = 1.0;
  double r = 1e-4;
  long replications = 500;
  std::vector<long> checkpoints{0, 10, 100, 1000, 10000};
  std::vector<RegretRule> rules{RegretRule::MaxVol, RegretRule::TTPS, RegretRule::MNLBandit};
  double ttps_beta = 0.5;
  double bandit_c = 1.0;
  bool mv_keep_voting = false;
  std::uint64_t seed = 1;
  int threads = 1;
};
// Rows: "terminal_regret" and "cumulative_regret" per rule and checkpoint T,
// plus "clairvoyant_reward" (policy "Clairvoyant", param 0), the prior mean of
// the best launch reward.
MetricTable run_regret_suite(const RegretSuiteConfig& cfg);

}  // namespace seqexp
