#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seqexp/diffusion.hpp"
#include "seqexp/mnl.hpp"
#include "seqexp/model.hpp"
#include "seqexp/policy_base.hpp"

namespace seqexp {

// E_0[(1 - L)^2 / (delta + (1 - delta) L)] for one experiment.
double mv_criterion(const Experiment& e, double delta);

// Position of the criterion maximizer among `candidates` (all experiments when
// empty); ties go to the lower experiment id.
int argmax_mv(const Instance& inst, double delta, const std::vector<int>& candidates = {});

// Expected terminal payoff after one outcome of experiment e.
double lookahead_value(const Instance& inst, const Experiment& e, double delta);

// Stop region shared by the A, MV, MR and F rules.
class InterventionRegion {
 public:
  explicit InterventionRegion(const DiffusionValue& dv);
  bool stop(double delta) const;
  const std::vector<std::pair<double, double>>& continuation() const { return cont_; }

 private:
  std::vector<std::pair<double, double>> cont_;
};

class AsymptoticPolicy : public Policy {
 public:
  AsymptoticPolicy(const Instance& inst, const DiffusionValue& dv, int winner_id);
  PolicyKind kind() const override { return PolicyKind::Asymptotic; }
  Decision decide(double delta) const override;
  int experiment_at(double) const override { return winner_; }

 private:
  std::vector<ActionPayoff> actions_;
  InterventionRegion region_;
  int winner_;
};

class MaxVolPolicy : public Policy {
 public:
  MaxVolPolicy(const Instance& inst, const DiffusionValue& dv);
  PolicyKind kind() const override { return PolicyKind::MaxVol; }
  Decision decide(double delta) const override;
  int experiment_at(double delta) const override;

 protected:
  MaxVolPolicy(const Instance& inst, const DiffusionValue& dv, std::vector<int> candidates);
  Instance inst_;
  InterventionRegion region_;
  std::vector<int> candidates_;
};

// MV criterion restricted to candidate displays (the interval sets of an MNL
// market). An empty candidate list falls back to plain MV and sets fallback().
class MaxRangePolicy : public MaxVolPolicy {
 public:
  MaxRangePolicy(const Instance& inst, const DiffusionValue& dv, std::vector<int> candidates);
  PolicyKind kind() const override { return PolicyKind::MaxRange; }
  bool fallback() const { return fallback_; }

 private:
  bool fallback_ = false;
};

class FullDisplayPolicy : public Policy {
 public:
  FullDisplayPolicy(const Instance& inst, const DiffusionValue& dv, int full_display_id);
  PolicyKind kind() const override { return PolicyKind::FullDisplay; }
  Decision decide(double delta) const override;
  int experiment_at(double) const override { return full_; }

 private:
  std::vector<ActionPayoff> actions_;
  InterventionRegion region_;
  int full_;
};

// One-step look-ahead with a discounted myopic stop test.
class LookAheadPolicy : public Policy {
 public:
  explicit LookAheadPolicy(const Instance& inst) : inst_(inst) {}
  PolicyKind kind() const override { return PolicyKind::LookAhead; }
  Decision decide(double delta) const override;
  int experiment_at(double delta) const override;

 private:
  Instance inst_;
};

// Randomizes between the displays {0,i} of the two best launch actions at the
// current belief. Never stops; the caller fixes the horizon.
class TtpsPolicy : public Policy {
 public:
  // `candidates[k]` is the experiment position paired with action position k
  // (-1 for actions without a display, such as discard).
  TtpsPolicy(const Instance& inst, std::vector<int> candidates, double beta);
  PolicyKind kind() const override { return PolicyKind::TTPS; }
  Decision decide(double delta) const override;
  int experiment_at(double delta) const override;
  std::vector<std::pair<int, double>> mixture(double delta) const override;
  // Draws from mixture(delta).
  int sample(double delta, std::mt19937_64& rng) const;
  double beta() const { return beta_; }

 private:
  std::vector<ActionPayoff> actions_;
  std::vector<int> candidates_;
  double beta_;
};

// Epoch-based UCB on MNL attraction scores. Stateful: one instance per run.
class MnlBandit {
 public:
  MnlBandit(const MnlMarket& market, double c = 1.0);
  // Assortment to offer at the next vote.
  const Display& offer() const { return current_; }
  // Product id chosen by the voter (0 = no purchase).
  void observe(int product_id);
  // Point estimates of the attraction scores, products() order.
  std::vector<double> estimates() const;
  std::vector<double> ucb() const { return ucb_; }
  // Singleton launch maximizing margin * v / (1 + v) under the point estimates.
  int terminal_action() const;
  long epochs() const { return epoch_; }

 private:
  const MnlMarket& m_;
  double c_;
  std::vector<long> picks_, offered_epochs_;
  std::vector<double> ucb_;
  std::vector<long> epoch_picks_;
  Display current_;
  long epoch_ = 0;
  void finish_epoch();
};

}  // namespace seqexp
