#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "seqexp/diffusion.hpp"
#include "seqexp/model.hpp"

namespace seqexp {

struct MnlProduct {
  int id = 0;  // 0 is reserved for the no-purchase option
  double u0 = 0.0, u1 = 0.0;
  double price = 0.0, cost = 0.0, launch_cost = 0.0;

  double delta_u() const { return u1 - u0; }
  double margin() const { return price - cost; }
  double utility(Hypothesis h) const { return h == Hypothesis::Theta0 ? u0 : u1; }
};

// A display is a set of product ids; the no-purchase option 0 is implicit in
// every display and every assortment.
using Display = std::vector<int>;

class MnlMarket {
 public:
  // Products are re-indexed in ascending order of delta_u (ties by id); ids are kept.
  MnlMarket(std::vector<MnlProduct> products, double mu, double lambda_v, double lambda_s,
            double r, double discard_payoff = 0.0);

  const std::vector<MnlProduct>& products() const { return products_; }  // sorted
  std::size_t size() const { return products_.size(); }
  const MnlProduct& product(int id) const;
  double mu() const { return mu_; }
  double lambda_v() const { return lambda_v_; }
  double lambda_s() const { return lambda_s_; }
  double r() const { return r_; }
  double discard_payoff() const { return discard_; }

 private:
  std::vector<MnlProduct> products_;
  double mu_, lambda_v_, lambda_s_, r_, discard_;
};

// Probabilities over {0} followed by the display members in the given order.
std::vector<double> choice_probs(const MnlMarket& m, const Display& display, Hypothesis h);

// Bitmask over product ids; the experiment id of a display.
int display_id(const Display& display);
Display display_from_id(int id);

Experiment experiment_from_display(const MnlMarket& m, const Display& display);

// Every non-empty display (power set), ids ascending. Uninformative displays are skipped.
std::vector<Display> all_displays(const MnlMarket& m);
std::vector<Experiment> display_experiments(const MnlMarket& m, const std::vector<Display>& ds);

// Affine launch payoff of an assortment (excluding 0).
ActionPayoff sales_payoff(const MnlMarket& m, const Display& assortment, int action_id);
// Singleton launches (action id = product id) plus discard (action id 0).
std::vector<ActionPayoff> singleton_actions(const MnlMarket& m);

// Noisy-preferences family: mu / sqrt(k), lambda_v * k.
MnlMarket np_scaling(const MnlMarket& m, double k);

// Interval sets {1..i} u {j..n} over sorted positions, 0 <= i < j <= n + 1,
// non-empty and distinct, returned as product ids. Includes lower-tail sets.
std::vector<Display> interval_sets(const MnlMarket& m);
// The same family for n sorted positions 1..n.
std::vector<std::vector<int>> interval_positions(int n);

// (1/|E|) sum over E u {0} of (du - mean du)^2 with du_0 = 0.
double np_volatility_score(const std::vector<double>& du, const std::vector<int>& positions);
// Best interval set for the given delta_u vector (indices into du, 1-based);
// same-sign inputs give the single most extreme prototype.
std::vector<int> np_optimal_display(const std::vector<double>& du);

struct IhResult {
  MnlMarket market;
  std::vector<Display> displays;
  std::vector<AsymptoticExperiment> asymptotic;  // same order as displays
  std::size_t best = 0;                          // largest vol_term
  bool degenerate = false;                       // no informative display
};

// Indistinguishable-hypotheses family: u1 = u0 + xi / sqrt(k); xi indexed like
// products() (sorted order), xi_0 = 0 for the no-purchase option.
IhResult ih_scaling(const MnlMarket& m, const std::vector<double>& xi, double k,
                    const std::vector<Display>& displays);

// Utilities uniform on [0,1]; prices and costs zero (unused by the fixed G).
MnlMarket random_market(int n, double mu, double lambda_v, std::mt19937_64& rng);

// Expected per-vote revenue sum_i margin_i Q(i, S, theta) of offering S.
double assortment_revenue(const MnlMarket& m, const Display& s, Hypothesis h);
// Revenue-maximizing assortment (revenue-ordered prefix) for attraction scores v
// indexed by products() order, with margins taken from the market.
Display best_assortment(const MnlMarket& m, const std::vector<double>& v);

}  // namespace seqexp
