#include "seqexp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqexp {

double mv_criterion(const Experiment& e, double delta) {
  double s = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    const double l = e.ratios()[x];
    s += e.q0()[x] * (1.0 - l) * (1.0 - l) / (delta + (1.0 - delta) * l);
  }
  return s;
}

int argmax_mv(const Instance& inst, double delta, const std::vector<int>& candidates) {
  const auto& exps = inst.experiments();
  int best = -1;
  double bv = -1.0;
  auto consider = [&](int k) {
    const double v = mv_criterion(exps[k], delta);
    const double tie = 1e-12 * std::max(1.0, bv);
    if (best < 0 || v > bv + tie || (std::abs(v - bv) <= tie && exps[k].id() < exps[best].id())) {
      bv = std::max(v, bv);
      best = k;
    }
  };
  if (candidates.empty())
    for (int k = 0; k < static_cast<int>(exps.size()); ++k) consider(k);
  else
    for (int k : candidates) consider(k);
  return best;
}

double lookahead_value(const Instance& inst, const Experiment& e, double delta) {
  double m = 0.0;
  for (const auto& a : posterior_distribution(delta, e))
    m += a.prob * terminal_value(inst.actions(), a.posterior);
  return m;
}

InterventionRegion::InterventionRegion(const DiffusionValue& dv)
    : cont_(dv.continuation_intervals()) {}

bool InterventionRegion::stop(double delta) const {
  for (const auto& [lo, hi] : cont_)
    if (delta > lo && delta < hi) return false;
  return true;
}

namespace {

int position_of(const Instance& inst, int id, const char* who) {
  const int k = inst.experiment_index(id);
  if (k < 0) throw std::invalid_argument(std::string(who) + ": unknown experiment id " +
                                         std::to_string(id));
  return k;
}

}  // namespace

AsymptoticPolicy::AsymptoticPolicy(const Instance& inst, const DiffusionValue& dv, int winner_id)
    : actions_(inst.actions()), region_(dv), winner_(position_of(inst, winner_id, "A policy")) {}

Decision AsymptoticPolicy::decide(double delta) const {
  if (region_.stop(delta))
    return Decision::stop_with(static_cast<int>(best_action(actions_, delta)));
  return Decision::run(winner_);
}

MaxVolPolicy::MaxVolPolicy(const Instance& inst, const DiffusionValue& dv)
    : inst_(inst), region_(dv) {}

MaxVolPolicy::MaxVolPolicy(const Instance& inst, const DiffusionValue& dv,
                           std::vector<int> candidates)
    : inst_(inst), region_(dv), candidates_(std::move(candidates)) {}

Decision MaxVolPolicy::decide(double delta) const {
  if (region_.stop(delta))
    return Decision::stop_with(static_cast<int>(best_action(inst_.actions(), delta)));
  return Decision::run(experiment_at(delta));
}

int MaxVolPolicy::experiment_at(double delta) const {
  return argmax_mv(inst_, delta, candidates_);
}

MaxRangePolicy::MaxRangePolicy(const Instance& inst, const DiffusionValue& dv,
                               std::vector<int> candidates)
    : MaxVolPolicy(inst, dv, std::move(candidates)) {
  fallback_ = candidates_.empty();
  for (int k : candidates_)
    if (k < 0 || k >= static_cast<int>(inst.experiments().size()))
      throw std::invalid_argument("MR policy: candidate position out of range");
}

FullDisplayPolicy::FullDisplayPolicy(const Instance& inst, const DiffusionValue& dv,
                                     int full_display_id)
    : actions_(inst.actions()),
      region_(dv),
      full_(position_of(inst, full_display_id, "F policy")) {}

Decision FullDisplayPolicy::decide(double delta) const {
  if (region_.stop(delta))
    return Decision::stop_with(static_cast<int>(best_action(actions_, delta)));
  return Decision::run(full_);
}

Decision LookAheadPolicy::decide(double delta) const {
  const int k = experiment_at(delta);
  const double g = terminal_value(inst_.actions(), delta);
  const double m = lookahead_value(inst_, inst_.experiments()[k], delta);
  if (inst_.discount() * m <= g)
    return Decision::stop_with(static_cast<int>(best_action(inst_.actions(), delta)));
  return Decision::run(k);
}

int LookAheadPolicy::experiment_at(double delta) const {
  const auto& exps = inst_.experiments();
  int best = 0;
  double bv = lookahead_value(inst_, exps[0], delta);
  for (int k = 1; k < static_cast<int>(exps.size()); ++k) {
    const double v = lookahead_value(inst_, exps[k], delta);
    if (v > bv + 1e-12 * std::max(1.0, std::abs(bv))) {
      bv = v;
      best = k;
    }
  }
  return best;
}

TtpsPolicy::TtpsPolicy(const Instance& inst, std::vector<int> candidates, double beta)
    : actions_(inst.actions()), candidates_(std::move(candidates)), beta_(beta) {
  if (candidates_.size() != actions_.size())
    throw std::invalid_argument("TTPS: one candidate entry per action required");
  if (!(beta_ > 0.0 && beta_ <= 1.0)) throw std::invalid_argument("TTPS: beta must lie in (0,1]");
  if (std::none_of(candidates_.begin(), candidates_.end(), [](int k) { return k >= 0; }))
    throw std::invalid_argument("TTPS: no candidate experiments");
}

std::vector<std::pair<int, double>> TtpsPolicy::mixture(double delta) const {
  // Rank the actions that have a display by payoff at delta; ties to lower id.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < actions_.size(); ++k)
    if (candidates_[k] >= 0) order.push_back(k);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = actions_[a].at(delta), vb = actions_[b].at(delta);
    return va > vb || (va == vb && actions_[a].id < actions_[b].id);
  });
  if (order.size() == 1 || beta_ == 1.0) return {{candidates_[order[0]], 1.0}};
  return {{candidates_[order[0]], beta_}, {candidates_[order[1]], 1.0 - beta_}};
}

int TtpsPolicy::experiment_at(double delta) const { return mixture(delta).front().first; }

Decision TtpsPolicy::decide(double delta) const { return Decision::run(experiment_at(delta)); }

int TtpsPolicy::sample(double delta, std::mt19937_64& rng) const {
  const auto mix = mixture(delta);
  if (mix.size() == 1) return mix[0].first;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < mix[0].second ? mix[0].first : mix[1].first;
}

// ---------------------------------------------------------------------------

MnlBandit::MnlBandit(const MnlMarket& market, double c)
    : m_(market),
      c_(c),
      picks_(market.size(), 0),
      offered_epochs_(market.size(), 0),
      ucb_(market.size(), 1.0),
      epoch_picks_(market.size(), 0) {
  if (!(c_ > 0.0)) throw std::invalid_argument("MNL bandit: c must be > 0");
  current_ = best_assortment(m_, ucb_);
}

std::vector<double> MnlBandit::estimates() const {
  std::vector<double> v(m_.size(), 1.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (offered_epochs_[i] > 0)
      v[i] = static_cast<double>(picks_[i]) / static_cast<double>(offered_epochs_[i]);
  return v;
}

void MnlBandit::observe(int product_id) {
  if (product_id == 0) {
    finish_epoch();
    return;
  }
  for (std::size_t i = 0; i < m_.size(); ++i)
    if (m_.products()[i].id == product_id) {
      ++epoch_picks_[i];
      return;
    }
  throw std::invalid_argument("MNL bandit: unknown product id " + std::to_string(product_id));
}

void MnlBandit::finish_epoch() {
  ++epoch_;
  for (int id : current_) {
    for (std::size_t i = 0; i < m_.size(); ++i)
      if (m_.products()[i].id == id) {
        picks_[i] += epoch_picks_[i];
        ++offered_epochs_[i];
      }
  }
  std::fill(epoch_picks_.begin(), epoch_picks_.end(), 0);
  const double n = static_cast<double>(m_.size());
  const double lg = std::log(std::sqrt(n) * static_cast<double>(epoch_) + 1.0);
  const auto v = estimates();
  for (std::size_t i = 0; i < m_.size(); ++i)
    if (offered_epochs_[i] > 0)
      ucb_[i] = v[i] + std::sqrt(c_ * lg / static_cast<double>(offered_epochs_[i]));
  current_ = best_assortment(m_, ucb_);
}

int MnlBandit::terminal_action() const {
  const auto v = estimates();
  int best = m_.products()[0].id;
  double bv = -1.0;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const double val = m_.products()[i].margin() * v[i] / (1.0 + v[i]);
    const int id = m_.products()[i].id;
    if (val > bv || (val == bv && id < best)) {
      bv = val;
      best = id;
    }
  }
  return best;
}

}  // namespace seqexp
