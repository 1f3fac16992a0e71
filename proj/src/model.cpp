#include "seqexp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace seqexp {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kTieTol = 1e-12;

std::string exp_name(int id) { return "experiment " + std::to_string(id); }

void validate_row(int id, const std::vector<double>& q, const char* which) {
  double sum = 0.0;
  for (double p : q) {
    if (!std::isfinite(p) || p <= 0.0 || p > 1.0)
      throw std::invalid_argument(exp_name(id) + ": " + which +
                                  " entries must lie in (0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw std::invalid_argument(exp_name(id) + ": " + which + " sums to " +
                                std::to_string(sum) + ", expected 1");
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

void check_ratio_range(const Experiment& e, double& lo, double& hi) {
  lo = *std::min_element(e.ratios().begin(), e.ratios().end());
  hi = *std::max_element(e.ratios().begin(), e.ratios().end());
}

// E[(Z - c)^+] for the posterior law of e at delta.
double hinge_expectation(double delta, const Experiment& e, double c) {
  double s = 0.0;
  for (const auto& a : posterior_distribution(delta, e))
    s += a.prob * std::max(a.posterior - c, 0.0);
  return s;
}

}  // namespace

Experiment::Experiment(int id, std::vector<double> q0, std::vector<double> q1)
    : Experiment(id, default_labels(q0.size()), q0, q1) {}

Experiment::Experiment(int id, std::vector<std::string> labels, std::vector<double> q0,
                       std::vector<double> q1)
    : id_(id), labels_(std::move(labels)), q0_(std::move(q0)), q1_(std::move(q1)) {
  if (q0_.empty() || q0_.size() != q1_.size() || labels_.size() != q0_.size())
    throw std::invalid_argument(exp_name(id_) + ": outcome rows differ in length");
  validate_row(id_, q0_, "q0");
  validate_row(id_, q1_, "q1");
  bool informative = false;
  for (std::size_t x = 0; x < q0_.size(); ++x) informative |= (q0_[x] != q1_[x]);
  if (!informative)
    throw std::invalid_argument(exp_name(id_) + ": uninformative (q0 == q1)");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size())
    throw std::invalid_argument(exp_name(id_) + ": duplicate outcome label");
  lr_.resize(q0_.size());
  for (std::size_t x = 0; x < q0_.size(); ++x) lr_[x] = q1_[x] / q0_[x];
}

std::size_t Experiment::outcome_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw std::domain_error(exp_name(id_) + ": unknown outcome '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

Instance::Instance(std::vector<ActionPayoff> actions, std::vector<Experiment> experiments,
                   double lambda, double r)
    : experiments_(std::move(experiments)), lambda_(lambda), r_(r) {
  if (actions.size() < 2) throw std::invalid_argument("instance needs at least 2 actions");
  if (experiments_.empty()) throw std::invalid_argument("instance needs at least 1 experiment");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_))
    throw std::invalid_argument("lambda must be finite and nonnegative");
  if (!(r_ > 0.0) || !std::isfinite(r_)) throw std::invalid_argument("r must be positive");
  std::set<int> ids;
  for (const auto& a : actions) {
    if (!std::isfinite(a.alpha) || !std::isfinite(a.beta))
      throw std::invalid_argument("action " + std::to_string(a.id) + ": non-finite payoff");
    if (!ids.insert(a.id).second)
      throw std::invalid_argument("duplicate action id " + std::to_string(a.id));
  }
  ids.clear();
  for (const auto& e : experiments_)
    if (!ids.insert(e.id()).second)
      throw std::invalid_argument("duplicate experiment id " + std::to_string(e.id()));

  // Dominance on [0,1] is decided at the endpoints.
  for (std::size_t a = 0; a < actions.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < actions.size() && !dominated; ++b) {
      if (a == b) continue;
      double da0 = actions[b].at(0.0) - actions[a].at(0.0);
      double da1 = actions[b].at(1.0) - actions[a].at(1.0);
      if (da0 < -kTieTol || da1 < -kTieTol) continue;
      bool identical = std::abs(da0) <= kTieTol && std::abs(da1) <= kTieTol;
      dominated = !identical || actions[b].id < actions[a].id;
    }
    (dominated ? removed_ : actions_).push_back(actions[a]);
  }

  // G is convex, so its minimum sits at an endpoint or a pairwise crossing.
  std::vector<double> probes{0.0, 1.0};
  for (std::size_t a = 0; a < actions_.size(); ++a)
    for (std::size_t b = a + 1; b < actions_.size(); ++b) {
      double db = actions_[a].beta - actions_[b].beta;
      if (db == 0.0) continue;
      double x = (actions_[b].alpha - actions_[a].alpha) / db;
      if (x > 0.0 && x < 1.0) probes.push_back(x);
    }
  for (double x : probes)
    if (terminal_value(actions_, x) < -kTieTol)
      throw std::invalid_argument("terminal payoff G is negative at delta=" + std::to_string(x));
}

int Instance::experiment_index(int id) const {
  for (std::size_t i = 0; i < experiments_.size(); ++i)
    if (experiments_[i].id() == id) return static_cast<int>(i);
  return -1;
}

double terminal_value(const std::vector<ActionPayoff>& actions, double delta) {
  double best = -INFINITY;
  for (const auto& a : actions) best = std::max(best, a.at(delta));
  return best;
}

std::size_t best_action(const std::vector<ActionPayoff>& actions, double delta) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < actions.size(); ++a) {
    double d = actions[a].at(delta) - actions[best].at(delta);
    if (d > kTieTol || (d >= -kTieTol && actions[a].id < actions[best].id)) best = a;
  }
  return best;
}

TerminalValue terminal_payoff(const std::vector<ActionPayoff>& actions, double delta) {
  TerminalValue out;
  out.value = terminal_value(actions, delta);
  for (const auto& a : actions)
    if (a.at(delta) >= out.value - kTieTol) out.argmax.push_back(a.id);
  std::sort(out.argmax.begin(), out.argmax.end());
  return out;
}

TerminalValue terminal_payoff(const Instance& inst, double delta) {
  return terminal_payoff(inst.actions(), delta);
}

double likelihood_ratio(const Experiment& e, std::size_t x) {
  if (x >= e.size())
    throw std::domain_error(exp_name(e.id()) + ": outcome index out of range");
  return e.ratios()[x];
}

double likelihood_ratio(const Experiment& e, const std::string& label) {
  return e.ratios()[e.outcome_index(label)];
}

double belief_update(double delta, const Experiment& e, std::size_t x) {
  double l = likelihood_ratio(e, x);
  return delta / (delta + (1.0 - delta) * l);
}

double jump_size(double delta, const Experiment& e, std::size_t x) {
  double l = likelihood_ratio(e, x);
  return (1.0 - delta) * delta * (1.0 - l) / (delta + (1.0 - delta) * l);
}

std::vector<PosteriorAtom> posterior_distribution(double delta, const Experiment& e) {
  std::vector<PosteriorAtom> out(e.size());
  for (std::size_t x = 0; x < e.size(); ++x) {
    out[x].prob = delta * e.q0()[x] + (1.0 - delta) * e.q1()[x];
    out[x].posterior = belief_update(delta, e, x);
  }
  return out;
}

bool convex_order_dominates(const Experiment& a, const Experiment& b,
                            const std::vector<double>& mesh) {
  if (a.size() == 2 && b.size() == 2) {
    double alo, ahi, blo, bhi;
    check_ratio_range(a, alo, ahi);
    check_ratio_range(b, blo, bhi);
    return alo <= blo + kTieTol && bhi <= ahi + kTieTol;
  }
  // Hinge functions kinked at the union of atoms characterize convex order
  // between finite laws with equal means.
  for (double delta : mesh) {
    std::vector<double> kinks;
    for (const auto& p : posterior_distribution(delta, a)) kinks.push_back(p.posterior);
    for (const auto& p : posterior_distribution(delta, b)) kinks.push_back(p.posterior);
    for (double c : kinks)
      if (hinge_expectation(delta, a, c) < hinge_expectation(delta, b, c) - kTieTol)
        return false;
  }
  return true;
}

PruneResult prune_dominated(const std::vector<Experiment>& experiments,
                            const std::vector<double>& mesh_in) {
  std::vector<double> mesh = mesh_in;
  if (mesh.empty())
    for (int i = 0; i <= 100; ++i) mesh.push_back(i / 100.0);

  const std::size_t n = experiments.size();
  PruneResult out;
  for (std::size_t b = 0; b < n; ++b) {
    bool eliminated = false;
    for (std::size_t a = 0; a < n && !eliminated; ++a) {
      if (a == b || !convex_order_dominates(experiments[a], experiments[b], mesh)) continue;
      bool mutual = convex_order_dominates(experiments[b], experiments[a], mesh);
      eliminated = !mutual || experiments[a].id() < experiments[b].id();
    }
    (eliminated ? out.eliminated : out.kept).push_back(experiments[b]);
  }
  return out;
}

}  // namespace seqexp
