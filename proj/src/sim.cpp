#include "seqexp/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "seqexp/csv.hpp"

namespace seqexp {

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 applied twice so neighbouring indices decorrelate fully.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(root) ^ (index * 0xd1b54a32d192ed03ULL));
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::clamp<long>(threads, 1, n));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

namespace {

std::size_t sample_index(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (std::size_t x = 0; x + 1 < p.size(); ++x) {
    acc += p[x];
    if (u < acc) return x;
  }
  return p.size() - 1;
}

double payoff_under(const ActionPayoff& a, Hypothesis h) {
  return h == Hypothesis::Theta0 ? a.under_theta0() : a.under_theta1();
}

std::string describe(const Trajectory& tr) {
  std::ostringstream os;
  os << "votes=" << tr.votes << " theta=" << (tr.theta == Hypothesis::Theta0 ? 0 : 1);
  const std::size_t shown = std::min<std::size_t>(tr.events.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) {
    const auto& e = tr.events[k];
    os << "\n  t=" << e.time << " delta=" << e.belief_before << " exp=" << e.experiment
       << " x=" << e.outcome << " -> " << e.belief_after;
  }
  if (tr.events.size() > shown) os << "\n  ...";
  os << "\n  last belief=" << tr.terminal_belief;
  return os.str();
}

Trajectory run_one(const Instance& inst, const Policy& policy, double delta0,
                   const SimConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> gap(inst.lambda() > 0.0 ? inst.lambda() : 1.0);
  Trajectory tr;
  tr.theta = cfg.force_theta ? *cfg.force_theta
                             : (unif(rng) < delta0 ? Hypothesis::Theta0 : Hypothesis::Theta1);
  const bool randomized = policy.kind() == PolicyKind::TTPS;
  const long cap = cfg.horizon >= 0 ? cfg.horizon : cfg.unbounded_cap;
  double delta = delta0, t = 0.0, disc = 1.0;
  int action = -1;
  while (true) {
    int k = -1;
    if (randomized) {
      const auto mix = policy.mixture(delta);
      double u = unif(rng), acc = 0.0;
      k = mix.back().first;
      for (const auto& [e, w] : mix)
        if (u < (acc += w)) {
          k = e;
          break;
        }
    } else {
      const auto d = policy.decide(delta);
      if (d.stop) action = d.action;
      else k = d.experiment;
    }
    if (action >= 0) break;
    if (tr.votes >= cap) {
      if (cfg.horizon < 0) {
        tr.terminal_belief = delta;
        throw std::runtime_error("run_policy: no stop within " + std::to_string(cap) +
                                 " votes; trajectory " + describe(tr));
      }
      tr.stopped = false;
      action = static_cast<int>(best_action(inst.actions(), delta));
      break;
    }
    if (inst.lambda() <= 0.0)
      throw std::invalid_argument("run_policy: experimenting with Lambda = 0 never observes a vote");
    const auto& e = inst.experiments()[k];
    if (cfg.time_model == TimeModel::PoissonGaps) {
      t += gap(rng);
      disc = std::exp(-inst.r() * t);
    } else {
      t += 1.0 / inst.lambda();
      disc *= inst.discount();
    }
    const auto x = sample_index(tr.theta == Hypothesis::Theta0 ? e.q0() : e.q1(), unif(rng));
    const double next = belief_update(delta, e, x);
    if (cfg.record_events)
      tr.events.push_back({t, delta, k, static_cast<int>(x), next});
    delta = next;
    ++tr.votes;
  }
  const auto& a = inst.actions()[action];
  tr.stop_time = t;
  tr.discount = disc;
  tr.terminal_belief = delta;
  tr.terminal_action = action;
  tr.reward_belief = disc * a.at(delta);
  tr.reward_true = disc * payoff_under(a, tr.theta);
  return tr;
}

}  // namespace

std::vector<Trajectory> run_policy(const Instance& inst, const Policy& policy, double delta0,
                                   const SimConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("run_policy: replications must be >= 1");
  if (!(delta0 >= 0.0 && delta0 <= 1.0)) throw std::invalid_argument("run_policy: delta0 not in [0,1]");
  std::vector<Trajectory> out(cfg.replications);
  parallel_for(cfg.replications, cfg.threads, [&](long i) {
    out[i] = run_one(inst, policy, delta0, cfg, stream_seed(cfg.seed, i));
  });
  return out;
}

SampleStats summarize(const std::vector<double>& xs) {
  SampleStats s;
  s.n = static_cast<long>(xs.size());
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / s.n;
  s.max = *std::max_element(xs.begin(), xs.end());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stdev = s.n > 1 ? std::sqrt(ss / (s.n - 1)) : 0.0;
  s.stderr_ = s.stdev / std::sqrt(static_cast<double>(s.n));
  return s;
}

void MetricTable::add(const std::string& metric, const std::string& policy, double param,
                      const std::vector<double>& samples) {
  rows_.push_back({metric, policy, param, summarize(samples)});
}

const MetricRow& MetricTable::find(const std::string& metric, const std::string& policy,
                                   double param) const {
  for (const auto& r : rows_)
    if (r.metric == metric && r.policy == policy && r.param == param) return r;
  throw std::invalid_argument("MetricTable: no row " + metric + "/" + policy);
}

void MetricTable::write_csv(const std::string& path) const {
  CsvWriter w(path, {"metric", "policy", "param", "mean", "max", "stdev", "stderr", "n"});
  for (const auto& r : rows_)
    w.row({r.metric, r.policy, fmt12(r.param), fmt12(r.stats.mean), fmt12(r.stats.max),
           fmt12(r.stats.stdev), fmt12(r.stats.stderr_), std::to_string(r.stats.n)});
}

namespace {

void same_grid(const ValueFunction& a, const ValueFunction& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("value functions live on different grids");
}

}  // namespace

double optimality_gap(const ValueFunction& optimal, const ValueFunction& v) {
  same_grid(optimal, v);
  double gap = 0.0;
  for (std::size_t i = 1; i + 1 < v.values.size(); ++i) {
    const double p = optimal.values[i];
    if (p <= 1e-12) continue;
    gap = std::max(gap, (p - v.values[i]) / p);
  }
  return gap;
}

double optimality_gap(const Instance& inst, const Policy& policy, const BeliefGrid& grid,
                      double tol) {
  SolveOptions opts;
  opts.method = SolveMethod::PolicyIteration;
  const auto opt = solve(inst, grid, tol, true, opts).value;
  return optimality_gap(opt, policy_value(inst, policy, grid, tol));
}

double relative_error_integral(const ValueFunction& ref, const ValueFunction& v) {
  same_grid(ref, v);
  const std::size_t n = v.values.size();
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (ref.values[i] > 1e-12) f[i] = (ref.values[i] - v.values[i]) / ref.values[i];
  double s = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    s += 0.5 * (f[i - 1] + f[i]) * (v.grid.node(i) - v.grid.node(i - 1));
  return s;
}

double relative_error_integral(const Instance& inst, const Policy& ref, const Policy& p,
                               const BeliefGrid& grid) {
  return relative_error_integral(policy_value(inst, ref, grid, 1e-9),
                                 policy_value(inst, p, grid, 1e-9));
}

double value_of_stopping(const ValueFunction& policy_value, const ValueFunction& budget_value) {
  same_grid(policy_value, budget_value);
  double worst = -INFINITY;
  for (std::size_t i = 0; i < policy_value.values.size(); ++i) {
    const double p = policy_value.values[i];
    if (p <= 1e-12) continue;
    worst = std::max(worst, (p - budget_value.values[i]) / p);
  }
  return worst;
}

double value_of_stopping(const Instance& inst, const Policy& policy, int T, BudgetMode mode,
                         const BeliefGrid& grid) {
  return value_of_stopping(policy_value(inst, policy, grid, 1e-9),
                           finite_budget_value(inst, policy, T, grid, mode));
}

// ---------------------------------------------------------------------------

std::string to_string(RegretRule rule) {
  switch (rule) {
    case RegretRule::MaxVol: return "MV";
    case RegretRule::TTPS: return "TTPS";
    case RegretRule::MNLBandit: return "MNLBandit";
    case RegretRule::Clairvoyant: return "Clairvoyant";
  }
  return "?";
}

RegretSetup make_regret_setup(const MnlMarket& market) {
  Instance inst(singleton_actions(market), display_experiments(market, all_displays(market)),
                market.lambda_v(), market.r());
  std::vector<int> cand;
  for (const auto& a : inst.actions())
    cand.push_back(a.id == 0 ? -1 : inst.experiment_index(display_id({a.id})));
  return {market, std::move(inst), std::move(cand)};
}

double clairvoyant_reward(const Instance& inst, Hypothesis theta) {
  double best = -INFINITY;
  for (const auto& a : inst.actions()) best = std::max(best, payoff_under(a, theta));
  return best;
}

double clairvoyant_revenue(const MnlMarket& m, Hypothesis theta) {
  std::vector<double> v;
  for (const auto& p : m.products()) v.push_back(std::exp(m.mu() * p.utility(theta)));
  return assortment_revenue(m, best_assortment(m, v), theta);
}

RegretCurve regret_curve(const RegretSetup& setup, RegretRule rule,
                         const std::vector<long>& checkpoints, const SimConfig& cfg,
                         const Policy* mv_policy) {
  if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      checkpoints.front() < 0)
    throw std::invalid_argument("regret_curve: checkpoints must be sorted and nonnegative");
  if (rule == RegretRule::MaxVol && !mv_policy)
    throw std::invalid_argument("regret_curve: MV rule needs its policy");
  if (cfg.replications < 1) throw std::invalid_argument("regret_curve: replications must be >= 1");
  const auto& m = setup.market;
  const auto& inst = setup.instance;
  const std::size_t nc = checkpoints.size();
  RegretCurve out{checkpoints,
                  std::vector<std::vector<double>>(nc, std::vector<double>(cfg.replications)),
                  std::vector<std::vector<double>>(nc, std::vector<double>(cfg.replications))};
  std::optional<TtpsPolicy> ttps;
  if (rule == RegretRule::TTPS) ttps.emplace(inst, setup.ttps_candidates, setup.ttps_beta);
  const double clair_rev[2] = {clairvoyant_revenue(m, Hypothesis::Theta0),
                               clairvoyant_revenue(m, Hypothesis::Theta1)};
  Display clair_set[2];
  for (int h = 0; h < 2; ++h) {
    std::vector<double> v;
    for (const auto& p : m.products())
      v.push_back(std::exp(m.mu() * p.utility(h == 0 ? Hypothesis::Theta0 : Hypothesis::Theta1)));
    clair_set[h] = best_assortment(m, v);
  }
  auto action_pos = [&](int id) {
    for (std::size_t k = 0; k < inst.actions().size(); ++k)
      if (inst.actions()[k].id == id) return static_cast<int>(k);
    // Dominated launches were dropped from the instance; score them directly.
    return -1 - id;
  };
  auto reward_of = [&](int pos, Hypothesis h) {
    if (pos >= 0) return payoff_under(inst.actions()[pos], h);
    return payoff_under(sales_payoff(m, {-1 - pos}, -1 - pos), h);
  };

  parallel_for(cfg.replications, cfg.threads, [&](long rep) {
    std::mt19937_64 rng(stream_seed(cfg.seed, rep));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Hypothesis theta = cfg.force_theta ? *cfg.force_theta
                             : (unif(rng) < 0.5 ? Hypothesis::Theta0 : Hypothesis::Theta1);
    const int th = theta == Hypothesis::Theta0 ? 0 : 1;
    const double best_reward = clairvoyant_reward(inst, theta);
    std::optional<MnlBandit> bandit;
    if (rule == RegretRule::MNLBandit) bandit.emplace(m, setup.bandit_c);
    double delta = 0.5, cum = 0.0;
    int launched = -1;  // MV decision once it stops
    std::size_t next_cp = 0;

    auto terminal = [&]() -> int {
      switch (rule) {
        case RegretRule::MaxVol:
          return launched >= 0 ? launched : static_cast<int>(best_action(inst.actions(), delta));
        case RegretRule::TTPS: return static_cast<int>(best_action(inst.actions(), delta));
        case RegretRule::MNLBandit: return action_pos(bandit->terminal_action());
        case RegretRule::Clairvoyant: {
          int best = 0;
          for (int k = 1; k < static_cast<int>(inst.actions().size()); ++k)
            if (payoff_under(inst.actions()[k], theta) > payoff_under(inst.actions()[best], theta))
              best = k;
          return best;
        }
      }
      return 0;
    };
    auto record = [&](long t) {
      while (next_cp < nc && checkpoints[next_cp] == t) {
        out.terminal[next_cp][rep] = best_reward - reward_of(terminal(), theta);
        out.cumulative_per_vote[next_cp][rep] = t > 0 ? cum / static_cast<double>(t) : 0.0;
        ++next_cp;
      }
    };

    record(0);
    const long horizon = checkpoints.back();
    for (long t = 1; t <= horizon; ++t) {
      Display shown;
      int k = -1;  // instance experiment backing the display, if any
      switch (rule) {
        case RegretRule::MaxVol: {
          if (launched < 0) {
            const auto d = mv_policy->decide(delta);
            if (d.stop && !setup.mv_keep_voting) launched = d.action;
            else k = d.stop ? mv_policy->experiment_at(delta) : d.experiment;
          }
          if (launched >= 0) {
            const int id = inst.actions()[launched].id;
            if (id != 0) shown = {id};
          }
          break;
        }
        case RegretRule::TTPS: k = ttps->sample(delta, rng); break;
        case RegretRule::MNLBandit: shown = bandit->offer(); break;
        case RegretRule::Clairvoyant: shown = clair_set[th]; break;
      }
      if (k >= 0) shown = display_from_id(inst.experiments()[k].id());
      cum += clair_rev[th] - assortment_revenue(m, shown, theta);
      if (!shown.empty()) {
        const auto x = sample_index(choice_probs(m, shown, theta), unif(rng));
        if (k >= 0) delta = belief_update(delta, inst.experiments()[k], x);
        if (bandit) bandit->observe(x == 0 ? 0 : shown[x - 1]);
      } else if (bandit) {
        bandit->observe(0);
      }
      record(t);
    }
  });
  return out;
}

}  // namespace seqexp
