#include "seqexp/suites.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "seqexp/diffusion.hpp"
#include "seqexp/mdp.hpp"
#include "seqexp/policy.hpp"

namespace seqexp {

std::vector<ActionPayoff> four_line_payoffs() {
  return {{1, 6.0, -30.0}, {2, 4.0, -5.0}, {3, 0.0, 3.0}, {4, -20.0, 25.0}};
}

Instance worked_example() {
  const double p0[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const double p1[] = {0.03, 0.04, 0.09, 0.16, 0.25, 0.36, 0.49, 0.68, 0.86};
  std::vector<Experiment> exps;
  for (int k = 0; k < 9; ++k)
    exps.emplace_back(k + 1, std::vector<double>{p0[k], 1.0 - p0[k]},
                      std::vector<double>{p1[k], 1.0 - p1[k]});
  return Instance(four_line_payoffs(), exps, 8.0, 0.5);
}

Instance scaled_example(double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("scale k must be >= 1");
  std::vector<Experiment> exps;
  for (int e = 2; e <= 7; ++e) {
    const double q = 0.1 * e, a = -0.8 + 0.1 * (e - 2);
    const double q1 = q * (1.0 + a / std::sqrt(k));
    exps.emplace_back(e, std::vector<double>{q, 1.0 - q}, std::vector<double>{q1, 1.0 - q1});
  }
  return Instance(four_line_payoffs(), exps, 8.0 * k, 0.5);
}

MnlMarket launch_market(double lambda_v, double r) {
  const double v0[] = {0.05, 0.08, 0.012, 0.05, 0.04};
  const double v1[] = {0.032, 0.07, 0.018, 0.12, 0.043};
  const double margin[] = {210.0, 121.5, 506.0, 42.0, 208.0};
  std::vector<MnlProduct> ps;
  for (int i = 0; i < 5; ++i) {
    MnlProduct p;
    p.id = i + 1;
    p.u0 = std::log(v0[i]);
    p.u1 = std::log(v1[i]);
    p.price = margin[i];
    ps.push_back(p);
  }
  return MnlMarket(ps, 1.0, lambda_v, r, r);
}

MnlMarket ensemble_market(const EnsembleConfig& cfg, int index) {
  if (cfg.products < 1) throw std::invalid_argument("ensemble needs at least one product");
  std::mt19937_64 rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  const auto m = random_market(cfg.products, cfg.mu, cfg.lambda, rng);
  return MnlMarket(m.products(), cfg.mu, cfg.lambda, 0.0, cfg.r);
}

Instance ensemble_instance(const MnlMarket& m) {
  return Instance(four_line_payoffs(), display_experiments(m, all_displays(m)), m.lambda_v(),
                  m.r());
}

namespace {

void check_ensemble(const EnsembleConfig& cfg) {
  if (cfg.instances < 1) throw std::invalid_argument("ensemble needs at least one instance");
}

int full_display_id(const MnlMarket& m) {
  Display all;
  for (const auto& p : m.products()) all.push_back(p.id);
  return display_id(all);
}

}  // namespace

MetricTable run_gap_suite(const GapSuiteConfig& cfg) {
  check_ensemble(cfg.ensemble);
  if (cfg.ks.size() != cfg.meshes.size())
    throw std::invalid_argument("gap suite needs one mesh per k");
  const int n = cfg.ensemble.instances;
  MetricTable table;
  for (std::size_t j = 0; j < cfg.ks.size(); ++j) {
    const double k = cfg.ks[j];
    const BeliefGrid grid(cfg.meshes[j]);
    std::vector<double> mv(n), a(n);
    parallel_for(n, cfg.ensemble.threads, [&](long i) {
      const auto scaled = np_scaling(ensemble_market(cfg.ensemble, static_cast<int>(i)), k);
      const MnlMarket m(scaled.products(), scaled.mu(), scaled.lambda_v(), 0.0, cfg.ensemble.r);
      const auto inst = ensemble_instance(m);
      SolveOptions opts;
      opts.method = SolveMethod::PolicyIteration;
      const auto opt = solve(inst, grid, cfg.tol, true, opts);
      const auto plan = plan_asymptotic(inst, false);
      const MaxVolPolicy p_mv(inst, plan.value);
      const AsymptoticPolicy p_a(inst, plan.value, plan.winner.winner_id);
      mv[i] = optimality_gap(opt.value, policy_value(inst, p_mv, grid, cfg.tol));
      a[i] = optimality_gap(opt.value, policy_value(inst, p_a, grid, cfg.tol));
    });
    table.add("optimality_gap", "MV", k, mv);
    table.add("optimality_gap", "A", k, a);
  }
  return table;
}

MetricTable run_benchmark_suite(const BenchmarkSuiteConfig& cfg) {
  check_ensemble(cfg.ensemble);
  const int n = cfg.ensemble.instances;
  const BeliefGrid grid(cfg.mesh);
  std::vector<double> mr(n), la(n), f(n);
  parallel_for(n, cfg.ensemble.threads, [&](long i) {
    const auto m = ensemble_market(cfg.ensemble, static_cast<int>(i));
    const auto inst = ensemble_instance(m);
    const auto plan = plan_asymptotic(inst, false);
    std::vector<int> cand;
    for (const auto& d : interval_sets(m)) {
      const int pos = inst.experiment_index(display_id(d));
      if (pos >= 0) cand.push_back(pos);
    }
    const MaxVolPolicy p_mv(inst, plan.value);
    const MaxRangePolicy p_mr(inst, plan.value, cand);
    const LookAheadPolicy p_la(inst);
    const FullDisplayPolicy p_f(inst, plan.value, full_display_id(m));
    const auto ref = policy_value(inst, p_mv, grid, cfg.tol);
    mr[i] = relative_error_integral(ref, policy_value(inst, p_mr, grid, cfg.tol));
    la[i] = relative_error_integral(ref, policy_value(inst, p_la, grid, cfg.tol));
    f[i] = relative_error_integral(ref, policy_value(inst, p_f, grid, cfg.tol));
  });
  MetricTable table;
  table.add("relative_error", "MR", 0.0, mr);
  table.add("relative_error", "LA", 0.0, la);
  table.add("relative_error", "F", 0.0, f);
  return table;
}

MetricTable run_stopping_suite(const StoppingSuiteConfig& cfg) {
  check_ensemble(cfg.ensemble);
  std::vector<int> budgets = cfg.budgets;
  if (budgets.empty())
    for (int t = 1; t <= 200; ++t) budgets.push_back(t);
  const int n = cfg.ensemble.instances;
  const BeliefGrid grid(cfg.mesh);
  const int rules = cfg.full_display ? 2 : 1;
  // [rule][mode][budget][instance]
  std::vector<std::vector<std::vector<std::vector<double>>>> out(
      rules, std::vector<std::vector<std::vector<double>>>(
                 2, std::vector<std::vector<double>>(budgets.size(), std::vector<double>(n))));
  parallel_for(n, cfg.ensemble.threads, [&](long i) {
    const auto m = ensemble_market(cfg.ensemble, static_cast<int>(i));
    const auto inst = ensemble_instance(m);
    const auto plan = plan_asymptotic(inst, false);
    const MaxVolPolicy p_mv(inst, plan.value);
    const FullDisplayPolicy p_f(inst, plan.value, full_display_id(m));
    const Policy* ps[] = {&p_mv, &p_f};
    for (int k = 0; k < rules; ++k) {
      const auto ref = policy_value(inst, *ps[k], grid, cfg.tol);
      const BudgetMode modes[] = {BudgetMode::ExactlyT, BudgetMode::AtMostT};
      for (int md = 0; md < 2; ++md) {
        const auto vs = finite_budget_values(inst, *ps[k], budgets, grid, modes[md]);
        for (std::size_t b = 0; b < budgets.size(); ++b)
          out[k][md][b][i] = value_of_stopping(ref, vs[b]);
      }
    }
  });
  MetricTable table;
  const char* names[] = {"MV", "F"};
  const char* metrics[] = {"stopping_exactly", "stopping_at_most"};
  for (int md = 0; md < 2; ++md)
    for (int k = 0; k < rules; ++k)
      for (std::size_t b = 0; b < budgets.size(); ++b)
        table.add(metrics[md], names[k], budgets[b], out[k][md][b]);
  return table;
}

MetricTable run_regret_suite(const RegretSuiteConfig& cfg) {
  const MnlMarket market = cfg.market ? *cfg.market : launch_market(cfg.lambda_v, cfg.r);
  auto setup = make_regret_setup(market);
  setup.ttps_beta = cfg.ttps_beta;
  setup.bandit_c = cfg.bandit_c;
  setup.mv_keep_voting = cfg.mv_keep_voting;
  std::optional<AsymptoticPlan> plan;
  std::optional<MaxVolPolicy> mv;
  for (auto rule : cfg.rules)
    if (rule == RegretRule::MaxVol && !mv) {
      plan.emplace(plan_asymptotic(setup.instance, false));
      mv.emplace(setup.instance, plan->value);
    }
  SimConfig sc;
  sc.seed = cfg.seed;
  sc.replications = cfg.replications;
  sc.threads = cfg.threads;
  MetricTable table;
  for (auto rule : cfg.rules) {
    const auto curve = regret_curve(setup, rule, cfg.checkpoints, sc, mv ? &*mv : nullptr);
    for (std::size_t c = 0; c < curve.checkpoints.size(); ++c) {
      const double T = static_cast<double>(curve.checkpoints[c]);
      table.add("terminal_regret", to_string(rule), T, curve.terminal[c]);
      table.add("cumulative_regret", to_string(rule), T, curve.cumulative_per_vote[c]);
    }
  }
  const double prior_best = 0.5 * (clairvoyant_reward(setup.instance, Hypothesis::Theta0) +
                                   clairvoyant_reward(setup.instance, Hypothesis::Theta1));
  table.add("clairvoyant_reward", "Clairvoyant", 0.0, {prior_best});
  return table;
}

}  // namespace seqexp
