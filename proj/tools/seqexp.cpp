// Command-line entry point: solve, diffusion, compare, simulate, prune.
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqexp/config.hpp"
#include "seqexp/csv.hpp"
#include "seqexp/diffusion.hpp"
#include "seqexp/mdp.hpp"
#include "seqexp/policy.hpp"
#include "seqexp/sim.hpp"
#include "seqexp/suites.hpp"

#ifndef SEQEXP_VERSION
#define SEQEXP_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace seqexp;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> mesh, tol;
  std::string out_dir = ".";
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Written before any result so an interrupted run still records its inputs.
class RunManifest {
 public:
  RunManifest(std::string command, const Options& opt, const RunConfig& cfg,
              std::vector<std::string> outputs)
      : path_((fs::path(opt.out_dir) / "manifest.txt").string()) {
    std::ofstream out(path_);
    if (!out) throw std::runtime_error("cannot write " + path_);
    out << "command: " << command << "\n"
        << "config: " << opt.config << "\n"
        << "seed: " << cfg.seed << "\n"
        << "threads: " << cfg.threads << "\n"
        << "mesh: " << fmt12(cfg.solver.mesh) << "\n"
        << "tol: " << fmt12(cfg.solver.tol) << "\n"
        << "code_version: " << SEQEXP_VERSION << "\n"
        << "started: " << utc_now() << "\n";
    for (const auto& o : outputs) out << "output: " << (fs::path(opt.out_dir) / o).string() << "\n";
  }
  void finish() const {
    std::ofstream out(path_, std::ios::app);
    out << "finished: " << utc_now() << "\n";
  }

 private:
  std::string path_;
};

std::string out_path(const Options& opt, const std::string& name) {
  return (fs::path(opt.out_dir) / name).string();
}

RunConfig prepare(const Options& opt) {
  auto cfg = load_config(opt.config);
  if (opt.seed) set_seed(cfg, *opt.seed);
  if (opt.threads) set_threads(cfg, *opt.threads);
  if (opt.mesh) set_mesh(cfg, *opt.mesh);
  if (opt.tol) set_tol(cfg, *opt.tol);
  fs::create_directories(opt.out_dir);
  return cfg;
}

const Instance& need_instance(const RunConfig& cfg, const char* command) {
  if (!cfg.instance)
    throw ConfigError(cfg.source + ": " + command + " needs actions and experiments");
  return *cfg.instance;
}

void write_intervals(const std::string& path, const std::vector<std::pair<double, double>>& iv) {
  CsvWriter w(path, {"lo", "hi"});
  for (const auto& [lo, hi] : iv) w.row({fmt12(lo), fmt12(hi)});
}

int cmd_solve(const Options& opt) {
  const auto cfg = prepare(opt);
  const auto& inst = need_instance(cfg, "solve");
  RunManifest manifest("solve", opt, cfg, {"value.csv", "intervals.csv", "regions.csv", "report.txt"});
  SolveOptions so;
  so.method = cfg.solver.method;
  const auto res = solve(inst, BeliefGrid(cfg.solver.mesh), cfg.solver.tol, true, so);
  write_value_csv(out_path(opt, "value.csv"), inst, res.value);
  write_intervals(out_path(opt, "intervals.csv"), res.report.continuation_intervals);
  {
    CsvWriter w(out_path(opt, "regions.csv"), {"lo", "hi", "decision"});
    for (const auto& run : choice_runs(res.value)) {
      std::string what;
      if (run.choice == kStop) {
        const double mid = 0.5 * (run.lo + run.hi);
        what = "stop:" + std::to_string(inst.actions()[best_action(inst.actions(), mid)].id);
      } else {
        what = "experiment:" + std::to_string(inst.experiments()[run.choice].id());
      }
      w.row({fmt12(run.lo), fmt12(run.hi), what});
    }
  }
  std::ofstream rep(out_path(opt, "report.txt"));
  rep << "iterations: " << res.report.iterations << "\n"
      << "final_residual: " << fmt12(res.report.final_residual) << "\n"
      << "wall_time_s: " << fmt12(res.report.wall_time) << "\n";
  for (const auto& [lo, hi] : res.report.continuation_intervals)
    rep << "continuation: " << fmt12(lo) << " " << fmt12(hi) << "\n";
  manifest.finish();
  std::cout << "solved " << inst.experiments().size() << " experiments in "
            << res.report.iterations << " sweeps; " << res.report.continuation_intervals.size()
            << " continuation interval(s)\n";
  return 0;
}

int cmd_diffusion(const Options& opt) {
  const auto cfg = prepare(opt);
  std::vector<std::string> outs{"pairs.csv", "diffusion_value.csv"};
  if (cfg.instance) outs.push_back("asymptotic.csv");
  RunManifest manifest("diffusion", opt, cfg, outs);
  std::optional<DiffusionValue> dv;
  if (cfg.diffusion) {
    dv.emplace(compose_value(cfg.actions, *cfg.diffusion, true));
  } else {
    const auto& inst = need_instance(cfg, "diffusion");
    auto plan = plan_asymptotic(inst, true);
    CsvWriter w(out_path(opt, "asymptotic.csv"),
                {"experiment", "vol_term", "objective", "degenerate", "selected"});
    for (const auto& a : plan.asymptotic)
      w.row({std::to_string(a.experiment_id), fmt12(a.vol_term), fmt12(a.objective),
             a.degenerate() ? "1" : "0", a.experiment_id == plan.winner.winner_id ? "1" : "0"});
    dv.emplace(plan.value);
  }
  write_pairs_csv(out_path(opt, "pairs.csv"), *dv);
  write_diffusion_csv(out_path(opt, "diffusion_value.csv"), *dv, std::min(cfg.solver.mesh, 0.5));
  manifest.finish();
  std::cout << dv->pairs().size() << " pair(s); sigma2 " << fmt12(dv->model().sigma2) << "\n";
  return 0;
}

int cmd_compare(const Options& opt) {
  const auto cfg = prepare(opt);
  if (cfg.suite == SuiteKind::None) throw ConfigError(cfg.source + ": compare needs a suite block");
  RunManifest manifest("compare", opt, cfg, {"metrics.csv"});
  MetricTable table;
  switch (cfg.suite) {
    case SuiteKind::Gap: table = run_gap_suite(cfg.gap); break;
    case SuiteKind::Benchmark: table = run_benchmark_suite(cfg.benchmark); break;
    case SuiteKind::Stopping: table = run_stopping_suite(cfg.stopping); break;
    case SuiteKind::Regret: table = run_regret_suite(cfg.regret); break;
    case SuiteKind::None: break;
  }
  table.write_csv(out_path(opt, "metrics.csv"));
  manifest.finish();
  std::cout << to_string(cfg.suite) << ": " << table.rows().size() << " rows\n";
  return 0;
}

int full_display(const MnlMarket& m) {
  Display all;
  for (const auto& p : m.products()) all.push_back(p.id);
  return display_id(all);
}

int cmd_simulate(const Options& opt) {
  const auto cfg = prepare(opt);
  const auto& inst = need_instance(cfg, "simulate");
  const auto& s = cfg.simulate;
  std::vector<std::string> outs{"trajectories.csv"};
  if (s.sim.record_events) outs.push_back("events.csv");
  RunManifest manifest("simulate", opt, cfg, outs);

  const bool needs_plan = s.policy == "A" || s.policy == "MV" || s.policy == "MR" || s.policy == "F";
  std::optional<AsymptoticPlan> plan;
  if (needs_plan) plan.emplace(plan_asymptotic(inst, true));
  auto need_market = [&]() -> const MnlMarket& {
    if (!cfg.market) throw ConfigError(cfg.source + ": policy " + s.policy + " needs a market");
    return *cfg.market;
  };
  std::unique_ptr<Policy> policy;
  if (s.policy == "A") {
    policy = std::make_unique<AsymptoticPolicy>(inst, plan->value, plan->winner.winner_id);
  } else if (s.policy == "MV") {
    policy = std::make_unique<MaxVolPolicy>(inst, plan->value);
  } else if (s.policy == "MR") {
    std::vector<int> cand;
    for (const auto& d : interval_sets(need_market())) {
      const int pos = inst.experiment_index(display_id(d));
      if (pos >= 0) cand.push_back(pos);
    }
    policy = std::make_unique<MaxRangePolicy>(inst, plan->value, cand);
  } else if (s.policy == "F") {
    policy = std::make_unique<FullDisplayPolicy>(inst, plan->value, full_display(need_market()));
  } else if (s.policy == "LA") {
    policy = std::make_unique<LookAheadPolicy>(inst);
  } else if (s.policy == "TTPS") {
    need_market();
    std::vector<int> cand;
    for (const auto& a : inst.actions())
      cand.push_back(a.id == 0 ? -1 : inst.experiment_index(display_id({a.id})));
    policy = std::make_unique<TtpsPolicy>(inst, cand, s.ttps_beta);
  } else if (s.policy == "Stop") {
    policy = std::make_unique<StopPolicy>(inst);
  } else {
    auto res = solve(inst, BeliefGrid(cfg.solver.mesh), cfg.solver.tol);
    policy = std::make_unique<OptimalPolicy>(inst, std::move(res.value));
  }

  const auto runs = run_policy(inst, *policy, s.delta0, s.sim);
  CsvWriter w(out_path(opt, "trajectories.csv"),
              {"replication", "theta", "votes", "stop_time", "discount", "terminal_belief",
               "terminal_action", "stopped", "reward_belief", "reward_true"});
  std::vector<double> rewards;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& t = runs[i];
    w.row({std::to_string(i), t.theta == Hypothesis::Theta0 ? "0" : "1", std::to_string(t.votes),
           fmt12(t.stop_time), fmt12(t.discount), fmt12(t.terminal_belief),
           std::to_string(inst.actions()[t.terminal_action].id), t.stopped ? "1" : "0",
           fmt12(t.reward_belief), fmt12(t.reward_true)});
    rewards.push_back(t.reward_belief);
  }
  if (s.sim.record_events) {
    CsvWriter ev(out_path(opt, "events.csv"),
                 {"replication", "time", "belief_before", "experiment", "outcome", "belief_after"});
    for (std::size_t i = 0; i < runs.size(); ++i)
      for (const auto& e : runs[i].events)
        ev.row({std::to_string(i), fmt12(e.time), fmt12(e.belief_before),
                std::to_string(inst.experiments()[e.experiment].id()), std::to_string(e.outcome),
                fmt12(e.belief_after)});
  }
  manifest.finish();
  const auto st = summarize(rewards);
  std::cout << s.policy << " at " << fmt12(s.delta0) << ": mean discounted reward "
            << fmt12(st.mean) << " (stderr " << fmt12(st.stderr_) << ", n " << st.n << ")\n";
  return 0;
}

int cmd_prune(const Options& opt) {
  const auto cfg = prepare(opt);
  const auto& inst = need_instance(cfg, "prune");
  RunManifest manifest("prune", opt, cfg, {"prune.csv"});
  const auto res = prune_dominated(inst.experiments());
  CsvWriter w(out_path(opt, "prune.csv"), {"experiment", "status"});
  for (const auto& e : inst.experiments()) {
    const bool kept = std::any_of(res.kept.begin(), res.kept.end(),
                                  [&](const Experiment& k) { return k.id() == e.id(); });
    w.row({std::to_string(e.id()), kept ? "kept" : "eliminated"});
  }
  manifest.finish();
  std::cout << res.kept.size() << " kept, " << res.eliminated.size() << " eliminated\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential experimentation toolkit"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--seed", opt.seed, "Root seed");
    sub->add_option("--threads", opt.threads, "Worker cap")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", opt.out_dir, "Output directory");
    sub->add_option("--mesh", opt.mesh, "Belief grid mesh")->check(CLI::Range(1e-7, 0.5));
    sub->add_option("--tol", opt.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  };
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"solve", "Solve the DP and write the value function and regions", cmd_solve},
      {"diffusion", "Closed-form diffusion value from pair solutions", cmd_diffusion},
      {"compare", "Run an experiment suite into a metric table", cmd_compare},
      {"simulate", "Monte-Carlo trajectories of one policy", cmd_simulate},
      {"prune", "Drop experiments dominated in convex order", cmd_prune},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    subs.emplace_back(sub, &c);
  }
  CLI11_PARSE(app, argc, argv);
  try {
    for (const auto& [sub, c] : subs)
      if (sub->parsed()) return c->run(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
