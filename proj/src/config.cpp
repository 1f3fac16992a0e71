#include "seqexp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace seqexp {

namespace {

using json = nlohmann::json;
using Path = std::vector<std::string>;

// Finds the line on which the value at `target` starts. Only run on text that
// already parsed, so the scanner can assume well-formed JSON.
class Locator {
 public:
  Locator(const std::string& s, Path target) : s_(s), target_(std::move(target)) {}

  std::optional<int> run() {
    value();
    return found_ > 0 ? std::optional<int>(found_) : std::nullopt;
  }

 private:
  const std::string& s_;
  Path target_, cur_;
  std::size_t i_ = 0;
  int line_ = 1, found_ = -1;

  bool more() const { return i_ < s_.size(); }
  void ws() {
    while (more() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }
  std::string str() {
    std::string out;
    ++i_;
    while (more() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (more()) out += s_[i_++];
    }
    ++i_;
    return out;
  }
  // Consumes ',' and returns true, or consumes the closing bracket.
  bool next_member() {
    ws();
    if (more() && s_[i_] == ',') {
      ++i_;
      return true;
    }
    ++i_;
    return false;
  }
  void value() {
    ws();
    if (found_ < 0 && cur_ == target_) found_ = line_;
    if (!more() || found_ > 0) return;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      ws();
      if (more() && s_[i_] == '}') {
        ++i_;
        return;
      }
      do {
        ws();
        cur_.push_back(str());
        ws();
        ++i_;  // ':'
        value();
        cur_.pop_back();
        if (found_ > 0) return;
      } while (next_member());
    } else if (c == '[') {
      ++i_;
      ws();
      if (more() && s_[i_] == ']') {
        ++i_;
        return;
      }
      std::size_t k = 0;
      do {
        cur_.push_back(std::to_string(k++));
        value();
        cur_.pop_back();
        if (found_ > 0) return;
      } while (next_member());
    } else if (c == '"') {
      str();
    } else {
      while (more() && !std::strchr(",}] \t\r\n", s_[i_])) ++i_;
    }
  }
};

std::string describe(const Path& p) {
  if (p.empty()) return "config";
  std::string out;
  for (const auto& seg : p) {
    if (!seg.empty() && std::all_of(seg.begin(), seg.end(), ::isdigit))
      out += "[" + seg + "]";
    else
      out += (out.empty() ? "" : ".") + seg;
  }
  return out;
}

Path child(Path p, const std::string& seg) {
  p.push_back(seg);
  return p;
}
Path child(Path p, std::size_t idx) { return child(std::move(p), std::to_string(idx)); }

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const Path& p, const std::string& msg) const {
    const auto line = Locator(text_, p).run();
    throw ConfigError(source_ + (line ? ":" + std::to_string(*line) : "") + ": " + msg);
  }

  void allow(const json& obj, const Path& p, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(p, describe(p) + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) fail(child(p, it.key()), "unknown key '" + it.key() + "' in " + describe(p));
    }
  }

  double number(const json& v, const Path& p) const {
    if (!v.is_number()) fail(p, describe(p) + " must be a number");
    return v.get<double>();
  }
  double number(const json& obj, const Path& p, const char* key, double fallback) const {
    return obj.contains(key) ? number(obj[key], child(p, key)) : fallback;
  }
  double positive(const json& obj, const Path& p, const char* key, double fallback) const {
    const double x = number(obj, p, key, fallback);
    if (!(x > 0.0)) fail(child(p, key), describe(child(p, key)) + " must be positive");
    return x;
  }
  long integer(const json& v, const Path& p) const {
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>())))
      fail(p, describe(p) + " must be an integer");
    return static_cast<long>(v.get<double>());
  }
  long integer(const json& obj, const Path& p, const char* key, long fallback) const {
    return obj.contains(key) ? integer(obj[key], child(p, key)) : fallback;
  }
  bool boolean(const json& obj, const Path& p, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(child(p, key), describe(child(p, key)) + " must be true or false");
    return obj[key].get<bool>();
  }
  std::string string(const json& v, const Path& p) const {
    if (!v.is_string()) fail(p, describe(p) + " must be a string");
    return v.get<std::string>();
  }
  const json& required(const json& obj, const Path& p, const char* key) const {
    if (!obj.contains(key)) fail(p, describe(p) + " is missing '" + key + "'");
    return obj[key];
  }
  std::vector<double> numbers(const json& v, const Path& p) const {
    if (!v.is_array()) fail(p, describe(p) + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], child(p, k)));
    return out;
  }
  template <class Int>
  std::vector<Int> integers(const json& v, const Path& p) const {
    if (!v.is_array()) fail(p, describe(p) + " must be an array of integers");
    std::vector<Int> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(static_cast<Int>(integer(v[k], child(p, k))));
    return out;
  }

 private:
  const std::string& text_;
  std::string source_;
};

std::vector<ActionPayoff> read_actions(const Reader& rd, const json& v, const Path& p) {
  if (!v.is_array() || v.empty()) rd.fail(p, "actions must be a non-empty array");
  std::vector<ActionPayoff> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Path q = child(p, k);
    rd.allow(v[k], q, {"id", "alpha", "beta"});
    ActionPayoff a;
    a.id = static_cast<int>(rd.integer(rd.required(v[k], q, "id"), child(q, "id")));
    a.alpha = rd.number(rd.required(v[k], q, "alpha"), child(q, "alpha"));
    a.beta = rd.number(rd.required(v[k], q, "beta"), child(q, "beta"));
    out.push_back(a);
  }
  return out;
}

std::vector<Experiment> read_experiments(const Reader& rd, const json& v, const Path& p) {
  if (!v.is_array() || v.empty()) rd.fail(p, "experiments must be a non-empty array");
  std::vector<Experiment> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Path q = child(p, k);
    rd.allow(v[k], q, {"id", "q0", "q1", "labels"});
    const int id = static_cast<int>(rd.integer(rd.required(v[k], q, "id"), child(q, "id")));
    const std::string name = "experiment " + std::to_string(id);
    const auto q0 = rd.numbers(rd.required(v[k], q, "q0"), child(q, "q0"));
    const auto q1 = rd.numbers(rd.required(v[k], q, "q1"), child(q, "q1"));
    try {
      if (v[k].contains("labels")) {
        std::vector<std::string> labels;
        for (std::size_t j = 0; j < v[k]["labels"].size(); ++j)
          labels.push_back(rd.string(v[k]["labels"][j], child(child(q, "labels"), j)));
        out.emplace_back(id, labels, q0, q1);
      } else {
        out.emplace_back(id, q0, q1);
      }
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      rd.fail(q, msg.find(name) == std::string::npos ? name + ": " + msg : msg);
    }
  }
  return out;
}

MnlMarket read_market(const Reader& rd, const json& v, const Path& p) {
  rd.allow(v, p, {"products", "mu", "lambda_v", "lambda_s", "r", "discard_payoff"});
  const json& prods = rd.required(v, p, "products");
  const Path pp = child(p, "products");
  if (!prods.is_array() || prods.empty()) rd.fail(pp, "products must be a non-empty array");
  std::vector<MnlProduct> ps;
  for (std::size_t k = 0; k < prods.size(); ++k) {
    const Path q = child(pp, k);
    rd.allow(prods[k], q, {"id", "u0", "u1", "price", "cost", "launch_cost"});
    MnlProduct m;
    m.id = static_cast<int>(rd.integer(rd.required(prods[k], q, "id"), child(q, "id")));
    m.u0 = rd.number(rd.required(prods[k], q, "u0"), child(q, "u0"));
    m.u1 = rd.number(rd.required(prods[k], q, "u1"), child(q, "u1"));
    m.price = rd.number(prods[k], q, "price", 0.0);
    m.cost = rd.number(prods[k], q, "cost", 0.0);
    m.launch_cost = rd.number(prods[k], q, "launch_cost", 0.0);
    ps.push_back(m);
  }
  try {
    return MnlMarket(ps, rd.number(v, p, "mu", 1.0), rd.number(v, p, "lambda_v", 1.0),
                     rd.number(v, p, "lambda_s", 0.0), rd.number(v, p, "r", 1.0),
                     rd.number(v, p, "discard_payoff", 0.0));
  } catch (const std::invalid_argument& e) {
    rd.fail(p, std::string("market: ") + e.what());
  }
}

RegretRule read_rule(const Reader& rd, const json& v, const Path& p) {
  const auto s = rd.string(v, p);
  if (s == "MV") return RegretRule::MaxVol;
  if (s == "TTPS") return RegretRule::TTPS;
  if (s == "MNLBandit") return RegretRule::MNLBandit;
  if (s == "Clairvoyant") return RegretRule::Clairvoyant;
  rd.fail(p, "unknown regret rule '" + s + "'");
}

void read_ensemble(const Reader& rd, const json& v, const Path& p, EnsembleConfig& e) {
  e.instances = static_cast<int>(rd.integer(v, p, "instances", e.instances));
  e.products = static_cast<int>(rd.integer(v, p, "products", e.products));
  e.mu = rd.positive(v, p, "mu", e.mu);
  e.lambda = rd.positive(v, p, "lambda", e.lambda);
  e.r = rd.positive(v, p, "r", e.r);
  if (e.instances < 1) rd.fail(child(p, "instances"), "suite.instances must be at least 1");
  if (e.products < 1 || e.products > 16)
    rd.fail(child(p, "products"), "suite.products must lie in [1, 16]");
}

void read_suite(const Reader& rd, const json& v, const Path& p, RunConfig& cfg) {
  const std::string name = rd.string(rd.required(v, p, "name"), child(p, "name"));
  if (name == "tables2") {
    rd.allow(v, p, {"name", "instances", "products", "mu", "lambda", "r", "ks", "meshes", "tol"});
    cfg.suite = SuiteKind::Gap;
    read_ensemble(rd, v, p, cfg.gap.ensemble);
    if (v.contains("ks")) cfg.gap.ks = rd.numbers(v["ks"], child(p, "ks"));
    if (v.contains("meshes")) cfg.gap.meshes = rd.numbers(v["meshes"], child(p, "meshes"));
    cfg.gap.tol = rd.positive(v, p, "tol", cfg.gap.tol);
    if (cfg.gap.ks.size() != cfg.gap.meshes.size())
      rd.fail(p, "suite.meshes needs one entry per element of suite.ks");
    for (std::size_t k = 0; k < cfg.gap.ks.size(); ++k) {
      if (!(cfg.gap.ks[k] >= 1.0)) rd.fail(child(child(p, "ks"), k), "suite.ks entries must be >= 1");
      if (!(cfg.gap.meshes[k] > 0.0 && cfg.gap.meshes[k] < 1.0))
        rd.fail(child(child(p, "meshes"), k), "suite.meshes entries must lie in (0, 1)");
    }
  } else if (name == "benchmarks") {
    rd.allow(v, p, {"name", "instances", "products", "mu", "lambda", "r", "mesh", "tol"});
    cfg.suite = SuiteKind::Benchmark;
    read_ensemble(rd, v, p, cfg.benchmark.ensemble);
    cfg.benchmark.mesh = rd.positive(v, p, "mesh", cfg.benchmark.mesh);
    cfg.benchmark.tol = rd.positive(v, p, "tol", cfg.benchmark.tol);
  } else if (name == "stopping-value") {
    rd.allow(v, p, {"name", "instances", "products", "mu", "lambda", "r", "budgets",
                    "full_display", "mesh", "tol"});
    cfg.suite = SuiteKind::Stopping;
    read_ensemble(rd, v, p, cfg.stopping.ensemble);
    if (v.contains("budgets")) cfg.stopping.budgets = rd.integers<int>(v["budgets"], child(p, "budgets"));
    for (std::size_t k = 0; k < cfg.stopping.budgets.size(); ++k)
      if (cfg.stopping.budgets[k] < 0)
        rd.fail(child(child(p, "budgets"), k), "suite.budgets entries must be nonnegative");
    cfg.stopping.full_display = rd.boolean(v, p, "full_display", cfg.stopping.full_display);
    cfg.stopping.mesh = rd.positive(v, p, "mesh", cfg.stopping.mesh);
    cfg.stopping.tol = rd.positive(v, p, "tol", cfg.stopping.tol);
  } else if (name == "regret") {
    rd.allow(v, p, {"name", "market", "lambda_v", "r", "replications", "checkpoints", "rules",
                    "ttps_beta", "bandit_c", "mv_keep_voting"});
    cfg.suite = SuiteKind::Regret;
    auto& rg = cfg.regret;
    if (v.contains("market")) rg.market = read_market(rd, v["market"], child(p, "market"));
    rg.lambda_v = rd.positive(v, p, "lambda_v", rg.lambda_v);
    rg.r = rd.positive(v, p, "r", rg.r);
    rg.replications = rd.integer(v, p, "replications", rg.replications);
    if (rg.replications < 1) rd.fail(child(p, "replications"), "suite.replications must be at least 1");
    if (v.contains("checkpoints"))
      rg.checkpoints = rd.integers<long>(v["checkpoints"], child(p, "checkpoints"));
    if (!std::is_sorted(rg.checkpoints.begin(), rg.checkpoints.end()) || rg.checkpoints.empty() ||
        rg.checkpoints.front() < 0)
      rd.fail(child(p, "checkpoints"), "suite.checkpoints must be nonnegative and ascending");
    if (v.contains("rules")) {
      const Path q = child(p, "rules");
      if (!v["rules"].is_array() || v["rules"].empty()) rd.fail(q, "suite.rules must be a non-empty array");
      rg.rules.clear();
      for (std::size_t k = 0; k < v["rules"].size(); ++k) rg.rules.push_back(read_rule(rd, v["rules"][k], child(q, k)));
    }
    rg.ttps_beta = rd.positive(v, p, "ttps_beta", rg.ttps_beta);
    rg.bandit_c = rd.positive(v, p, "bandit_c", rg.bandit_c);
    rg.mv_keep_voting = rd.boolean(v, p, "mv_keep_voting", rg.mv_keep_voting);
  } else {
    rd.fail(child(p, "name"), "unknown suite '" + name + "'");
  }
}

void read_simulate(const Reader& rd, const json& v, const Path& p, SimulateSettings& s) {
  rd.allow(v, p, {"policy", "delta0", "replications", "horizon", "time_model", "record_events",
                  "force_theta", "ttps_beta"});
  if (v.contains("policy")) {
    s.policy = rd.string(v["policy"], child(p, "policy"));
    static const char* known[] = {"Optimal", "A", "MV", "MR", "F", "LA", "TTPS", "Stop"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return s.policy == k; }))
      rd.fail(child(p, "policy"), "unknown policy '" + s.policy + "'");
  }
  s.delta0 = rd.number(v, p, "delta0", s.delta0);
  if (!(s.delta0 >= 0.0 && s.delta0 <= 1.0)) rd.fail(child(p, "delta0"), "simulate.delta0 must lie in [0, 1]");
  s.sim.replications = rd.integer(v, p, "replications", s.sim.replications);
  if (s.sim.replications < 1) rd.fail(child(p, "replications"), "simulate.replications must be at least 1");
  s.sim.horizon = rd.integer(v, p, "horizon", s.sim.horizon);
  if (v.contains("time_model")) {
    const auto tm = rd.string(v["time_model"], child(p, "time_model"));
    if (tm == "unit") s.sim.time_model = TimeModel::UnitGaps;
    else if (tm == "poisson") s.sim.time_model = TimeModel::PoissonGaps;
    else rd.fail(child(p, "time_model"), "simulate.time_model must be 'unit' or 'poisson'");
  }
  s.sim.record_events = rd.boolean(v, p, "record_events", s.sim.record_events);
  if (v.contains("force_theta")) {
    const long t = rd.integer(v["force_theta"], child(p, "force_theta"));
    if (t != 0 && t != 1) rd.fail(child(p, "force_theta"), "simulate.force_theta must be 0 or 1");
    s.sim.force_theta = t == 0 ? Hypothesis::Theta0 : Hypothesis::Theta1;
  }
  s.ttps_beta = rd.positive(v, p, "ttps_beta", s.ttps_beta);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line number; e.byte is one past the offending byte.
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(end), '\n');
    throw ConfigError(source + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  const Reader rd(text, source);
  const Path root;
  rd.allow(doc, root, {"builtin", "actions", "experiments", "lambda", "r", "market", "diffusion",
                       "solver", "simulate", "suite", "seed", "threads"});
  RunConfig cfg;
  cfg.source = source;

  std::vector<ActionPayoff> actions;
  std::optional<std::vector<Experiment>> experiments;
  std::optional<double> lambda, r;
  std::string action_rule, experiment_rule;

  if (doc.contains("builtin")) {
    const Path p{"builtin"};
    const json& b = doc["builtin"];
    rd.allow(b, p, {"name", "k", "lambda_v", "r"});
    const auto name = rd.string(rd.required(b, p, "name"), child(p, "name"));
    if (name == "worked_example") {
      const auto inst = worked_example();
      actions = inst.actions();
      experiments = inst.experiments();
      lambda = inst.lambda();
      r = inst.r();
    } else if (name == "scaled_example") {
      const double k = rd.number(b, p, "k", 1.0);
      if (!(k >= 1.0)) rd.fail(child(p, "k"), "builtin.k must be >= 1");
      const auto inst = scaled_example(k);
      actions = inst.actions();
      experiments = inst.experiments();
      lambda = inst.lambda();
      r = inst.r();
    } else if (name == "launch_market") {
      cfg.market = launch_market(rd.positive(b, p, "lambda_v", 1.0), rd.positive(b, p, "r", 1.0));
    } else {
      rd.fail(child(p, "name"), "unknown builtin '" + name + "'");
    }
  }
  if (doc.contains("market")) {
    if (cfg.market) rd.fail({"market"}, "market conflicts with the builtin market");
    cfg.market = read_market(rd, doc["market"], {"market"});
  }
  if (doc.contains("actions")) {
    if (doc["actions"].is_string()) {
      action_rule = doc["actions"].get<std::string>();
      if (action_rule == "four_line") actions = four_line_payoffs();
      else if (action_rule != "singleton") rd.fail({"actions"}, "actions must be an array, 'four_line' or 'singleton'");
    } else {
      actions = read_actions(rd, doc["actions"], {"actions"});
    }
  }
  if (doc.contains("experiments")) {
    if (doc["experiments"].is_string()) {
      experiment_rule = doc["experiments"].get<std::string>();
      if (experiment_rule != "all_displays" && experiment_rule != "interval_displays")
        rd.fail({"experiments"}, "experiments must be an array, 'all_displays' or 'interval_displays'");
    } else {
      experiments = read_experiments(rd, doc["experiments"], {"experiments"});
    }
  }
  if (doc.contains("lambda")) lambda = rd.number(doc["lambda"], {"lambda"});
  if (doc.contains("r")) r = rd.number(doc["r"], {"r"});

  if (cfg.market) {
    const auto& m = *cfg.market;
    if (action_rule == "singleton" || (actions.empty() && action_rule.empty())) actions = singleton_actions(m);
    if (!experiments) {
      experiments = display_experiments(
          m, experiment_rule == "interval_displays" ? interval_sets(m) : all_displays(m));
    }
    if (!lambda) lambda = m.lambda_v();
    if (!r) r = m.r();
  } else if (action_rule == "singleton" || !experiment_rule.empty()) {
    rd.fail({}, "market-derived actions or experiments need a market");
  }

  if (doc.contains("diffusion")) {
    const Path p{"diffusion"};
    rd.allow(doc["diffusion"], p, {"sigma2", "r"});
    if (experiments) rd.fail(p, "diffusion gives the volatility directly; drop the experiments");
    if (actions.empty()) rd.fail(p, "diffusion needs actions");
    DiffusionModel dm;
    dm.sigma2 = rd.positive(doc["diffusion"], p, "sigma2", 1.0);
    dm.r = rd.positive(doc["diffusion"], p, "r", 1.0);
    cfg.diffusion = dm;
    cfg.actions = actions;
  } else if (experiments) {
    if (actions.empty()) rd.fail({}, "config is missing 'actions'");
    if (!lambda) rd.fail({}, "config is missing 'lambda'");
    if (!r) rd.fail({}, "config is missing 'r'");
    try {
      cfg.instance.emplace(actions, *experiments, *lambda, *r);
    } catch (const std::invalid_argument& e) {
      rd.fail({}, std::string("instance: ") + e.what());
    }
    cfg.actions = cfg.instance->actions();
  } else if (!actions.empty()) {
    rd.fail({}, "actions need either experiments or a diffusion block");
  }

  if (doc.contains("solver")) {
    const Path p{"solver"};
    const json& s = doc["solver"];
    rd.allow(s, p, {"mesh", "tol", "method"});
    cfg.solver.mesh = rd.positive(s, p, "mesh", cfg.solver.mesh);
    if (cfg.solver.mesh >= 1.0) rd.fail(child(p, "mesh"), "solver.mesh must lie in (0, 1)");
    cfg.solver.tol = rd.positive(s, p, "tol", cfg.solver.tol);
    if (s.contains("method")) {
      const auto m = rd.string(s["method"], child(p, "method"));
      if (m == "value") cfg.solver.method = SolveMethod::ValueIteration;
      else if (m == "policy") cfg.solver.method = SolveMethod::PolicyIteration;
      else rd.fail(child(p, "method"), "solver.method must be 'value' or 'policy'");
    }
  }
  if (doc.contains("simulate")) read_simulate(rd, doc["simulate"], {"simulate"}, cfg.simulate);
  if (doc.contains("suite")) read_suite(rd, doc["suite"], {"suite"}, cfg);

  set_seed(cfg, doc.contains("seed") ? static_cast<std::uint64_t>(rd.integer(doc["seed"], {"seed"})) : 1);
  const long threads = doc.contains("threads") ? rd.integer(doc["threads"], {"threads"}) : 1;
  if (threads < 1) rd.fail({"threads"}, "threads must be at least 1");
  set_threads(cfg, static_cast<int>(threads));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void set_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.simulate.sim.seed = seed;
  cfg.gap.ensemble.seed = seed;
  cfg.benchmark.ensemble.seed = seed;
  cfg.stopping.ensemble.seed = seed;
  cfg.regret.seed = seed;
}

void set_threads(RunConfig& cfg, int threads) {
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  cfg.threads = threads;
  cfg.simulate.sim.threads = threads;
  cfg.gap.ensemble.threads = threads;
  cfg.benchmark.ensemble.threads = threads;
  cfg.stopping.ensemble.threads = threads;
  cfg.regret.threads = threads;
}

void set_mesh(RunConfig& cfg, double mesh) {
  if (!(mesh > 0.0 && mesh < 1.0)) throw std::invalid_argument("mesh must lie in (0, 1)");
  cfg.solver.mesh = mesh;
  std::fill(cfg.gap.meshes.begin(), cfg.gap.meshes.end(), mesh);
  cfg.benchmark.mesh = mesh;
  cfg.stopping.mesh = mesh;
}

void set_tol(RunConfig& cfg, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  cfg.solver.tol = tol;
  cfg.gap.tol = tol;
  cfg.benchmark.tol = tol;
  cfg.stopping.tol = tol;
}

std::string to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::None: return "none";
    case SuiteKind::Gap: return "tables2";
    case SuiteKind::Benchmark: return "benchmarks";
    case SuiteKind::Stopping: return "stopping-value";
    case SuiteKind::Regret: return "regret";
  }
  return "?";
}

}  // namespace seqexp
