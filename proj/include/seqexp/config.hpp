#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqexp/diffusion.hpp"
#include "seqexp/mdp.hpp"
#include "seqexp/mnl.hpp"
#include "seqexp/model.hpp"
#include "seqexp/sim.hpp"
#include "seqexp/suites.hpp"

namespace seqexp {

// Parse and schema failures. what() reads "<source>:<line>: <message>" when the
// offending value can be located in the text.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolverSettings {
  double mesh = 1e-3;
  double tol = 1e-3;
  SolveMethod method = SolveMethod::ValueIteration;
};

struct SimulateSettings {
  std::string policy = "MV";  // Optimal | A | MV | MR | F | LA | TTPS | Stop
  double delta0 = 0.5;
  double ttps_beta = 0.5;
  SimConfig sim;
};

enum class SuiteKind { None, Gap, Benchmark, Stopping, Regret };

struct RunConfig {
  std::string source;
  std::optional<Instance> instance;
  std::optional<MnlMarket> market;
  // Payoffs of a diffusion-only config, where "diffusion" gives sigma2 and r.
  std::vector<ActionPayoff> actions;
  std::optional<DiffusionModel> diffusion;
  SolverSettings solver;
  SimulateSettings simulate;
  SuiteKind suite = SuiteKind::None;
  GapSuiteConfig gap;
  BenchmarkSuiteConfig benchmark;
  StoppingSuiteConfig stopping;
  RegretSuiteConfig regret;
  std::uint64_t seed = 1;
  int threads = 1;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// Command-line overrides; each setting reaches the solver, the simulator and
// the active suite.
void set_seed(RunConfig& cfg, std::uint64_t seed);
void set_threads(RunConfig& cfg, int threads);
void set_mesh(RunConfig& cfg, double mesh);
void set_tol(RunConfig& cfg, double tol);

std::string to_string(SuiteKind kind);

}  // namespace seqexp
