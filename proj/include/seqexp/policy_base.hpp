#pragma once

#include <string>
#include <utility>
#include <vector>

namespace seqexp {

enum class PolicyKind {
  Optimal,
  Asymptotic,
  MaxVol,
  MaxRange,
  FullDisplay,
  LookAhead,
  TTPS,
  MNLBandit,
  AlwaysStop,
};

std::string to_string(PolicyKind kind);

// Outcome of a belief-Markov decision rule. `experiment` and `action` are
// positions in Instance::experiments() and Instance::actions().
struct Decision {
  bool stop = true;
  int experiment = -1;
  int action = -1;

  static Decision stop_with(int action) { return {true, -1, action}; }
  static Decision run(int experiment) { return {false, experiment, -1}; }
};

// A stateless decision rule on beliefs. Implementations must be total on
// [0,1] and deterministic so they can be shared across threads.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual Decision decide(double delta) const = 0;
  // Experiment the rule runs at delta when stopping is not available.
  virtual int experiment_at(double delta) const = 0;
  // Randomized rules override this; weights sum to 1.
  virtual std::vector<std::pair<int, double>> mixture(double delta) const {
    return {{experiment_at(delta), 1.0}};
  }
};

}  // namespace seqexp
