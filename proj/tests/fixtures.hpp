#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "seqexp/mnl.hpp"
#include "seqexp/model.hpp"
#include "seqexp/suites.hpp"

namespace fixtures {

inline std::vector<seqexp::ActionPayoff> four_line_payoffs() { return seqexp::four_line_payoffs(); }

// The nine binary experiments of the worked example; outcome 0 probabilities
// under theta0 and theta1.
inline std::vector<seqexp::Experiment> nine_experiments() {
  const double p0[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const double p1[] = {0.03, 0.04, 0.09, 0.16, 0.25, 0.36, 0.49, 0.68, 0.86};
  std::vector<seqexp::Experiment> out;
  for (int k = 0; k < 9; ++k)
    out.emplace_back(k + 1, std::vector<double>{p0[k], 1.0 - p0[k]},
                     std::vector<double>{p1[k], 1.0 - p1[k]});
  return out;
}

inline seqexp::Instance example1() { return seqexp::worked_example(); }
inline seqexp::Instance example2(double k) { return seqexp::scaled_example(k); }

// Random strictly positive binary experiment.
inline seqexp::Experiment random_binary(int id, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double a = u(rng), b = u(rng);
  while (a == b) b = u(rng);
  return seqexp::Experiment(id, {a, 1.0 - a}, {b, 1.0 - b});
}

inline seqexp::Experiment random_experiment(int id, std::size_t outcomes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  auto row = [&] {
    std::vector<double> q(outcomes);
    double s = 0.0;
    for (auto& x : q) s += (x = u(rng));
    for (auto& x : q) x /= s;
    double err = 1.0;
    for (auto x : q) err -= x;
    q[0] += err;
    return q;
  };
  return seqexp::Experiment(id, row(), row());
}

inline seqexp::MnlMarket bandit_market(double lambda_v = 1.0, double r = 1.0) {
  return seqexp::launch_market(lambda_v, r);
}

}  // namespace fixtures
