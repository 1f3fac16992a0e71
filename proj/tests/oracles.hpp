#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Obstacle problem 1/2 s2 d^2 (1-d)^2 V'' - r V = 0 on the continuation set,
// V >= g, on a uniform mesh. Howard policy iteration over stop/continue flags;
// each evaluation is one tridiagonal (Thomas) solve.
inline std::vector<double> fd_qvi(const std::function<double(double)>& g, double s2, double r,
                                  double h) {
  const long n = std::lround(1.0 / h);
  std::vector<double> x(n + 1), gv(n + 1), a(n + 1);
  for (long i = 0; i <= n; ++i) {
    x[i] = i == n ? 1.0 : static_cast<double>(i) / n;
    gv[i] = g(x[i]);
    a[i] = 0.5 * s2 * x[i] * x[i] * (1 - x[i]) * (1 - x[i]) / (h * h);
  }
  std::vector<char> cont(n + 1, 0);
  std::vector<double> v = gv;
  for (int iter = 0; iter < 10000; ++iter) {
    // Row i: stop -> v_i = g_i; continue -> -a v_{i-1} + (2a + r) v_i - a v_{i+1} = 0.
    std::vector<double> lo(n + 1, 0.0), di(n + 1, 1.0), up(n + 1, 0.0), rhs(gv);
    for (long i = 1; i < n; ++i)
      if (cont[i]) {
        lo[i] = -a[i];
        di[i] = 2 * a[i] + r;
        up[i] = -a[i];
        rhs[i] = 0.0;
      }
    for (long i = 1; i <= n; ++i) {
      const double m = lo[i] / di[i - 1];
      di[i] -= m * up[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    v[n] = rhs[n] / di[n];
    for (long i = n - 1; i >= 0; --i) v[i] = (rhs[i] - up[i] * v[i + 1]) / di[i];
    bool changed = false;
    for (long i = 1; i < n; ++i) {
      const double c = a[i] * (v[i - 1] + v[i + 1]) / (2 * a[i] + r);
      const char want = c > gv[i] + 1e-13 ? 1 : (c < gv[i] - 1e-13 ? 0 : cont[i]);
      if (want != cont[i]) {
        cont[i] = want;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return v;
}

struct ExitSample {
  double tau;
  bool upper;
};

// First exit of d delta = sigma delta (1 - delta) dW from (lo, hi) by Euler
// steps of size dt, with a Brownian-bridge test for crossings inside a step.
inline ExitSample exit_sample(double sigma, double lo, double hi, double delta, double dt,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sq = std::sqrt(dt);
  double d = delta;
  long k = 0;
  while (true) {
    const double vol = sigma * d * (1 - d);
    const double nx = d + vol * sq * z(rng);
    ++k;
    if (nx <= lo) return {(k - 0.5) * dt, false};
    if (nx >= hi) return {(k - 0.5) * dt, true};
    const double v2 = vol * vol * dt;
    const double pl = std::exp(-2 * (d - lo) * (nx - lo) / v2);
    const double pu = std::exp(-2 * (hi - d) * (hi - nx) / v2);
    const double w = u(rng);
    if (w < pl) return {(k - 0.5) * dt, false};
    if (w < pl + pu) return {(k - 0.5) * dt, true};
    d = nx;
  }
}

struct MeanSe {
  double mean, se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  double s = 0, q = 0;
  for (double x : xs) {
    s += x;
    q += x * x;
  }
  const double n = static_cast<double>(xs.size());
  const double m = s / n;
  return {m, std::sqrt(std::max(0.0, q / n - m * m) / n)};
}

}  // namespace oracles
