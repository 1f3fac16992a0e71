#include "seqexp/mnl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace seqexp {

MnlMarket::MnlMarket(std::vector<MnlProduct> products, double mu, double lambda_v,
                     double lambda_s, double r, double discard_payoff)
    : products_(std::move(products)),
      mu_(mu),
      lambda_v_(lambda_v),
      lambda_s_(lambda_s),
      r_(r),
      discard_(discard_payoff) {
  if (!(mu_ > 0.0)) throw std::invalid_argument("MnlMarket: mu must be > 0");
  if (!(lambda_v_ >= 0.0) || !(lambda_s_ >= 0.0))
    throw std::invalid_argument("MnlMarket: rates must be >= 0");
  if (!(r_ > 0.0)) throw std::invalid_argument("MnlMarket: r must be > 0");
  if (products_.empty()) throw std::invalid_argument("MnlMarket: no products");
  if (products_.size() > 30) throw std::invalid_argument("MnlMarket: at most 30 products");
  std::set<int> ids;
  for (const auto& p : products_) {
    if (p.id < 1 || p.id > 30)
      throw std::invalid_argument("MnlMarket: product ids must lie in 1..30 (0 is no-purchase)");
    if (!ids.insert(p.id).second)
      throw std::invalid_argument("MnlMarket: duplicate product id " + std::to_string(p.id));
    if (!std::isfinite(p.u0) || !std::isfinite(p.u1))
      throw std::invalid_argument("MnlMarket: non-finite utility for product " +
                                  std::to_string(p.id));
  }
  std::stable_sort(products_.begin(), products_.end(), [](const auto& a, const auto& b) {
    return a.delta_u() < b.delta_u() || (a.delta_u() == b.delta_u() && a.id < b.id);
  });
}

const MnlProduct& MnlMarket::product(int id) const {
  for (const auto& p : products_)
    if (p.id == id) return p;
  throw std::invalid_argument("MnlMarket: unknown product id " + std::to_string(id));
}

std::vector<double> choice_probs(const MnlMarket& m, const Display& display, Hypothesis h) {
  if (display.empty()) throw std::invalid_argument("choice_probs: empty display");
  // Softmax with the no-purchase utility 0 in front; shift by the max for stability.
  std::vector<double> u{0.0};
  for (int id : display) {
    if (id == 0) throw std::invalid_argument("choice_probs: list products only, 0 is implicit");
    u.push_back(m.mu() * m.product(id).utility(h));
  }
  const double top = *std::max_element(u.begin(), u.end());
  double z = 0.0;
  for (double& x : u) z += (x = std::exp(x - top));
  for (double& x : u) x /= z;
  return u;
}

int display_id(const Display& display) {
  int mask = 0;
  for (int id : display) {
    if (id < 1 || id > 30) throw std::invalid_argument("display_id: bad product id");
    mask |= 1 << id;
  }
  return mask;
}

Display display_from_id(int id) {
  Display d;
  for (int b = 1; b <= 30; ++b)
    if (id & (1 << b)) d.push_back(b);
  return d;
}

Experiment experiment_from_display(const MnlMarket& m, const Display& display) {
  std::vector<std::string> labels{"0"};
  for (int id : display) labels.push_back(std::to_string(id));
  return Experiment(display_id(display), labels, choice_probs(m, display, Hypothesis::Theta0),
                    choice_probs(m, display, Hypothesis::Theta1));
}

namespace {

bool informative(const MnlMarket& m, const Display& d) {
  const auto a = choice_probs(m, d, Hypothesis::Theta0);
  const auto b = choice_probs(m, d, Hypothesis::Theta1);
  for (std::size_t x = 0; x < a.size(); ++x)
    if (std::abs(a[x] - b[x]) > 1e-15) return true;
  return false;
}

}  // namespace

std::vector<Display> all_displays(const MnlMarket& m) {
  std::vector<int> ids;
  for (const auto& p : m.products()) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  const int n = static_cast<int>(ids.size());
  if (n > 20) throw std::invalid_argument("all_displays: power set too large; use interval_sets");
  std::vector<Display> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    Display d;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) d.push_back(ids[b]);
    if (informative(m, d)) out.push_back(d);
  }
  std::sort(out.begin(), out.end(),
            [](const Display& a, const Display& b) { return display_id(a) < display_id(b); });
  return out;
}

std::vector<Experiment> display_experiments(const MnlMarket& m, const std::vector<Display>& ds) {
  std::vector<Experiment> out;
  out.reserve(ds.size());
  for (const auto& d : ds) out.push_back(experiment_from_display(m, d));
  return out;
}

ActionPayoff sales_payoff(const MnlMarket& m, const Display& assortment, int action_id) {
  ActionPayoff a{action_id, 0.0, 0.0};
  if (assortment.empty()) {
    a.alpha = m.discard_payoff();
    return a;
  }
  const auto q0 = choice_probs(m, assortment, Hypothesis::Theta0);
  const auto q1 = choice_probs(m, assortment, Hypothesis::Theta1);
  for (std::size_t k = 0; k < assortment.size(); ++k) {
    const auto& p = m.product(assortment[k]);
    const double scale = p.margin() / m.r() * m.lambda_s();
    a.alpha += scale * q1[k + 1] - p.launch_cost;
    a.beta += scale * (q0[k + 1] - q1[k + 1]);
  }
  return a;
}

std::vector<ActionPayoff> singleton_actions(const MnlMarket& m) {
  std::vector<ActionPayoff> out{sales_payoff(m, {}, 0)};
  std::vector<int> ids;
  for (const auto& p : m.products()) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  for (int id : ids) out.push_back(sales_payoff(m, {id}, id));
  return out;
}

MnlMarket np_scaling(const MnlMarket& m, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("np_scaling: k must be > 0");
  return MnlMarket(m.products(), m.mu() / std::sqrt(k), m.lambda_v() * k, m.lambda_s(), m.r(),
                   m.discard_payoff());
}

std::vector<std::vector<int>> interval_positions(int n) {
  if (n < 1) throw std::invalid_argument("interval_positions: n must be >= 1");
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n + 1; ++j) {
      std::vector<int> s;
      for (int p = 1; p <= i; ++p) s.push_back(p);
      for (int p = std::max(j, i + 1); p <= n; ++p) s.push_back(p);
      if (s.empty() || !seen.insert(s).second) continue;
      out.push_back(s);
    }
  return out;
}

std::vector<Display> interval_sets(const MnlMarket& m) {
  std::vector<Display> out;
  for (const auto& pos : interval_positions(static_cast<int>(m.size()))) {
    Display d;
    for (int p : pos) d.push_back(m.products()[p - 1].id);
    std::sort(d.begin(), d.end());
    out.push_back(d);
  }
  return out;
}

double np_volatility_score(const std::vector<double>& du, const std::vector<int>& positions) {
  const double n = static_cast<double>(positions.size() + 1);
  double mean = 0.0;
  for (int p : positions) mean += du[p - 1];
  mean /= n;
  double v = mean * mean;  // the no-purchase term
  for (int p : positions) v += (du[p - 1] - mean) * (du[p - 1] - mean);
  return v / n;
}

std::vector<int> np_optimal_display(const std::vector<double>& du) {
  const int n = static_cast<int>(du.size());
  if (n < 1) throw std::invalid_argument("np_optimal_display: empty input");
  // Work in sorted order, report original (1-based) indices.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return du[a - 1] < du[b - 1]; });
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = du[order[i] - 1];

  const bool same_sign = sorted.front() >= 0.0 || sorted.back() <= 0.0;
  if (same_sign) {
    int best = 1;
    for (int i = 2; i <= n; ++i)
      if (std::abs(du[i - 1]) > std::abs(du[best - 1])) best = i;
    return {best};
  }
  std::vector<int> best;
  double bv = -1.0;
  for (const auto& pos : interval_positions(n)) {
    const double v = np_volatility_score(sorted, pos);
    std::vector<int> ids;
    for (int p : pos) ids.push_back(order[p - 1]);
    std::sort(ids.begin(), ids.end());
    if (v > bv + 1e-15 || (std::abs(v - bv) <= 1e-15 && ids < best)) {
      bv = v;
      best = ids;
    }
  }
  return best;
}

IhResult ih_scaling(const MnlMarket& m, const std::vector<double>& xi, double k,
                    const std::vector<Display>& displays) {
  if (xi.size() != m.size())
    throw std::invalid_argument("ih_scaling: xi must have one entry per product");
  if (!(k > 0.0)) throw std::invalid_argument("ih_scaling: k must be > 0");
  std::vector<MnlProduct> ps = m.products();
  for (std::size_t i = 0; i < ps.size(); ++i) ps[i].u1 = ps[i].u0 + xi[i] / std::sqrt(k);
  MnlMarket scaled(ps, m.mu(), m.lambda_v(), m.lambda_s(), m.r(), m.discard_payoff());

  IhResult res{scaled, displays, {}, 0, true};
  auto xi_of = [&](int id) {
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.products()[i].id == id) return xi[i];
    throw std::invalid_argument("ih_scaling: unknown product id");
  };
  double best = -1.0;
  for (std::size_t e = 0; e < displays.size(); ++e) {
    const auto& d = displays[e];
    std::vector<double> nu{1.0}, x{0.0};
    for (int id : d) {
      nu.push_back(std::exp(m.mu() * m.product(id).u0));
      x.push_back(xi_of(id));
    }
    double z = 0.0;
    for (double v : nu) z += v;
    std::vector<double> kernel(nu.size()), a0(nu.size(), 0.0), a1(nu.size());
    double xbar = 0.0;
    for (std::size_t t = 0; t < nu.size(); ++t) {
      kernel[t] = nu[t] / z;
      xbar += x[t] * kernel[t];
    }
    for (std::size_t t = 0; t < nu.size(); ++t) a1[t] = x[t] - xbar;
    AsymptoticExperiment a;
    a.experiment_id = display_id(d);
    a.kernel = kernel;
    a.alpha0 = a0;
    a.alpha1 = a1;
    for (std::size_t t = 0; t < nu.size(); ++t) a.vol_term += a1[t] * a1[t] * kernel[t];
    if (a.vol_term > best) {
      best = a.vol_term;
      res.best = e;
    }
    if (a.vol_term > 0.0) res.degenerate = false;
    res.asymptotic.push_back(std::move(a));
  }
  return res;
}

MnlMarket random_market(int n, double mu, double lambda_v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<MnlProduct> ps;
  for (int i = 1; i <= n; ++i) {
    MnlProduct p;
    p.id = i;
    p.u0 = u(rng);
    p.u1 = u(rng);
    ps.push_back(p);
  }
  return MnlMarket(ps, mu, lambda_v, 0.0, 1.0);
}

double assortment_revenue(const MnlMarket& m, const Display& s, Hypothesis h) {
  if (s.empty()) return 0.0;
  const auto q = choice_probs(m, s, h);
  double rev = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) rev += m.product(s[k]).margin() * q[k + 1];
  return rev;
}

Display best_assortment(const MnlMarket& m, const std::vector<double>& v) {
  if (v.size() != m.size()) throw std::invalid_argument("best_assortment: size mismatch");
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m.products()[a].margin() > m.products()[b].margin();
  });
  Display best;
  double bv = 0.0, num = 0.0, den = 1.0;
  Display cur;
  for (std::size_t i : order) {
    num += m.products()[i].margin() * v[i];
    den += v[i];
    cur.push_back(m.products()[i].id);
    if (num / den > bv) {
      bv = num / den;
      best = cur;
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace seqexp
