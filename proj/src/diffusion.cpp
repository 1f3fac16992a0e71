#include "seqexp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "seqexp/csv.hpp"

namespace seqexp {

namespace {

constexpr double kEdge = 1e-9;

void check_asymptotic(const AsymptoticExperiment& a) {
  const std::size_t n = a.kernel.size();
  if (n < 2 || a.alpha0.size() != n || a.alpha1.size() != n)
    throw std::invalid_argument("asymptotic experiment " + std::to_string(a.experiment_id) +
                                ": kernel and alpha rows must have equal length >= 2");
  double mass = 0.0;
  for (double q : a.kernel) {
    if (!(q > 0.0)) throw std::invalid_argument("asymptotic experiment: kernel entries must be > 0");
    mass += q;
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("asymptotic experiment: kernel must sum to 1");
}

double vol_term_of(const std::vector<double>& k, const std::vector<double>& a0,
                   const std::vector<double>& a1) {
  double v = 0.0;
  for (std::size_t x = 0; x < k.size(); ++x) v += (a1[x] - a0[x]) * (a1[x] - a0[x]) * k[x];
  return v;
}

// Box for kernel entry x at relative-deviation level t: both ratios within t of 1.
struct Box {
  std::vector<double> lo, hi;
  double sum_lo = 0.0, sum_hi = 0.0;
  bool nonempty = true;
};

Box box_at(const Experiment& e, double t) {
  Box b;
  const std::size_t n = e.size();
  b.lo.resize(n);
  b.hi.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double a = e.q0()[x], c = e.q1()[x];
    b.lo[x] = std::max(a, c) / (1.0 + t);
    b.hi[x] = t < 1.0 ? std::min(a, c) / (1.0 - t) : std::numeric_limits<double>::infinity();
    if (b.lo[x] > b.hi[x]) b.nonempty = false;
    b.sum_lo += b.lo[x];
    b.sum_hi += b.hi[x];
  }
  return b;
}

bool feasible(const Box& b) { return b.nonempty && b.sum_lo <= 1.0 && b.sum_hi >= 1.0; }

// Pieces f = d^a (1-d)^b used by the homogeneous solutions.
template <class T>
T log_piece(T d, T a, T b) {
  return a * std::log(d) + b * std::log1p(-d);
}
double dlog_piece(double d, double a, double b) { return a / d - b / (1.0 - d); }
double d2_ratio(double d, double a, double b) {
  const double g = dlog_piece(d, a, b);
  return g * g - a / (d * d) - b / ((1.0 - d) * (1.0 - d));
}

}  // namespace

AsymptoticExperiment calibrate_kernel(const Experiment& e, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("calibrate_kernel: lambda must be >= 0");
  // The level t is feasible iff every per-outcome box is nonempty and the boxes
  // straddle the simplex; feasibility is monotone in t, so bisect on it.
  double t_lo = 0.0, t_hi = 1.0;
  if (feasible(box_at(e, 0.0))) {
    t_hi = 0.0;
  } else {
    if (!feasible(box_at(e, t_hi)))
      throw std::runtime_error("calibrate_kernel: no feasible level for experiment " +
                               std::to_string(e.id()));
    for (int it = 0; it < 200 && t_hi - t_lo > 1e-17; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      (feasible(box_at(e, mid)) ? t_hi : t_lo) = mid;
    }
  }
  const Box b = box_at(e, t_hi);
  const double span = b.sum_hi - b.sum_lo;
  const double w = span > 0.0 ? std::clamp((1.0 - b.sum_lo) / span, 0.0, 1.0) : 0.0;

  AsymptoticExperiment out;
  out.experiment_id = e.id();
  const std::size_t n = e.size();
  out.kernel.resize(n);
  double mass = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    out.kernel[x] = b.lo[x] + w * (b.hi[x] - b.lo[x]);
    mass += out.kernel[x];
  }
  for (double& q : out.kernel) q /= mass;

  const double s = std::sqrt(lambda);
  out.alpha0.resize(n);
  out.alpha1.resize(n);
  double m0 = 0.0, m1 = 0.0, obj = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double r0 = e.q0()[x] / out.kernel[x], r1 = e.q1()[x] / out.kernel[x];
    obj = std::max({obj, std::abs(r0 - 1.0), std::abs(r1 - 1.0)});
    out.alpha0[x] = s * (r0 - 1.0);
    out.alpha1[x] = s * (r1 - 1.0);
    m0 += out.alpha0[x] * out.kernel[x];
    m1 += out.alpha1[x] * out.kernel[x];
  }
  for (std::size_t x = 0; x < n; ++x) {
    out.alpha0[x] -= m0;
    out.alpha1[x] -= m1;
  }
  out.objective = obj;
  out.centering = std::max(std::abs(m0), std::abs(m1));
  out.vol_term = vol_term_of(out.kernel, out.alpha0, out.alpha1);
  return out;
}

AsymptoticExperiment make_asymptotic(int id, std::vector<double> kernel,
                                     std::vector<double> alpha0, std::vector<double> alpha1) {
  AsymptoticExperiment a;
  a.experiment_id = id;
  a.kernel = std::move(kernel);
  a.alpha0 = std::move(alpha0);
  a.alpha1 = std::move(alpha1);
  check_asymptotic(a);
  for (const auto* row : {&a.alpha0, &a.alpha1}) {
    double m = 0.0;
    for (std::size_t x = 0; x < a.kernel.size(); ++x) m += (*row)[x] * a.kernel[x];
    if (std::abs(m) > 1e-9)
      throw std::invalid_argument("asymptotic experiment " + std::to_string(id) +
                                  ": alpha rows must have zero kernel mean");
  }
  a.vol_term = vol_term_of(a.kernel, a.alpha0, a.alpha1);
  return a;
}

MaxVolResult select_max_vol(const std::vector<AsymptoticExperiment>& asyms) {
  if (asyms.empty()) throw std::invalid_argument("select_max_vol: empty experiment list");
  MaxVolResult best;
  best.winner_id = asyms[0].experiment_id;
  best.vol_term = asyms[0].vol_term;
  for (std::size_t k = 1; k < asyms.size(); ++k) {
    const auto& a = asyms[k];
    // Values within 1e-12 count as ties, which go to the lower id.
    const double tie = 1e-12 * std::max(1.0, std::abs(best.vol_term));
    if (a.vol_term > best.vol_term + tie ||
        (std::abs(a.vol_term - best.vol_term) <= tie && a.experiment_id < best.winner_id)) {
      best.winner_id = a.experiment_id;
      best.winner_index = k;
      best.vol_term = a.vol_term;
    }
  }
  best.degenerate = !(best.vol_term > 0.0);
  return best;
}

DiffusionModel make_model(const std::vector<AsymptoticExperiment>& asyms, double rate_multiplier,
                          double r) {
  const auto mv = select_max_vol(asyms);
  if (mv.degenerate) throw std::invalid_argument("make_model: all experiments are uninformative");
  if (!(rate_multiplier > 0.0) || !(r > 0.0))
    throw std::invalid_argument("make_model: rate multiplier and r must be > 0");
  return {rate_multiplier * mv.vol_term, r, mv.winner_id};
}

double gamma_exponent(double r, double sigma2) {
  if (!(r > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("gamma_exponent: r and sigma2 must be > 0");
  return 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * r / sigma2));
}

// ---------------------------------------------------------------------------
// Pair solutions. phi0 = d^(1-g) (1-d)^g, phi1 = d^g (1-d)^(1-g).

long double PairSolution::closed_form_ld(long double d) const {
  const long double g = gamma, l = lo;
  const long double r0 = std::exp(log_piece(d, 1 - g, g) - log_piece(l, 1 - g, g));
  const long double r1 = std::exp(log_piece(d, g, 1 - g) - log_piece(l, g, 1 - g));
  return static_cast<long double>(anchor_a) * r0 + static_cast<long double>(anchor_b) * r1;
}

double PairSolution::closed_form(double d) const {
  return static_cast<double>(closed_form_ld(d));
}

double PairSolution::closed_form_derivative(double d) const {
  const double g = gamma;
  const double r0 = std::exp(log_piece(d, 1 - g, g) - log_piece(lo, 1 - g, g));
  const double r1 = std::exp(log_piece(d, g, 1 - g) - log_piece(lo, g, 1 - g));
  return anchor_a * r0 * dlog_piece(d, 1 - g, g) + anchor_b * r1 * dlog_piece(d, g, 1 - g);
}

double PairSolution::closed_form_second(double d) const {
  const double g = gamma;
  const double r0 = std::exp(log_piece(d, 1 - g, g) - log_piece(lo, 1 - g, g));
  const double r1 = std::exp(log_piece(d, g, 1 - g) - log_piece(lo, g, 1 - g));
  return anchor_a * r0 * d2_ratio(d, 1 - g, g) + anchor_b * r1 * d2_ratio(d, g, 1 - g);
}

double PairSolution::payoff(double d) const { return std::max(left.at(d), right.at(d)); }

double PairSolution::value(double d) const {
  if (degenerate || d <= lo || d >= hi) return payoff(d);
  return closed_form(d);
}

double PairSolution::derivative(double d) const {
  if (degenerate || d <= lo) return d <= delta_hat ? left.beta : right.beta;
  if (d >= hi) return right.beta;
  return closed_form_derivative(d);
}

namespace {

void anchor(PairSolution& p, double lo) {
  const double g = p.gamma;
  p.lo = lo;
  const double d0 = dlog_piece(lo, 1 - g, g), d1 = dlog_piece(lo, g, 1 - g);
  const double ri = p.left.at(lo);
  p.anchor_b = (p.left.beta - ri * d0) / (d1 - d0);
  p.anchor_a = ri - p.anchor_b;
}

struct Tangency {
  double gap;  // min over [delta_hat, 1 - eps] of V - R_j
  double at;
};

// V is convex on the continuation piece, so V' - beta_j is increasing and its
// root is the minimizer of V - R_j.
Tangency tangency(const PairSolution& p) {
  const double beta = p.right.beta;
  double a = p.delta_hat, b = 1.0 - kEdge;
  auto slope = [&](double d) { return p.closed_form_derivative(d) - beta; };
  double x;
  if (slope(a) >= 0.0) {
    x = a;
  } else if (slope(b) <= 0.0) {
    x = b;
  } else {
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
      const double mid = 0.5 * (a + b);
      (slope(mid) < 0.0 ? a : b) = mid;
    }
    x = 0.5 * (a + b);
  }
  return {static_cast<double>(p.closed_form_ld(x) - static_cast<long double>(p.right.at(x))), x};
}

}  // namespace

PairSolution solve_pair(const ActionPayoff& a, const ActionPayoff& b, const DiffusionModel& model) {
  PairSolution p;
  p.gamma = gamma_exponent(model.r, model.sigma2);
  const bool a_left = a.alpha > b.alpha || (a.alpha == b.alpha && a.beta > b.beta);
  p.left = a_left ? a : b;
  p.right = a_left ? b : a;
  p.i = p.left.id;
  p.j = p.right.id;
  const std::string tag = "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
  if (!(p.right.beta > p.left.beta))
    throw std::invalid_argument(tag + ": payoffs do not cross inside (0,1)");
  p.delta_hat = (p.left.alpha - p.right.alpha) / (p.right.beta - p.left.beta);
  if (!(p.delta_hat > 0.0 && p.delta_hat < 1.0))
    throw std::invalid_argument(tag + ": payoffs do not cross inside (0,1)");
  if (!(p.left.at(p.delta_hat) > 0.0))
    throw std::invalid_argument(tag + ": payoffs cross at a non-positive value");

  auto gap_at = [&](double lo) {
    anchor(p, lo);
    return tangency(p);
  };

  double l = kEdge, h = p.delta_hat;
  if (!(gap_at(l).gap > 0.0)) {
    p.degenerate = true;
  } else {
    for (int it = 0; it < 200 && h - l > 1e-16; ++it) {
      const double mid = 0.5 * (l + h);
      (gap_at(mid).gap > 0.0 ? l : h) = mid;
    }
    const auto tl = gap_at(l);
    const auto th = gap_at(h);
    const bool use_l = std::abs(tl.gap) <= std::abs(th.gap);
    const double lo = use_l ? l : h;
    const auto t = use_l ? tl : th;
    anchor(p, lo);
    p.hi = t.at;
    if (p.hi - p.lo <= 1e-12) p.degenerate = true;
  }
  if (p.degenerate) {
    p.lo = p.hi = p.delta_hat;
    p.anchor_a = p.anchor_b = 0.0;
    p.c0 = p.c1 = 0.0;
    return p;
  }
  const double g = p.gamma;
  p.c0 = p.anchor_a * std::exp(-log_piece(p.lo, 1 - g, g));
  p.c1 = p.anchor_b * std::exp(-log_piece(p.lo, g, 1 - g));
  return p;
}

// ---------------------------------------------------------------------------
// Composition.

DiffusionValue::DiffusionValue(std::vector<ActionPayoff> actions, DiffusionModel model,
                               std::vector<PairSolution> pairs, std::vector<std::string> skipped)
    : actions_(std::move(actions)),
      model_(model),
      pairs_(std::move(pairs)),
      skipped_(std::move(skipped)) {
  if (actions_.empty()) throw std::invalid_argument("DiffusionValue: no actions");
  build_segments();
}

int DiffusionValue::argmax_pair(double d) const {
  int best = -1;
  double bv = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const double v = pairs_[k].value(d);
    if (v > bv) {
      bv = v;
      best = static_cast<int>(k);
    }
  }
  return best;
}

double DiffusionValue::value(double d) const {
  if (pairs_.empty()) return terminal_value(actions_, d);
  return pairs_[argmax_pair(d)].value(d);
}

long double DiffusionValue::value_ld(long double d) const {
  if (pairs_.empty()) return terminal_value(actions_, static_cast<double>(d));
  long double best = -std::numeric_limits<long double>::infinity();
  for (const auto& p : pairs_) {
    long double v;
    const double dd = static_cast<double>(d);
    if (p.degenerate || dd <= p.lo || dd >= p.hi)
      v = std::max(p.left.alpha + p.left.beta * d, p.right.alpha + p.right.beta * d);
    else
      v = p.closed_form_ld(d);
    best = std::max(best, v);
  }
  return best;
}

int DiffusionValue::active_pair(double d) const {
  if (pairs_.empty()) return -1;
  const int k = argmax_pair(d);
  const auto& p = pairs_[k];
  return (!p.degenerate && d > p.lo && d < p.hi) ? k : -1;
}

bool DiffusionValue::in_intervention(double d) const { return active_pair(d) < 0; }

double DiffusionValue::derivative(double d, int side) const {
  const double probe = side < 0 ? std::nextafter(d, 0.0) : std::nextafter(d, 1.0);
  const int k = active_pair(probe);
  if (k >= 0) return pairs_[k].closed_form_derivative(d);
  return actions_[best_action(actions_, probe)].beta;
}

namespace {

struct Tag {
  bool stop;
  int id;  // action id or pair index
  bool operator==(const Tag& o) const { return stop == o.stop && id == o.id; }
  bool operator!=(const Tag& o) const { return !(*this == o); }
};

}  // namespace

void DiffusionValue::build_segments() {
  auto tag_at = [&](double d) {
    const int k = active_pair(d);
    if (k >= 0) return Tag{false, k};
    return Tag{true, actions_[best_action(actions_, d)].id};
  };
  std::vector<double> cuts{0.0, 1.0};
  for (const auto& p : pairs_) {
    if (p.degenerate) continue;
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (std::size_t a = 0; a < actions_.size(); ++a)
    for (std::size_t b = a + 1; b < actions_.size(); ++b) {
      const double db = actions_[b].beta - actions_[a].beta;
      if (db == 0.0) continue;
      const double x = (actions_[a].alpha - actions_[b].alpha) / db;
      if (x > 0.0 && x < 1.0) cuts.push_back(x);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Scan each cut interval and bisect every tag change to machine precision.
  std::vector<double> bps{0.0};
  constexpr double kScan = 1e-4;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    if (b - a <= 0.0) continue;
    const int steps = std::max(2, static_cast<int>(std::ceil((b - a) / kScan)));
    double prev_x = a + (b - a) * 0.5 / steps;
    Tag prev = tag_at(prev_x);
    for (int s = 1; s < steps; ++s) {
      const double x = a + (b - a) * (s + 0.5) / steps;
      Tag cur = tag_at(x);
      if (cur != prev) {
        double l = prev_x, h = x;
        for (int it = 0; it < 100 && h - l > 1e-15; ++it) {
          const double m = 0.5 * (l + h);
          (tag_at(m) == prev ? l : h) = m;
        }
        bps.push_back(0.5 * (l + h));
      }
      prev = cur;
      prev_x = x;
    }
    bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());

  segments_.clear();
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const double a = bps[k], b = bps[k + 1];
    if (b - a <= 0.0) continue;
    const Tag t = tag_at(0.5 * (a + b));
    if (!segments_.empty()) {
      auto& last = segments_.back();
      const Tag lt{last.stop, last.stop ? last.action_id : last.pair};
      if (lt == t) {
        last.hi = b;
        continue;
      }
    }
    Segment s;
    s.lo = a;
    s.hi = b;
    s.stop = t.stop;
    if (t.stop)
      s.action_id = t.id;
    else
      s.pair = t.id;
    segments_.push_back(s);
  }
}

std::vector<double> DiffusionValue::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments_) out.push_back(s.lo);
  out.push_back(1.0);
  return out;
}

const Segment& DiffusionValue::segment_at(double d) const {
  for (const auto& s : segments_)
    if (d <= s.hi) return s;
  return segments_.back();
}

std::vector<std::pair<double, double>> DiffusionValue::continuation_intervals() const {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : segments_) {
    if (s.stop) continue;
    if (!out.empty() && out.back().second == s.lo)
      out.back().second = s.hi;
    else
      out.emplace_back(s.lo, s.hi);
  }
  return out;
}

QviReport qvi_residual(const DiffusionValue& dv, double mesh) {
  if (!(mesh > 0.0 && mesh < 0.5)) throw std::invalid_argument("qvi_residual: bad mesh");
  const auto bps = dv.breakpoints();
  const long double h = 1e-5L;
  const long double s2 = dv.model().sigma2, r = dv.model().r;
  QviReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  const long n = std::lround(1.0 / mesh);
  for (long k = 0; k <= n; ++k) {
    const double d = k == n ? 1.0 : static_cast<double>(k) / static_cast<double>(n);
    rep.min_gap = std::min(rep.min_gap, dv.value(d) - terminal_value(dv.actions(), d));
    if (k == 0 || k == n) continue;
    bool near = false;
    for (double b : bps) near = near || std::abs(d - b) <= 2.0 * static_cast<double>(h);
    if (near) continue;
    const long double x = d;
    const long double v = dv.value_ld(x);
    const long double v2 = (dv.value_ld(x + h) - 2 * v + dv.value_ld(x - h)) / (h * h);
    const long double hv = 0.5L * s2 * x * x * (1 - x) * (1 - x) * v2 - r * v;
    const double res = static_cast<double>(hv);
    if (dv.in_continuation(d))
      rep.continuation_residual = std::max(rep.continuation_residual, std::abs(res));
    else
      rep.intervention_residual = std::max(rep.intervention_residual, res);
    ++rep.checked_nodes;
  }
  return rep;
}

DiffusionValue compose_value(const std::vector<ActionPayoff>& actions, const DiffusionModel& model,
                             bool verify) {
  if (!(model.sigma2 > 0.0)) throw std::invalid_argument("compose_value: sigma2 must be > 0");
  std::vector<PairSolution> pairs;
  std::vector<std::string> skipped;
  for (std::size_t a = 0; a < actions.size(); ++a)
    for (std::size_t b = a + 1; b < actions.size(); ++b) {
      try {
        pairs.push_back(solve_pair(actions[a], actions[b], model));
      } catch (const std::invalid_argument& e) {
        skipped.emplace_back(e.what());
      }
    }
  DiffusionValue dv(actions, model, std::move(pairs), std::move(skipped));
  if (verify) {
    const auto rep = qvi_residual(dv);
    if (rep.continuation_residual > 1e-6 || rep.intervention_residual > 1e-6 ||
        rep.min_gap < -1e-9) {
      std::ostringstream os;
      os << "compose_value: QVI check failed (continuation " << rep.continuation_residual
         << ", intervention " << rep.intervention_residual << ", min V-G " << rep.min_gap << ")";
      throw std::runtime_error(os.str());
    }
  }
  return dv;
}

DiffusionValue compose_value(const Instance& inst, const DiffusionModel& model, bool verify) {
  return compose_value(inst.actions(), model, verify);
}

AsymptoticPlan plan_asymptotic(const Instance& inst, bool verify) {
  std::vector<AsymptoticExperiment> asyms;
  asyms.reserve(inst.experiments().size());
  for (const auto& e : inst.experiments()) asyms.push_back(calibrate_kernel(e, inst.lambda()));
  const auto winner = select_max_vol(asyms);
  const auto model = make_model(asyms, 1.0, inst.r());
  auto dv = compose_value(inst, model, verify);
  return {std::move(asyms), winner, model, std::move(dv)};
}

// ---------------------------------------------------------------------------

StoppingStats stopping_stats(double lo, double hi, double sigma2, double delta) {
  if (!(lo > kEdge && hi < 1.0 - kEdge && lo <= hi))
    throw std::invalid_argument("stopping_stats: thresholds must lie strictly inside (0,1)");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("stopping_stats: sigma2 must be > 0");
  if (delta <= lo) return {0.0, 0.0};
  if (delta >= hi) return {1.0, 0.0};
  auto T = [&](double d) { return 2.0 / sigma2 * (2.0 * d - 1.0) * std::log(d / (1.0 - d)); };
  const double p = (delta - lo) / (hi - lo);
  return {p, p * T(hi) + (1.0 - p) * T(lo) - T(delta)};
}

StoppingStats stopping_stats(const PairSolution& pair, const DiffusionModel& model,
                             double delta) {
  if (pair.degenerate) return {delta >= pair.hi ? 1.0 : 0.0, 0.0};
  return stopping_stats(pair.lo, pair.hi, model.sigma2, delta);
}

std::vector<double> simulate_sde(const DiffusionModel& model, double delta0, double dt,
                                 double horizon, std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_sde: dt must be > 0");
  if (!(delta0 >= 0.0 && delta0 <= 1.0))
    throw std::invalid_argument("simulate_sde: delta0 must lie in [0,1]");
  const auto steps = static_cast<std::size_t>(std::max(0.0, std::ceil(horizon / dt)));
  std::vector<double> path;
  path.reserve(steps + 1);
  path.push_back(delta0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double sig = std::sqrt(std::max(0.0, model.sigma2)), sq = std::sqrt(dt);
  double d = delta0;
  for (std::size_t k = 0; k < steps; ++k) {
    d = std::clamp(d + sig * d * (1.0 - d) * sq * z(rng), 0.0, 1.0);
    path.push_back(d);
  }
  return path;
}

void write_pairs_csv(const std::string& path, const DiffusionValue& dv) {
  CsvWriter w(path, {"i", "j", "gamma", "lo", "hi", "c0", "c1", "degenerate"});
  for (const auto& p : dv.pairs())
    w.row({std::to_string(p.i), std::to_string(p.j), fmt12(p.gamma), fmt12(p.lo), fmt12(p.hi),
           fmt12(p.c0), fmt12(p.c1), p.degenerate ? "1" : "0"});
}

void write_diffusion_csv(const std::string& path, const DiffusionValue& dv, double mesh) {
  if (!(mesh > 0.0 && mesh <= 0.5)) throw std::invalid_argument("write_diffusion_csv: bad mesh");
  CsvWriter w(path, {"delta", "value", "tag"});
  const long n = std::lround(1.0 / mesh);
  for (long k = 0; k <= n; ++k) {
    const double d = k == n ? 1.0 : static_cast<double>(k) / static_cast<double>(n);
    const int pk = dv.active_pair(d);
    std::string tag;
    if (pk >= 0) {
      const auto& p = dv.pairs()[pk];
      tag = "continue:" + std::to_string(p.i) + "-" + std::to_string(p.j);
    } else {
      tag = "stop:" + std::to_string(dv.actions()[best_action(dv.actions(), d)].id);
    }
    w.row({fmt12(d), fmt12(dv.value(d)), tag});
  }
}

}  // namespace seqexp
