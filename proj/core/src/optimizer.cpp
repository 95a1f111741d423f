#include "ddrr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddrr/keyrate.hpp"
#include "ddrr/photonstats.hpp"

namespace ddrr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kCoarseGridPoints = 64;

/// Rate evaluation at one distance. Holds the mu-level intermediates so the
/// v_th scan reuses the LP solve.
class RateModel {
 public:
  RateModel(const OptimizationSpec& spec, double distance_km)
      : spec_(spec),
        channel_(spec.channel(distance_km)),
        train_detector_(spec.train_detector()),
        pulse_detector_(spec.pulse_detector()) {
    const int L = spec.pulses_per_train;
    switch (spec.protocol) {
      case Protocol::DdRrdps:
        // privacy amplification argument v/(L-1) is only informative on the
        // increasing branch of the entropy; search no further than its apex
        v_cap_ = std::min(spec.v_th_max, (L - 1) / 2);
        break;
      case Protocol::PassiveRrdps:
        v_cap_ = std::min(spec.v_th_max, L / 4);  // argument 2v/L, same branch
        break;
      case Protocol::Bb84Decoy:
        v_cap_ = 0;
        break;
    }
  }

  struct MuEval {
    bool usable = false;
    double gain = 0.0;
    double e_bit = 0.0;
    std::optional<double> g_min;
    double bb84_rate = kNegInf;
  };

  MuEval eval_mu(double mu) const {
    MuEval ev;
    switch (spec_.protocol) {
      case Protocol::DdRrdps: {
        ev.gain = overall_gain(mu, channel_, train_detector_);
        if (!(ev.gain > 0.0)) return ev;  // no clicks at all
        const GminResult g = min_single_photon_gain(
            mu, channel_, train_detector_, spec_.n_max, spec_.lp_slack);
        if (!g.feasible()) {
          return ev;  // truncation made the observed gains unreachable
        }
        ev.g_min = g.g_min;
        ev.e_bit = qber(mu, channel_, train_detector_, spec_.misalignment);
        ev.usable = true;
        return ev;
      }
      case Protocol::PassiveRrdps:
        ev.gain = overall_gain(mu, channel_, train_detector_);
        if (!(ev.gain > 0.0)) return ev;
        ev.e_bit = qber(mu, channel_, train_detector_, spec_.misalignment);
        ev.usable = true;
        return ev;
      case Protocol::Bb84Decoy:
        ev.gain = overall_gain(mu, channel_, pulse_detector_);
        if (!(ev.gain > 0.0)) return ev;
        ev.e_bit = qber(mu, channel_, pulse_detector_, spec_.misalignment);
        ev.bb84_rate = bb84_decoy_rate(mu, channel_, pulse_detector_,
                                       spec_.misalignment, spec_.ec_efficiency);
        ev.usable = true;
        return ev;
    }
    return ev;
  }

  double rate(const MuEval& ev, double mu, int v) const {
    if (!ev.usable) return kNegInf;
    if (spec_.protocol == Protocol::Bb84Decoy) return ev.bb84_rate;
    KeyRateInputs in;
    in.gain = ev.gain;
    in.e_bit = ev.e_bit;
    in.e_src = source_tail(mu, v);
    in.protocol.pulses_per_train = spec_.pulses_per_train;
    in.protocol.mean_photon_number = mu;
    in.protocol.source_threshold = v;
    in.protocol.ec_efficiency = spec_.ec_efficiency;
    in.protocol.misalignment = spec_.misalignment;
    if (spec_.protocol == Protocol::DdRrdps) {
      in.g_min = *ev.g_min;
      return k2_rate(in);
    }
    return k3_rate(in);
  }

  /// Best v_th for a fixed mu (exhaustive integer scan); v is 0 for BB84.
  std::pair<double, int> best_v(const MuEval& ev, double mu) const {
    if (spec_.protocol == Protocol::Bb84Decoy) {
      return {ev.usable ? ev.bb84_rate : kNegInf, 0};
    }
    double best = kNegInf;
    int best_v = v_floor();
    if (!ev.usable) return {best, best_v};
    for (int v = v_floor(); v <= v_cap_; ++v) {
      const double r = rate(ev, mu, v);
      if (r > best) {
        best = r;
        best_v = v;
      }
    }
    return {best, best_v};
  }

  int v_floor() const { return std::max(0, spec_.v_th_min); }

  int v_cap() const { return v_cap_; }

 private:
  const OptimizationSpec& spec_;
  ChannelParams channel_;
  DetectorParams train_detector_;
  DetectorParams pulse_detector_;
  int v_cap_ = 0;
};

struct Candidate {
  double mu = 0.0;
  int v = 0;
  double rate = kNegInf;
};

/// Strict improvement ordering with the deterministic tie-break:
/// higher rate, then smaller mu, then smaller v_th.
bool better(const Candidate& a, const Candidate& b) {
  if (a.rate != b.rate) return a.rate > b.rate;
  if (a.mu != b.mu) return a.mu < b.mu;
  return a.v < b.v;
}

/// Golden-section minimization of -rate over [lo,hi] at fixed v. Tracks the
/// best evaluated point rather than trusting unimodality blindly.
Candidate golden_mu(const RateModel& model, double lo, double hi, int v,
                    Candidate best) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  auto eval = [&](double mu) {
    const double r = model.rate(model.eval_mu(mu), mu, v);
    const Candidate c{mu, v, r};
    if (better(c, best)) best = c;
    return r;
  };
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > 1e-10 * (1.0 + 0.5 * (a + b))) {
    if (f1 >= f2) {  // keep the left interval, maximum is in [a, x2]
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    }
  }
  return best;
}

Candidate refine(const RateModel& model, const OptimizationSpec& spec,
                 Candidate start, double bracket_factor) {
  Candidate current = start;
  for (int iter = 0; iter < spec.max_iterations; ++iter) {
    const double lo = std::max(spec.mu_min, current.mu / bracket_factor);
    const double hi = std::min(spec.mu_max, current.mu * bracket_factor);
    Candidate after_mu = golden_mu(model, lo, hi, current.v, current);
    const auto [r, v] = model.best_v(model.eval_mu(after_mu.mu), after_mu.mu);
    Candidate after_v{after_mu.mu, v, r};
    Candidate next = better(after_v, after_mu) ? after_v : after_mu;
    if (!better(next, current)) break;
    const double reference = std::max(std::abs(current.rate), 1e-300);
    const double improvement =
        (current.rate == kNegInf) ? 1.0 : (next.rate - current.rate) / reference;
    current = next;
    if (improvement < spec.improvement_tol) break;
  }
  return current;
}

KeyRatePoint finish_point(const RateModel& model, const OptimizationSpec& spec,
                          double distance_km, const Candidate& best) {
  KeyRatePoint point;
  point.distance_km = distance_km;
  point.protocol = spec.protocol;
  point.mu = best.mu;
  point.v_th = best.v;
  const RateModel::MuEval ev = model.eval_mu(best.mu);
  point.gain = ev.gain;
  point.e_bit = ev.e_bit;
  point.g_min = ev.g_min;
  point.e_src = (spec.protocol == Protocol::Bb84Decoy)
                    ? 0.0
                    : source_tail(best.mu, best.v);
  if (best.rate == kNegInf) {
    point.rate_per_pulse = 0.0;
    point.no_positive_rate = true;
  } else {
    point.rate_per_pulse = best.rate;
    point.no_positive_rate = !(best.rate > 0.0);
  }
  return point;
}

Candidate coarse_start(const RateModel& model, const OptimizationSpec& spec) {
  Candidate best;
  best.mu = spec.mu_min;
  best.v = std::max(0, spec.v_th_min);
  const double ratio = spec.mu_max / spec.mu_min;
  for (int i = 0; i < kCoarseGridPoints; ++i) {
    const double t = static_cast<double>(i) / (kCoarseGridPoints - 1);
    const double mu = spec.mu_min * std::pow(ratio, t);
    const auto [r, v] = model.best_v(model.eval_mu(mu), mu);
    const Candidate c{mu, v, r};
    if (better(c, best)) best = c;
  }
  return best;
}

double grid_bracket_factor(const OptimizationSpec& spec) {
  return std::pow(spec.mu_max / spec.mu_min, 1.0 / (kCoarseGridPoints - 1));
}

}  // namespace

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::DdRrdps:
      return "dd-rrdps";
    case Protocol::PassiveRrdps:
      return "passive-rrdps";
    case Protocol::Bb84Decoy:
      return "bb84-decoy";
  }
  return "unknown";
}

Protocol protocol_from_string(std::string_view name) {
  if (name == "dd-rrdps") return Protocol::DdRrdps;
  if (name == "passive-rrdps") return Protocol::PassiveRrdps;
  if (name == "bb84-decoy") return Protocol::Bb84Decoy;
  throw std::invalid_argument("unknown protocol '" + std::string(name) +
                              "' (expected dd-rrdps, passive-rrdps or "
                              "bb84-decoy)");
}

void OptimizationSpec::validate() const {
  if (pulses_per_train < 2) {
    throw std::invalid_argument("pulses per train must be >= 2");
  }
  if (!(dark_count_base >= 0.0) ||
      !(dark_count_base * pulses_per_train < 1.0)) {
    throw std::invalid_argument("per-train dark count must lie in [0,1)");
  }
  if (!(mu_min > 0.0 && mu_min <= mu_max)) {
    throw std::invalid_argument("mu range must satisfy 0 < mu_min <= mu_max");
  }
  if (v_th_min < 0 || v_th_min > v_th_max) {
    throw std::invalid_argument("v_th range is empty");
  }
  if (!(improvement_tol >= 0.0)) {
    throw std::invalid_argument("improvement tolerance must be >= 0");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("max iterations must be >= 1");
  }
  if (n_max < 0) {
    throw std::invalid_argument("n_max must be >= 0");
  }
  if (!(lp_slack >= 0.0)) {
    throw std::invalid_argument("slack must be >= 0");
  }
  train_detector().validate();
}

ChannelParams OptimizationSpec::channel(double distance_km) const {
  ChannelParams ch;
  ch.fiber_loss_db_per_km = fiber_loss_db_per_km;
  ch.distance_km = distance_km;
  ch.validate();
  return ch;
}

DetectorParams OptimizationSpec::train_detector() const {
  DetectorParams det;
  det.efficiency = detector_efficiency;
  det.dark_count = dark_count_base * pulses_per_train;
  det.decoy_settings = decoy_settings;
  return det;
}

DetectorParams OptimizationSpec::pulse_detector() const {
  DetectorParams det;
  det.efficiency = detector_efficiency;
  det.dark_count = dark_count_base;
  det.decoy_settings = decoy_settings;
  return det;
}

KeyRatePoint optimize_point(const OptimizationSpec& spec, double distance_km) {
  spec.validate();
  const RateModel model(spec, distance_km);
  const Candidate start = coarse_start(model, spec);
  const Candidate best = refine(model, spec, start, grid_bracket_factor(spec));
  return finish_point(model, spec, distance_km, best);
}

KeyRatePoint optimize_point(const OptimizationSpec& spec, double distance_km,
                            const KeyRatePoint& warm) {
  spec.validate();
  const RateModel model(spec, distance_km);
  const double factor = grid_bracket_factor(spec);
  const Candidate cold = refine(model, spec, coarse_start(model, spec), factor);

  const double warm_mu = std::clamp(warm.mu, spec.mu_min, spec.mu_max);
  const int v_lo = std::max(0, spec.v_th_min);
  const int warm_v = std::clamp(warm.v_th, v_lo, std::max(v_lo, model.v_cap()));
  Candidate seed{warm_mu, warm_v,
                 model.rate(model.eval_mu(warm_mu), warm_mu, warm_v)};
  const Candidate warmed = refine(model, spec, seed, factor);

  const Candidate best = better(warmed, cold) ? warmed : cold;
  return finish_point(model, spec, distance_km, best);
}

std::vector<KeyRatePoint> scan_distances(const OptimizationSpec& spec,
                                         double d_min, double d_max,
                                         double d_step, bool warm_start) {
  spec.validate();
  if (!(d_min >= 0.0) || !(d_min <= d_max)) {
    throw std::invalid_argument("scan needs 0 <= d_min <= d_max");
  }
  if (!(d_step > 0.0)) {
    throw std::invalid_argument("scan step must be > 0");
  }
  const int count =
      static_cast<int>(std::floor((d_max - d_min) / d_step + 1e-9)) + 1;
  std::vector<KeyRatePoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double d = d_min + i * d_step;
    if (warm_start && !points.empty()) {
      points.push_back(optimize_point(spec, d, points.back()));
    } else {
      points.push_back(optimize_point(spec, d));
    }
  }
  return points;
}

double cutoff_distance(std::span<const KeyRatePoint> scan) {
  if (scan.empty()) {
    throw std::invalid_argument("cutoff of an empty scan");
  }
  double cutoff = 0.0;
  for (const KeyRatePoint& p : scan) {
    if (p.clamped_rate() > 0.0) cutoff = p.distance_km;
  }
  return cutoff;
}

}  // namespace ddrr
