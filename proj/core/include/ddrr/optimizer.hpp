#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddrr/model.hpp"

namespace ddrr {

enum class Protocol { DdRrdps, PassiveRrdps, Bb84Decoy };

std::string to_string(Protocol protocol);
Protocol protocol_from_string(std::string_view name);

/// Everything a per-distance optimization needs except the distance itself.
/// Dark counts are specified per pulse (`dark_count_base`); the round-robin
/// protocols use dark_count_base * L per train while the BB84 comparator
/// uses the per-pulse value directly.
struct OptimizationSpec {
  Protocol protocol = Protocol::DdRrdps;
  int pulses_per_train = 128;
  double dark_count_base = 1e-9;
  double detector_efficiency = 0.19;
  std::vector<double> decoy_settings{1.0, 0.8, 0.6};
  double misalignment = 0.015;
  double ec_efficiency = 1.16;
  double fiber_loss_db_per_km = 0.2;
  int n_max = 10;
  double lp_slack = 1e-9;

  double mu_min = 1e-4;
  double mu_max = 50.0;
  int v_th_min = 1;
  int v_th_max = 100;
  double improvement_tol = 1e-9;
  int max_iterations = 100;

  void validate() const;
  ChannelParams channel(double distance_km) const;
  /// Detector with the per-train dark count (base rate times L).
  DetectorParams train_detector() const;
  /// Detector with the per-pulse dark count, as the BB84 comparator uses.
  DetectorParams pulse_detector() const;
};

/// One optimized scan point with every intermediate the rate needed.
struct KeyRatePoint {
  double distance_km = 0.0;
  Protocol protocol = Protocol::DdRrdps;
  double mu = 0.0;
  int v_th = 0;
  double gain = 0.0;
  double e_bit = 0.0;
  double e_src = 0.0;
  std::optional<double> g_min;  // detector-decoy protocol only
  double rate_per_pulse = 0.0;  // raw signed value
  bool no_positive_rate = false;

  double clamped_rate() const {
    return rate_per_pulse > 0.0 ? rate_per_pulse : 0.0;
  }
};

/// Deterministic coordinate search: a coarse log-spaced sweep over mu picks
/// the start, then golden-section refinement on mu alternates with an
/// exhaustive integer scan of v_th until the relative improvement drops
/// below spec.improvement_tol. Ties prefer smaller mu, then smaller v_th.
KeyRatePoint optimize_point(const OptimizationSpec& spec, double distance_km);

/// Warm-started variant: additionally refines around `warm` and returns the
/// better of the two searches, so it never loses to the cold start.
KeyRatePoint optimize_point(const OptimizationSpec& spec, double distance_km,
                            const KeyRatePoint& warm);

/// One optimized point per grid distance d_min, d_min+d_step, ..., <= d_max,
/// in ascending order. With warm_start each point seeds the next; the scan
/// is sequential by contract.
std::vector<KeyRatePoint> scan_distances(const OptimizationSpec& spec,
                                         double d_min, double d_max,
                                         double d_step,
                                         bool warm_start = true);

/// Largest grid distance whose clamped rate is positive; 0 when none is.
double cutoff_distance(std::span<const KeyRatePoint> scan);

}  // namespace ddrr
