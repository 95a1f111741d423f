#pragma once

#include <cstdint>

#include "ddrr/model.hpp"

namespace ddrr {

/// Name of the generator behind the estimators, recorded in outputs so runs
/// can be reproduced exactly.
inline constexpr const char* kMcGeneratorName = "mt19937_64";

/// One simulated scenario: per-train source, channel, detector, which decoy
/// setting the attenuator sits at, and the misalignment error probability.
struct McScenario {
  double mu = 1.0;
  ChannelParams channel{};
  DetectorParams detector{};
  std::size_t decoy_index = 0;
  double misalignment = 0.015;
};

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  McScenario scenario{};

  void validate() const;
};

/// Bernoulli-style estimate; std_error = sqrt(mean(1-mean)/trials) where
/// trials is the effective Bernoulli count of the estimator.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Click-rate estimate: per trial, draw the train's photon number from
/// Poisson(mu), thin every photon by eta_t*eta_k*eta_d, and click when a
/// photon survives or the dark-count Bernoulli fires.
McEstimate estimate_gain(const McConfig& config);

/// Error-rate estimate over clicking trials in the unattenuated signal mode:
/// clicks that involve a dark count err with probability 1/2, pure signal
/// clicks with the misalignment probability. Throws std::runtime_error when
/// no trial clicks.
McEstimate estimate_qber(const McConfig& config);

struct ArrivalHistogram {
  PhotonDistribution distribution;  // sub-normalized when tail_mass > 0
  double tail_mass = 0.0;
  std::uint64_t trials = 0;
};

/// Empirical post-channel (pre-detector) photon-number histogram, truncated
/// at n_max with the remaining mass reported separately.
ArrivalHistogram estimate_arrival_distribution(const McConfig& config,
                                               int n_max);

}  // namespace ddrr
