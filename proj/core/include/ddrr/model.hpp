#pragma once

#include <cstddef>
#include <vector>

namespace ddrr {

/// Fiber channel described by its loss rate (dB/km) and length (km).
struct ChannelParams {
  double fiber_loss_db_per_km = 0.2;
  double distance_km = 0.0;

  /// Throws std::domain_error on negative loss rate or distance.
  void validate() const;
};

/// Threshold single-photon detector behind a variable attenuator.
///
/// `decoy_settings` lists the attenuator transmittances eta_k in the order
/// they are cycled through; they must be strictly decreasing and lie in
/// (0,1]. The first entry is conventionally 1 (no attenuation) but may be
/// overridden. `dark_count` is the dark-count probability per detection
/// window, which in the round-robin setting is a whole pulse train.
struct DetectorParams {
  double efficiency = 0.19;
  double dark_count = 0.0;
  std::vector<double> decoy_settings{1.0, 0.8, 0.6};

  void validate() const;
};

/// Source and post-processing parameters for one protocol run.
struct ProtocolParams {
  int pulses_per_train = 128;       // L
  double mean_photon_number = 1.0;  // mu, per train
  int source_threshold = 20;        // v_th
  double ec_efficiency = 1.16;      // f
  double misalignment = 0.015;      // e_d

  void validate() const;
};

/// Photon-number distribution p_0..p_{n_max}, n_max = probs.size()-1.
///
/// A normalized distribution must sum to 1 within `tol`. Distributions that
/// deliberately carry less than unit mass (e.g. empirical histograms with a
/// separately reported tail) set `sub_normalized`, which skips the sum check.
struct PhotonDistribution {
  std::vector<double> probs;
  bool sub_normalized = false;

  int n_max() const { return static_cast<int>(probs.size()) - 1; }
  double total() const;
  void validate(double tol = 1e-9) const;
};

/// Channel transmittance 10^(-beta*d/10).
double transmittance(const ChannelParams& channel);

/// Per-train detection probability Q = 1-(1-p_d)exp(-mu*eta_t*eta_d).
double overall_gain(double mu, const ChannelParams& channel,
                    const DetectorParams& detector);

/// Bit error rate e_b = [e_d(1-p_d)(1-exp(-mu*eta_t*eta_d)) + p_d/2]/Q.
/// Requires Q > 0 at these parameters.
double qber(double mu, const ChannelParams& channel,
            const DetectorParams& detector, double misalignment);

/// Yield of an i-photon state under decoy setting k:
/// Y_i^k = 1-(1-p_d)(1-eta_t*eta_k*eta_d)^i.
double decoy_yield(int photon_number, const ChannelParams& channel,
                   const DetectorParams& detector, std::size_t decoy_index);

/// Gain under decoy setting k: Q_k = 1-(1-p_d)exp(-mu*eta_t*eta_k*eta_d),
/// the Poisson mixture of decoy_yield over the photon number.
double decoy_gain(double mu, const ChannelParams& channel,
                  const DetectorParams& detector, std::size_t decoy_index);

/// Click probability of a received distribution under decoy setting k:
/// T_k = 1-(1-p_d) sum_i (1-eta_k*eta_d)^i p_i.
double click_probability(const PhotonDistribution& dist,
                         const DetectorParams& detector,
                         std::size_t decoy_index);

/// No-click probability; complements click_probability exactly.
double vacuum_probability(const PhotonDistribution& dist,
                          const DetectorParams& detector,
                          std::size_t decoy_index);

}  // namespace ddrr
