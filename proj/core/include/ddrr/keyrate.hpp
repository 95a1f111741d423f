#pragma once

#include "ddrr/model.hpp"

namespace ddrr {

/// Shannon binary entropy in bits; h(0) = h(1) = 0 by the limit convention.
/// Arguments outside [0,1] raise std::domain_error.
double binary_entropy(double x);

/// Probability that a Poisson(mu) source emits more than `threshold`
/// photons: 1 - sum_{i<=threshold} exp(-mu) mu^i / i!.
double source_tail(double mu, int threshold);

/// Secure key length after reconciliation and privacy amplification:
/// N [1 - f h(e_bit) - h(e_phase)]. Signed; linear in N.
double k1_length(double sifted_bits, double e_bit, double e_phase,
                 double ec_efficiency);

struct KeyRateInputs {
  double g_min = 0.0;  // worst-case single-photon transmission probability
  double gain = 0.0;   // overall per-train gain Q
  double e_bit = 0.0;  // quantum bit error rate
  double e_src = 0.0;  // source tail probability beyond v_th
  ProtocolParams protocol;

  void validate() const;
};

/// Detector-decoy round-robin key rate per pulse (signed):
/// (1/L)(G_min - Q f h(e_b) - [e_src + (G_min - e_src) h(v_th/(L-1))]).
/// Requires v_th <= L-1.
double k2_rate(const KeyRateInputs& in);

/// Passive-delay comparator rate per pulse (signed):
/// (1/L)(Q - Q f h(e_b) - [e_src + (Q - e_src) h(2 v_th/L)]).
/// Requires 2 v_th <= L.
double k3_rate(const KeyRateInputs& in);

/// Asymptotic BB84 rate per pulse with infinite decoy states (signed).
/// `detector.dark_count` is the per-pulse dark-count probability here; dark
/// counts err with probability 1/2. With eta = eta_t*eta_d:
///   Y0 = p_d, Qmu = Y0 + 1 - exp(-eta mu), Emu Qmu = Y0/2 + e_d(1-exp(-eta mu)),
///   Y1 = eta + Y0, e1 = (Y0/2 + e_d eta)/Y1, Q1 = mu exp(-mu) Y1,
///   rate = (1/2)[-Qmu f h(Emu) + Q1 (1 - h(e1))].
double bb84_decoy_rate(double mu, const ChannelParams& channel,
                       const DetectorParams& detector, double misalignment,
                       double ec_efficiency);

}  // namespace ddrr
