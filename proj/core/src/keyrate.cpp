#include "ddrr/keyrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace ddrr {

namespace {

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " +
                            std::to_string(value));
  }
}

/// Common shape of the round-robin rates: first term minus error
/// reconciliation minus privacy amplification, per pulse.
double rrdps_rate(double first_term, double gain, double e_bit, double e_src,
                  double pa_argument, double ec_efficiency, int L) {
  const double reconciliation = gain * ec_efficiency * binary_entropy(e_bit);
  const double privacy =
      e_src + (first_term - e_src) * binary_entropy(pa_argument);
  return (first_term - reconciliation - privacy) / L;
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary entropy argument must lie in [0,1]");
  }
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double source_tail(double mu, int threshold) {
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }
  if (threshold < 0) {
    throw std::domain_error("threshold photon number must be >= 0");
  }
  if (mu == 0.0) {
    return 0.0;
  }
  // P(N > v) for N ~ Poisson(mu) equals the regularized lower incomplete
  // gamma function P(v+1, mu).
  return boost::math::gamma_p(static_cast<double>(threshold) + 1.0, mu);
}

double k1_length(double sifted_bits, double e_bit, double e_phase,
                 double ec_efficiency) {
  if (!(sifted_bits >= 0.0)) {
    throw std::domain_error("sifted key length must be >= 0");
  }
  return sifted_bits *
         (1.0 - ec_efficiency * binary_entropy(e_bit) - binary_entropy(e_phase));
}

void KeyRateInputs::validate() const {
  check_unit_interval(g_min, "G_min");
  check_unit_interval(gain, "gain");
  check_unit_interval(e_bit, "bit error rate");
  check_unit_interval(e_src, "source tail probability");
  protocol.validate();
}

double k2_rate(const KeyRateInputs& in) {
  in.validate();
  const int L = in.protocol.pulses_per_train;
  const int v = in.protocol.source_threshold;
  if (v > L - 1) {
    throw std::domain_error("k2 requires v_th <= L-1");
  }
  const double pa_arg = static_cast<double>(v) / (L - 1);
  return rrdps_rate(in.g_min, in.gain, in.e_bit, in.e_src, pa_arg,
                    in.protocol.ec_efficiency, L);
}

double k3_rate(const KeyRateInputs& in) {
  in.validate();
  const int L = in.protocol.pulses_per_train;
  const int v = in.protocol.source_threshold;
  if (2 * v > L) {
    throw std::domain_error("k3 requires 2 v_th <= L");
  }
  const double pa_arg = 2.0 * v / L;
  return rrdps_rate(in.gain, in.gain, in.e_bit, in.e_src, pa_arg,
                    in.protocol.ec_efficiency, L);
}

double bb84_decoy_rate(double mu, const ChannelParams& channel,
                       const DetectorParams& detector, double misalignment,
                       double ec_efficiency) {
  detector.validate();
  check_unit_interval(misalignment, "misalignment");
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }
  const double eta = transmittance(channel) * detector.efficiency;
  const double y0 = detector.dark_count;
  const double signal = -std::expm1(-eta * mu);
  const double q_mu = y0 + signal;
  if (!(q_mu > 0.0)) {
    throw std::domain_error("bb84 rate undefined: zero gain (no clicks)");
  }
  const double e_mu = (0.5 * y0 + misalignment * signal) / q_mu;
  const double y1 = eta + y0;
  if (!(y1 > 0.0)) {
    throw std::domain_error("bb84 rate undefined: zero single-photon yield");
  }
  const double e1 = (0.5 * y0 + misalignment * eta) / y1;
  const double q1 = mu * std::exp(-mu) * y1;
  return 0.5 * (-q_mu * ec_efficiency * binary_entropy(e_mu) +
                q1 * (1.0 - binary_entropy(e1)));
}

}  // namespace ddrr
