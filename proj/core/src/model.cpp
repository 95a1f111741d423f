#include "ddrr/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ddrr {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " +
                            std::to_string(value));
  }
}

const double& checked_decoy(const DetectorParams& detector, std::size_t k) {
  if (k >= detector.decoy_settings.size()) {
    throw std::out_of_range("decoy index " + std::to_string(k) +
                            " out of range (have " +
                            std::to_string(detector.decoy_settings.size()) +
                            " settings)");
  }
  return detector.decoy_settings[k];
}

}  // namespace

void ChannelParams::validate() const {
  if (!(fiber_loss_db_per_km >= 0.0)) {
    throw std::domain_error("fiber loss rate must be >= 0");
  }
  if (!(distance_km >= 0.0)) {
    throw std::domain_error("distance must be >= 0");
  }
}

void DetectorParams::validate() const {
  check_probability(efficiency, "detector efficiency");
  if (!(dark_count >= 0.0 && dark_count < 1.0)) {
    throw std::domain_error("dark count probability must lie in [0,1)");
  }
  if (decoy_settings.empty()) {
    throw std::domain_error("at least one decoy setting required");
  }
  double prev = 0.0;
  for (std::size_t k = 0; k < decoy_settings.size(); ++k) {
    const double eta = decoy_settings[k];
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw std::domain_error("decoy settings must lie in (0,1]");
    }
    if (k > 0 && !(eta < prev)) {
      throw std::domain_error("decoy settings must be strictly decreasing");
    }
    prev = eta;
  }
}

void ProtocolParams::validate() const {
  if (pulses_per_train < 2) {
    throw std::domain_error("pulses per train must be >= 2");
  }
  if (!(mean_photon_number > 0.0)) {
    throw std::domain_error("mean photon number must be > 0");
  }
  if (source_threshold < 0) {
    throw std::domain_error("source threshold must be >= 0");
  }
  if (!(ec_efficiency >= 1.0)) {
    throw std::domain_error("error-correction efficiency must be >= 1");
  }
  if (!(misalignment >= 0.0 && misalignment <= 0.5)) {
    throw std::domain_error("misalignment must lie in [0, 1/2]");
  }
}

double PhotonDistribution::total() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

void PhotonDistribution::validate(double tol) const {
  if (probs.empty()) {
    throw std::invalid_argument("photon distribution is empty");
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("photon probabilities must lie in [0,1]");
    }
  }
  if (!sub_normalized) {
    const double sum = total();
    if (!(sum >= 1.0 - tol && sum <= 1.0 + tol)) {
      throw std::invalid_argument(
          "photon distribution not normalized: sum = " + std::to_string(sum));
    }
  }
}

double transmittance(const ChannelParams& channel) {
  channel.validate();
  return std::pow(10.0, -channel.fiber_loss_db_per_km * channel.distance_km / 10.0);
}

double overall_gain(double mu, const ChannelParams& channel,
                    const DetectorParams& detector) {
  detector.validate();
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }
  const double x = mu * transmittance(channel) * detector.efficiency;
  const double p_d = detector.dark_count;
  return p_d + (1.0 - p_d) * (-std::expm1(-x));
}

double qber(double mu, const ChannelParams& channel,
            const DetectorParams& detector, double misalignment) {
  detector.validate();
  check_probability(misalignment, "misalignment");
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }
  const double x = mu * transmittance(channel) * detector.efficiency;
  const double p_d = detector.dark_count;
  const double signal = (1.0 - p_d) * (-std::expm1(-x));
  const double gain = p_d + signal;
  if (!(gain > 0.0)) {
    throw std::domain_error("qber undefined: gain is zero at these parameters");
  }
  return (misalignment * signal + 0.5 * p_d) / gain;
}

double decoy_yield(int photon_number, const ChannelParams& channel,
                   const DetectorParams& detector, std::size_t decoy_index) {
  detector.validate();
  if (photon_number < 0) {
    throw std::domain_error("photon number must be >= 0");
  }
  const double eta_k = checked_decoy(detector, decoy_index);
  const double survive = transmittance(channel) * eta_k * detector.efficiency;
  const double p_d = detector.dark_count;
  return 1.0 - (1.0 - p_d) * std::pow(1.0 - survive, photon_number);
}

double decoy_gain(double mu, const ChannelParams& channel,
                  const DetectorParams& detector, std::size_t decoy_index) {
  detector.validate();
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }
  const double eta_k = checked_decoy(detector, decoy_index);
  const double x = mu * transmittance(channel) * eta_k * detector.efficiency;
  const double p_d = detector.dark_count;
  return p_d + (1.0 - p_d) * (-std::expm1(-x));
}

double vacuum_probability(const PhotonDistribution& dist,
                          const DetectorParams& detector,
                          std::size_t decoy_index) {
  detector.validate();
  dist.validate();
  const double eta_k = checked_decoy(detector, decoy_index);
  const double base = 1.0 - eta_k * detector.efficiency;
  double weighted = 0.0;
  double factor = 1.0;
  for (double p : dist.probs) {
    weighted += factor * p;
    factor *= base;
  }
  return (1.0 - detector.dark_count) * weighted;
}

double click_probability(const PhotonDistribution& dist,
                         const DetectorParams& detector,
                         std::size_t decoy_index) {
  return 1.0 - vacuum_probability(dist, detector, decoy_index);
}

}  // namespace ddrr
