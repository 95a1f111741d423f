#include "ddrr/montecarlo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ddrr {

namespace {

/// Deterministic sampling primitives on top of mt19937_64. The standard
/// distributions are implementation-defined, so uniform and Poisson draws
/// are done by hand to keep streams reproducible across toolchains.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Knuth's product-of-uniforms method; fine for the means used here.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double product = 1.0;
    do {
      ++k;
      product *= uniform();
    } while (product > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 rng_;
};

double bernoulli_std_error(double mean, std::uint64_t count) {
  if (count == 0) return 0.0;
  const double variance = mean * (1.0 - mean) / static_cast<double>(count);
  return variance > 0.0 ? std::sqrt(variance) : 0.0;
}

int count_survivors(Sampler& sampler, int photons, double survival) {
  int survivors = 0;
  for (int i = 0; i < photons; ++i) {
    if (sampler.bernoulli(survival)) ++survivors;
  }
  return survivors;
}

}  // namespace

void McConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("at least one trial required");
  }
  scenario.detector.validate();
  scenario.channel.validate();
  if (!(scenario.mu >= 0.0)) {
    throw std::invalid_argument("mean photon number must be >= 0");
  }
  if (scenario.decoy_index >= scenario.detector.decoy_settings.size()) {
    throw std::invalid_argument("decoy index out of range");
  }
  if (!(scenario.misalignment >= 0.0 && scenario.misalignment <= 1.0)) {
    throw std::invalid_argument("misalignment must lie in [0,1]");
  }
}

McEstimate estimate_gain(const McConfig& config) {
  config.validate();
  const McScenario& sc = config.scenario;
  const double survival = transmittance(sc.channel) *
                          sc.detector.decoy_settings[sc.decoy_index] *
                          sc.detector.efficiency;
  const double p_d = sc.detector.dark_count;

  Sampler sampler(config.seed);
  std::uint64_t clicks = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    const int photons = sampler.poisson(sc.mu);
    const int survivors = count_survivors(sampler, photons, survival);
    const bool dark = sampler.bernoulli(p_d);
    if (survivors > 0 || dark) ++clicks;
  }

  McEstimate est;
  est.trials = config.trials;
  est.mean = static_cast<double>(clicks) / static_cast<double>(config.trials);
  est.std_error = bernoulli_std_error(est.mean, est.trials);
  return est;
}

McEstimate estimate_qber(const McConfig& config) {
  config.validate();
  const McScenario& sc = config.scenario;
  // QBER is collected in the unattenuated signal mode, matching the closed
  // form: no decoy attenuation in front of the detector.
  const double survival = transmittance(sc.channel) * sc.detector.efficiency;
  const double p_d = sc.detector.dark_count;

  Sampler sampler(config.seed);
  std::uint64_t clicks = 0;
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    const int photons = sampler.poisson(sc.mu);
    const int survivors = count_survivors(sampler, photons, survival);
    const bool dark = sampler.bernoulli(p_d);
    if (survivors == 0 && !dark) continue;
    ++clicks;
    // dark-involved clicks carry no phase information and err half the time
    const double err_prob = dark ? 0.5 : sc.misalignment;
    if (sampler.bernoulli(err_prob)) ++errors;
  }
  if (clicks == 0) {
    throw std::runtime_error(
        "qber estimate undefined: no clicks in any trial");
  }

  McEstimate est;
  est.trials = clicks;
  est.mean = static_cast<double>(errors) / static_cast<double>(clicks);
  est.std_error = bernoulli_std_error(est.mean, est.trials);
  return est;
}

ArrivalHistogram estimate_arrival_distribution(const McConfig& config,
                                               int n_max) {
  config.validate();
  if (n_max < 0) {
    throw std::invalid_argument("n_max must be >= 0");
  }
  const McScenario& sc = config.scenario;
  const double survival = transmittance(sc.channel);  // channel loss only

  Sampler sampler(config.seed);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_max) + 1, 0);
  std::uint64_t tail = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    const int photons = sampler.poisson(sc.mu);
    const int arrived = count_survivors(sampler, photons, survival);
    if (arrived <= n_max) {
      ++counts[static_cast<std::size_t>(arrived)];
    } else {
      ++tail;
    }
  }

  ArrivalHistogram hist;
  hist.trials = config.trials;
  hist.tail_mass = static_cast<double>(tail) / static_cast<double>(config.trials);
  hist.distribution.probs.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    hist.distribution.probs[i] =
        static_cast<double>(counts[i]) / static_cast<double>(config.trials);
  }
  hist.distribution.sub_normalized = tail > 0;
  return hist;
}

}  // namespace ddrr
