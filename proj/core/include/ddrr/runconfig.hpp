#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddrr/montecarlo.hpp"
#include "ddrr/optimizer.hpp"

namespace ddrr {

/// Config-file parse failure; carries the 1-based line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Full effective configuration of a run. Defaults reproduce the standard
/// simulation parameter set: dark counts 1e-9 per pulse (p_d = 1e-9 L per
/// train), eta_d = 0.19, e_d = 1.5%, f = 1.16, beta = 0.2 dB/km, decoy
/// settings 1, 0.8, 0.6.
struct RunConfig {
  Protocol protocol = Protocol::DdRrdps;
  int L = 128;
  double ec_efficiency = 1.16;   // f
  double misalignment = 0.015;   // e_d
  double beta = 0.2;             // fiber loss, dB/km
  double eta_d = 0.19;
  double dark_base = 1e-9;       // per-pulse dark count rate
  std::vector<double> decoys{1.0, 0.8, 0.6};
  int n_max = 10;
  double slack = 1e-9;

  double mu_min = 1e-4;
  double mu_max = 50.0;
  int v_th_min = 1;
  int v_th_max = 100;
  double improvement_tol = 1e-9;
  int max_iterations = 100;

  double d_min = 0.0;
  double d_max = 320.0;
  double d_step = 5.0;
  double distance = 0.0;  // single-point commands

  double mc_mu = 1.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;

  std::string out_path;            // empty: write to stdout
  std::string out_format = "csv";  // the only supported format

  void validate() const;

  OptimizationSpec optimization_spec() const;
  McConfig mc_config() const;
};

/// Flat key=value text with section prefixes (channel.beta, detector.eta_d,
/// ...). Unknown keys are hard errors; `#` starts a comment. Writing then
/// reading a config reproduces it exactly.
RunConfig read_config(std::istream& in);
void write_config(std::ostream& out, const RunConfig& config);
std::string config_to_string(const RunConfig& config);

/// Parses the value of a single `key = value` assignment, as used for both
/// config files and the CLI `--set` style overrides.
void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value, int line);

}  // namespace ddrr
