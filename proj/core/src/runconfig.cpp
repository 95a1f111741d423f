#include "ddrr/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ddrr {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& value, const std::string& key, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(line, "bad number for " + key + ": '" + value + "'");
  }
  if (used != value.size() || !std::isfinite(v)) {
    throw ConfigError(line, "bad number for " + key + ": '" + value + "'");
  }
  return v;
}

int to_int(const std::string& value, const std::string& key, int line) {
  const double v = to_double(value, key, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError(line, key + " must be an integer, got '" + value + "'");
  }
  return i;
}

std::uint64_t to_u64(const std::string& value, const std::string& key,
                     int line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, key + " must be a nonnegative integer, got '" +
                                value + "'");
  }
}

std::vector<double> to_list(const std::string& value, const std::string& key,
                            int line) {
  std::vector<double> out;
  std::string token;
  std::istringstream is(value);
  while (std::getline(is, token, ',')) {
    token = trim(token);
    if (token.empty()) {
      throw ConfigError(line, key + " has an empty list entry");
    }
    out.push_back(to_double(token, key, line));
  }
  if (out.empty()) {
    throw ConfigError(line, key + " must list at least one value");
  }
  return out;
}

std::string list_to_string(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt17(values[i]);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error("config line " + std::to_string(line) + ": " + what),
      line_(line) {}

void RunConfig::validate() const {
  optimization_spec();  // constructor validates
  if (out_format != "csv") {
    throw std::invalid_argument("unsupported output format '" + out_format +
                                "' (only csv)");
  }
  if (!(mc_mu >= 0.0)) {
    throw std::invalid_argument("mc.mu must be >= 0");
  }
  if (trials < 1) {
    throw std::invalid_argument("mc.trials must be >= 1");
  }
}

OptimizationSpec RunConfig::optimization_spec() const {
  OptimizationSpec spec;
  spec.protocol = protocol;
  spec.pulses_per_train = L;
  spec.dark_count_base = dark_base;
  spec.detector_efficiency = eta_d;
  spec.decoy_settings = decoys;
  spec.misalignment = misalignment;
  spec.ec_efficiency = ec_efficiency;
  spec.fiber_loss_db_per_km = beta;
  spec.n_max = n_max;
  spec.lp_slack = slack;
  spec.mu_min = mu_min;
  spec.mu_max = mu_max;
  spec.v_th_min = v_th_min;
  spec.v_th_max = v_th_max;
  spec.improvement_tol = improvement_tol;
  spec.max_iterations = max_iterations;
  spec.validate();
  return spec;
}

McConfig RunConfig::mc_config() const {
  const OptimizationSpec spec = optimization_spec();
  McConfig mc;
  mc.trials = trials;
  mc.seed = seed;
  mc.scenario.mu = mc_mu;
  mc.scenario.channel = spec.channel(distance);
  mc.scenario.detector = spec.train_detector();
  mc.scenario.decoy_index = 0;
  mc.scenario.misalignment = misalignment;
  mc.validate();
  return mc;
}

void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value, int line) {
  if (key == "protocol.name") {
    try {
      config.protocol = protocol_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, e.what());
    }
  } else if (key == "protocol.L") {
    config.L = to_int(value, key, line);
  } else if (key == "protocol.f") {
    config.ec_efficiency = to_double(value, key, line);
  } else if (key == "protocol.e_d") {
    config.misalignment = to_double(value, key, line);
  } else if (key == "channel.beta") {
    config.beta = to_double(value, key, line);
  } else if (key == "detector.eta_d") {
    config.eta_d = to_double(value, key, line);
  } else if (key == "detector.dark_base") {
    config.dark_base = to_double(value, key, line);
  } else if (key == "detector.decoys") {
    config.decoys = to_list(value, key, line);
  } else if (key == "lp.n_max") {
    config.n_max = to_int(value, key, line);
  } else if (key == "lp.slack") {
    config.slack = to_double(value, key, line);
  } else if (key == "optimizer.mu_min") {
    config.mu_min = to_double(value, key, line);
  } else if (key == "optimizer.mu_max") {
    config.mu_max = to_double(value, key, line);
  } else if (key == "optimizer.v_min") {
    config.v_th_min = to_int(value, key, line);
  } else if (key == "optimizer.v_max") {
    config.v_th_max = to_int(value, key, line);
  } else if (key == "optimizer.tol") {
    config.improvement_tol = to_double(value, key, line);
  } else if (key == "optimizer.max_iter") {
    config.max_iterations = to_int(value, key, line);
  } else if (key == "scan.d_min") {
    config.d_min = to_double(value, key, line);
  } else if (key == "scan.d_max") {
    config.d_max = to_double(value, key, line);
  } else if (key == "scan.d_step") {
    config.d_step = to_double(value, key, line);
  } else if (key == "point.distance") {
    config.distance = to_double(value, key, line);
  } else if (key == "mc.mu") {
    config.mc_mu = to_double(value, key, line);
  } else if (key == "mc.trials") {
    config.trials = to_u64(value, key, line);
  } else if (key == "mc.seed") {
    config.seed = to_u64(value, key, line);
  } else if (key == "output.path") {
    config.out_path = value;
  } else if (key == "output.format") {
    config.out_format = value;
  } else {
    throw ConfigError(line, "unknown key '" + key + "'");
  }
}

RunConfig read_config(std::istream& in) {
  RunConfig config;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string body = raw;
    if (const auto hash = body.find('#'); hash != std::string::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected key = value, got '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(line, "empty key");
    }
    apply_config_line(config, key, value, line);
  }
  return config;
}

void write_config(std::ostream& out, const RunConfig& config) {
  out << "protocol.name = " << to_string(config.protocol) << '\n';
  out << "protocol.L = " << config.L << '\n';
  out << "protocol.f = " << fmt17(config.ec_efficiency) << '\n';
  out << "protocol.e_d = " << fmt17(config.misalignment) << '\n';
  out << "channel.beta = " << fmt17(config.beta) << '\n';
  out << "detector.eta_d = " << fmt17(config.eta_d) << '\n';
  out << "detector.dark_base = " << fmt17(config.dark_base) << '\n';
  out << "detector.decoys = " << list_to_string(config.decoys) << '\n';
  out << "lp.n_max = " << config.n_max << '\n';
  out << "lp.slack = " << fmt17(config.slack) << '\n';
  out << "optimizer.mu_min = " << fmt17(config.mu_min) << '\n';
  out << "optimizer.mu_max = " << fmt17(config.mu_max) << '\n';
  out << "optimizer.v_min = " << config.v_th_min << '\n';
  out << "optimizer.v_max = " << config.v_th_max << '\n';
  out << "optimizer.tol = " << fmt17(config.improvement_tol) << '\n';
  out << "optimizer.max_iter = " << config.max_iterations << '\n';
  out << "scan.d_min = " << fmt17(config.d_min) << '\n';
  out << "scan.d_max = " << fmt17(config.d_max) << '\n';
  out << "scan.d_step = " << fmt17(config.d_step) << '\n';
  out << "point.distance = " << fmt17(config.distance) << '\n';
  out << "mc.mu = " << fmt17(config.mc_mu) << '\n';
  out << "mc.trials = " << config.trials << '\n';
  out << "mc.seed = " << config.seed << '\n';
  out << "output.path = " << config.out_path << '\n';
  out << "output.format = " << config.out_format << '\n';
}

std::string config_to_string(const RunConfig& config) {
  std::ostringstream os;
  write_config(os, config);
  return os.str();
}

}  // namespace ddrr
