#include "ddrr/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <ostream>
#include <sstream>

#include "ddrr/keyrate.hpp"
#include "ddrr/montecarlo.hpp"
#include "ddrr/photonstats.hpp"

namespace ddrr {

namespace {

std::string sci10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9e", v);  // 10 significant digits
  return buf;
}

void echo_config(std::ostream& out, const RunConfig& config) {
  std::istringstream lines(config_to_string(config));
  for (std::string line; std::getline(lines, line);) {
    out << "# " << line << '\n';
  }
}

void write_point_fields(std::ostream& out, const KeyRatePoint& p) {
  out << "distance_km = " << sci10(p.distance_km) << '\n';
  out << "protocol = " << to_string(p.protocol) << '\n';
  out << "mu_opt = " << sci10(p.mu) << '\n';
  out << "v_th_opt = " << p.v_th << '\n';
  out << "Q = " << sci10(p.gain) << '\n';
  out << "e_b = " << sci10(p.e_bit) << '\n';
  out << "e_src = " << sci10(p.e_src) << '\n';
  if (p.g_min) {
    out << "G_min = " << sci10(*p.g_min) << '\n';
  }
  out << "rate_raw = " << sci10(p.rate_per_pulse) << '\n';
  out << "rate_clamped = " << sci10(p.clamped_rate()) << '\n';
  out << "no_positive_rate = " << (p.no_positive_rate ? 1 : 0) << '\n';
}

/// Runs `body` with the data stream resolved from config.out_path.
int with_output(const RunConfig& config, std::ostream& err,
                const std::function<void(std::ostream&)>& body) {
  try {
    if (config.out_path.empty()) {
      body(std::cout);
      std::cout.flush();
    } else {
      std::ofstream file(config.out_path);
      if (!file) {
        err << "error: cannot open output path '" << config.out_path << "'\n";
        return 1;
      }
      body(file);
      file.flush();
      if (!file) {
        err << "error: failed writing to '" << config.out_path << "'\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

void write_scan_csv(std::ostream& out, const RunConfig& config) {
  config.validate();
  const OptimizationSpec spec = config.optimization_spec();
  const std::vector<KeyRatePoint> points =
      scan_distances(spec, config.d_min, config.d_max, config.d_step);

  out << "# ddrr scan\n";
  echo_config(out, config);
  out << "# cutoff_km = " << sci10(cutoff_distance(points)) << '\n';
  out << "# columns: distance_km,mu_opt,v_th_opt,Q,e_b,G_min,rate_raw,"
         "rate_clamped\n";
  for (const KeyRatePoint& p : points) {
    out << sci10(p.distance_km) << ',' << sci10(p.mu) << ',' << p.v_th << ','
        << sci10(p.gain) << ',' << sci10(p.e_bit) << ','
        << (p.g_min ? sci10(*p.g_min) : std::string()) << ','
        << sci10(p.rate_per_pulse) << ',' << sci10(p.clamped_rate()) << '\n';
  }
}

void write_optimize_report(std::ostream& out, const RunConfig& config) {
  config.validate();
  const OptimizationSpec spec = config.optimization_spec();
  const KeyRatePoint point = optimize_point(spec, config.distance);
  out << "# ddrr optimize\n";
  echo_config(out, config);
  write_point_fields(out, point);
}

void write_lp_report(std::ostream& out, std::istream& problem_stream) {
  const LpProblem problem = read_lp_problem(problem_stream);
  const LpSolution solution = solve_lp(problem);
  out << "# ddrr lp\n";
  if (!problem.comment.empty()) {
    out << "# " << problem.comment << '\n';
  }
  out << "variables = " << problem.num_vars() << '\n';
  out << "rows = " << problem.rows.size() << '\n';
  out << write_lp_solution(solution);
}

void write_mc_report(std::ostream& out, const RunConfig& config) {
  config.validate();
  McConfig mc = config.mc_config();
  const ChannelParams channel = mc.scenario.channel;
  const DetectorParams detector = mc.scenario.detector;

  out << "# ddrr mc\n";
  echo_config(out, config);
  out << "# generator = " << kMcGeneratorName << '\n';
  out << "# columns: quantity,estimate,std_error,trials,seed,analytic,z\n";

  const auto emit = [&](const std::string& name, const McEstimate& est,
                        double analytic) {
    const double diff = est.mean - analytic;
    const double z = (diff == 0.0) ? 0.0 : diff / est.std_error;
    out << name << ',' << sci10(est.mean) << ',' << sci10(est.std_error) << ','
        << est.trials << ',' << mc.seed << ',' << sci10(analytic) << ','
        << sci10(z) << '\n';
  };

  for (std::size_t k = 0; k < detector.decoy_settings.size(); ++k) {
    mc.scenario.decoy_index = k;
    const McEstimate est = estimate_gain(mc);
    const double analytic = decoy_gain(config.mc_mu, channel, detector, k);
    emit("Q" + std::to_string(k + 1), est, analytic);
  }
  mc.scenario.decoy_index = 0;
  // a scenario that never clicks has no defined error rate; report zeros
  McEstimate qber_est;
  double analytic_qber = 0.0;
  try {
    qber_est = estimate_qber(mc);
    analytic_qber = qber(config.mc_mu, channel, detector, config.misalignment);
  } catch (const std::exception&) {
    qber_est = McEstimate{};
    analytic_qber = 0.0;
  }
  emit("e_b", qber_est, analytic_qber);
}

int run_scan(const RunConfig& config, std::ostream& err) {
  return with_output(config, err,
                     [&](std::ostream& out) { write_scan_csv(out, config); });
}

int run_optimize(const RunConfig& config, std::ostream& err) {
  return with_output(config, err, [&](std::ostream& out) {
    write_optimize_report(out, config);
  });
}

int run_lp(const RunConfig& config, const std::string& problem_path,
           std::ostream& err) {
  std::ifstream problem(problem_path);
  if (!problem) {
    err << "error: cannot open LP problem file '" << problem_path << "'\n";
    return 1;
  }
  return with_output(config, err, [&](std::ostream& out) {
    write_lp_report(out, problem);
  });
}

int run_mc(const RunConfig& config, std::ostream& err) {
  return with_output(config, err,
                     [&](std::ostream& out) { write_mc_report(out, config); });
}

}  // namespace ddrr
