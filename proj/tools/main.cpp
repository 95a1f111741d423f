// ddrr: key-rate analysis for detector-decoy round-robin DPS QKD.
//
// Subcommands:
//   scan      optimize (mu, v_th) over a distance grid, write a CSV curve
//   optimize  optimize a single distance and print the full breakdown
//   lp        solve a photon-statistics linear program from a text file
//   mc        Monte-Carlo validation of the analytic gain/error formulas

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ddrr/commands.hpp"
#include "ddrr/runconfig.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string protocol;
  int L = 0;
  double distance = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double d_step = 0.0;
  double mu = 0.0;
  double slack = 0.0;
  int n_max = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string out_path;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path,
                  "Key=value config file applied before other flags");
  cmd->add_option("--protocol", opt.protocol,
                  "dd-rrdps, passive-rrdps or bb84-decoy");
  cmd->add_option("--L", opt.L, "Pulses per train");
  cmd->add_option("--slack", opt.slack,
                  "Two-sided tolerance on the decoy click constraints");
  cmd->add_option("--n-max", opt.n_max,
                  "Received photon-number truncation order");
  cmd->add_option("--out", opt.out_path, "Output path (default: stdout)");
}

bool given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* option = cmd->get_option_no_throw(name);
  return option != nullptr && option->count() > 0;
}

/// Layer a config file and then the explicit flags over the defaults.
ddrr::RunConfig assemble(const CLI::App* cmd, const CliOptions& opt) {
  ddrr::RunConfig config;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      throw std::runtime_error("cannot open config file '" + opt.config_path +
                               "'");
    }
    config = ddrr::read_config(in);
  }
  if (given(cmd, "--protocol")) {
    config.protocol = ddrr::protocol_from_string(opt.protocol);
  }
  if (given(cmd, "--L")) config.L = opt.L;
  if (given(cmd, "--slack")) config.slack = opt.slack;
  if (given(cmd, "--n-max")) config.n_max = opt.n_max;
  if (given(cmd, "--out")) config.out_path = opt.out_path;
  if (given(cmd, "--distance")) config.distance = opt.distance;
  if (given(cmd, "--d-min")) config.d_min = opt.d_min;
  if (given(cmd, "--d-max")) config.d_max = opt.d_max;
  if (given(cmd, "--d-step")) config.d_step = opt.d_step;
  if (given(cmd, "--mu")) config.mc_mu = opt.mu;
  if (given(cmd, "--seed")) config.seed = opt.seed;
  if (given(cmd, "--trials")) config.trials = opt.trials;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate analysis engine for detector-decoy RRDPS QKD"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string lp_path;

  CLI::App* scan = app.add_subcommand("scan", "Optimized rate vs distance");
  add_common_flags(scan, opt);
  scan->add_option("--d-min", opt.d_min, "First distance, km");
  scan->add_option("--d-max", opt.d_max, "Last distance, km");
  scan->add_option("--d-step", opt.d_step, "Grid step, km");

  CLI::App* optimize =
      app.add_subcommand("optimize", "Optimize one distance");
  add_common_flags(optimize, opt);
  optimize->add_option("--distance,-d", opt.distance, "Distance, km");

  CLI::App* lp = app.add_subcommand("lp", "Solve an LP problem file");
  add_common_flags(lp, opt);
  lp->add_option("problem", lp_path, "Problem file")->required();

  CLI::App* mc = app.add_subcommand("mc", "Monte-Carlo validation");
  add_common_flags(mc, opt);
  mc->add_option("--distance,-d", opt.distance, "Distance, km");
  mc->add_option("--mu", opt.mu, "Mean photon number per train");
  mc->add_option("--seed", opt.seed, "RNG seed");
  mc->add_option("--trials", opt.trials, "Number of trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      return ddrr::run_scan(assemble(scan, opt), std::cerr);
    }
    if (optimize->parsed()) {
      return ddrr::run_optimize(assemble(optimize, opt), std::cerr);
    }
    if (lp->parsed()) {
      return ddrr::run_lp(assemble(lp, opt), lp_path, std::cerr);
    }
    if (mc->parsed()) {
      return ddrr::run_mc(assemble(mc, opt), std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
