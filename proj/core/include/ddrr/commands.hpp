#pragma once

#include <iosfwd>
#include <string>

#include "ddrr/runconfig.hpp"

namespace ddrr {

/// CSV writers and reports behind the CLI subcommands. Each writer is pure:
/// identical configs produce byte-identical output. The run_* wrappers open
/// config.out_path (or stdout when empty), send diagnostics to `err`, and
/// return a process exit code (0 on success).

void write_scan_csv(std::ostream& out, const RunConfig& config);
void write_optimize_report(std::ostream& out, const RunConfig& config);
void write_lp_report(std::ostream& out, std::istream& problem);
void write_mc_report(std::ostream& out, const RunConfig& config);

int run_scan(const RunConfig& config, std::ostream& err);
int run_optimize(const RunConfig& config, std::ostream& err);
int run_lp(const RunConfig& config, const std::string& problem_path,
           std::ostream& err);
int run_mc(const RunConfig& config, std::ostream& err);

}  // namespace ddrr
