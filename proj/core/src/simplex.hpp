#pragma once

#include <string>
#include <vector>

#include "ddrr/photonstats.hpp"

namespace ddrr::detail {

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // structural variable values when optimal
  std::string diagnostics;
};

/// Two-phase dense tableau simplex with Bland's rule. Box bounds are
/// materialized as explicit rows, which is fine at the problem sizes the
/// photon-statistics programs produce (tens of rows).
SimplexResult simplex_solve(const LpProblem& problem);

}  // namespace ddrr::detail
