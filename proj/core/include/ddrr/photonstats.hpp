#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddrr/model.hpp"

namespace ddrr {

enum class LpRelation { LessEqual, GreaterEqual, Equal };

struct LpRow {
  std::vector<double> coeffs;
  LpRelation relation = LpRelation::Equal;
  double rhs = 0.0;
  std::string label;
};

/// Small dense linear program over variables p_0..p_{n_max} with shared
/// box bounds, minimized by solve_lp. Rows mix equalities and inequalities.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  double lower_bound = 0.0;
  double upper_bound = 1.0;
  std::string comment;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t count_equalities() const;
  std::size_t count_inequalities() const;

  /// Throws std::invalid_argument on ragged rows, non-finite entries, or an
  /// empty objective.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> witness;
  /// Labels of the constraints and variable bounds tight at the witness.
  std::vector<std::string> active_basis;
  /// For infeasible problems, a description of the separating certificate.
  std::string diagnostics;
};

/// The solver failed numerically (pivot limit or breakdown).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective coefficients of the single-photon transmission probability:
/// coefficient of p_n is n*eta_d*(1-eta_d)^(n-1), zero for n=0.
/// With eta_d=0 the objective degenerates to all zeros.
std::vector<double> g_objective(const DetectorParams& detector, int n_max);

/// Builds the detector-decoy constraint system for observed gains Q_k:
/// per setting k the click probability T_k(p) must match Q_k within `slack`
/// (one equality row each when slack is zero, a two-sided inequality pair
/// otherwise), plus the normalization row sum p_n = 1 and bounds [0,1].
/// `mu_context` only annotates the problem.
LpProblem build_constraints(std::span<const double> observed_gains,
                            const DetectorParams& detector, double mu_context,
                            int n_max, double slack);

/// Deterministic dense two-phase simplex. Optimal solutions reproduce the
/// true optimum within 1e-10 absolute; infeasible problems come back with a
/// certificate description.
LpSolution solve_lp(const LpProblem& problem);

struct GminResult {
  LpStatus status = LpStatus::Infeasible;
  double g_min = 0.0;
  PhotonDistribution witness;
  /// Set when eta_d=0 short-circuits the solve (objective identically zero).
  bool degenerate_detector = false;
  LpSolution solution;

  bool feasible() const { return status == LpStatus::Optimal; }
};

/// Worst-case single-photon transmission probability consistent with the
/// gains the decoy settings would observe at these parameters: composes
/// decoy_gain -> build_constraints -> g_objective -> solve_lp.
GminResult min_single_photon_gain(double mu, const ChannelParams& channel,
                                  const DetectorParams& detector, int n_max,
                                  double slack);

/// Parse failure for the line-oriented LP text format; carries the
/// 1-based line number.
class LpParseError : public std::runtime_error {
 public:
  LpParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Line-oriented text format: a `minimize` line with the objective
/// coefficients, an optional `bounds lo hi` line, then one constraint per
/// line as coefficients, relation (<=, >=, =) and right-hand side. Text
/// after `#` is a label on constraint lines and a comment elsewhere.
/// Values render with 17 significant digits.
std::string write_lp_problem(const LpProblem& problem);
LpProblem read_lp_problem(std::istream& in);

std::string write_lp_solution(const LpSolution& solution);

}  // namespace ddrr
