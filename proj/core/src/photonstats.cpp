#include "ddrr/photonstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "simplex.hpp"

namespace ddrr {

namespace {

constexpr double kActiveTol = 1e-9;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string relation_token(LpRelation rel) {
  switch (rel) {
    case LpRelation::LessEqual:
      return "<=";
    case LpRelation::GreaterEqual:
      return ">=";
    case LpRelation::Equal:
      return "=";
  }
  return "?";
}

}  // namespace

std::size_t LpProblem::count_equalities() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const LpRow& r) {
        return r.relation == LpRelation::Equal;
      }));
}

std::size_t LpProblem::count_inequalities() const {
  return rows.size() - count_equalities();
}

void LpProblem::validate() const {
  if (objective.empty()) {
    throw std::invalid_argument("LP objective is empty");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("LP objective has a non-finite coefficient");
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LpRow& r = rows[i];
    if (r.coeffs.size() != objective.size()) {
      throw std::invalid_argument("LP row " + std::to_string(i) + " has " +
                                  std::to_string(r.coeffs.size()) +
                                  " coefficients, expected " +
                                  std::to_string(objective.size()));
    }
    if (!std::isfinite(r.rhs)) {
      throw std::invalid_argument("LP row " + std::to_string(i) +
                                  " has a non-finite right-hand side");
    }
    for (double c : r.coeffs) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("LP row " + std::to_string(i) +
                                    " has a non-finite coefficient");
      }
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

std::vector<double> g_objective(const DetectorParams& detector, int n_max) {
  detector.validate();
  if (n_max < 0) {
    throw std::invalid_argument("n_max must be >= 0");
  }
  const double eta_d = detector.efficiency;
  std::vector<double> coeffs(static_cast<std::size_t>(n_max) + 1, 0.0);
  // n=0 contributes nothing; for n>=1 the coefficient is n*eta_d*(1-eta_d)^(n-1)
  double tail = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    coeffs[static_cast<std::size_t>(n)] = n * eta_d * tail;
    tail *= 1.0 - eta_d;
  }
  return coeffs;
}

LpProblem build_constraints(std::span<const double> observed_gains,
                            const DetectorParams& detector, double mu_context,
                            int n_max, double slack) {
  detector.validate();
  if (observed_gains.size() != detector.decoy_settings.size()) {
    throw std::invalid_argument(
        "need one observed gain per decoy setting: got " +
        std::to_string(observed_gains.size()) + " gains for " +
        std::to_string(detector.decoy_settings.size()) + " settings");
  }
  if (!(slack >= 0.0)) {
    throw std::invalid_argument("slack must be >= 0");
  }
  if (n_max < 0) {
    throw std::invalid_argument("n_max must be >= 0");
  }
  for (double q : observed_gains) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument("observed gains must lie in [0,1]");
    }
  }

  const std::size_t n = static_cast<std::size_t>(n_max) + 1;
  LpProblem problem;
  problem.objective.assign(n, 0.0);
  problem.lower_bound = 0.0;
  problem.upper_bound = 1.0;
  {
    std::ostringstream os;
    os << "detector-decoy constraints, mu=" << fmt17(mu_context);
    problem.comment = os.str();
  }

  LpRow norm;
  norm.coeffs.assign(n, 1.0);
  norm.relation = LpRelation::Equal;
  norm.rhs = 1.0;
  norm.label = "norm";
  problem.rows.push_back(std::move(norm));

  const double p_d = detector.dark_count;
  for (std::size_t k = 0; k < observed_gains.size(); ++k) {
    // T_k(p) = 1 - (1-p_d) sum_i (1-eta_k*eta_d)^i p_i, kept linear by
    // writing the constraint on the weighted sum directly.
    std::vector<double> coeffs(n);
    const double base = 1.0 - detector.decoy_settings[k] * detector.efficiency;
    double factor = 1.0 - p_d;
    for (std::size_t i = 0; i < n; ++i) {
      coeffs[i] = factor;
      factor *= base;
    }
    const double target = 1.0 - observed_gains[k];
    const std::string name = "Q" + std::to_string(k + 1);
    if (slack == 0.0) {
      LpRow eq;
      eq.coeffs = coeffs;
      eq.relation = LpRelation::Equal;
      eq.rhs = target;
      eq.label = name;
      problem.rows.push_back(std::move(eq));
    } else {
      LpRow lo;  // T_k >= Q_k - slack
      lo.coeffs = coeffs;
      lo.relation = LpRelation::LessEqual;
      lo.rhs = target + slack;
      lo.label = name + ".lo";
      problem.rows.push_back(std::move(lo));

      LpRow hi;  // T_k <= Q_k + slack
      hi.coeffs = std::move(coeffs);
      hi.relation = LpRelation::GreaterEqual;
      hi.rhs = target - slack;
      hi.label = name + ".hi";
      problem.rows.push_back(std::move(hi));
    }
  }
  return problem;
}

LpSolution solve_lp(const LpProblem& problem) {
  problem.validate();
  detail::SimplexResult raw = detail::simplex_solve(problem);

  LpSolution sol;
  sol.status = raw.status;
  sol.diagnostics = std::move(raw.diagnostics);
  if (raw.status != LpStatus::Optimal) {
    return sol;
  }

  sol.witness = std::move(raw.x);
  for (double& v : sol.witness) {
    v = std::clamp(v, problem.lower_bound, problem.upper_bound);
  }
  double value = 0.0;
  for (std::size_t j = 0; j < sol.witness.size(); ++j) {
    value += problem.objective[j] * sol.witness[j];
  }
  sol.value = value;

  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    const LpRow& r = problem.rows[i];
    double lhs = 0.0;
    for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
      lhs += r.coeffs[j] * sol.witness[j];
    }
    const bool tight = std::abs(lhs - r.rhs) <= kActiveTol;
    if (tight) {
      sol.active_basis.push_back(r.label.empty() ? "row" + std::to_string(i)
                                                 : r.label);
    }
  }
  for (std::size_t j = 0; j < sol.witness.size(); ++j) {
    if (std::abs(sol.witness[j] - problem.lower_bound) <= kActiveTol) {
      sol.active_basis.push_back("p" + std::to_string(j) + "=" +
                                 fmt17(problem.lower_bound));
    } else if (std::abs(sol.witness[j] - problem.upper_bound) <= kActiveTol) {
      sol.active_basis.push_back("p" + std::to_string(j) + "=" +
                                 fmt17(problem.upper_bound));
    }
  }
  return sol;
}

GminResult min_single_photon_gain(double mu, const ChannelParams& channel,
                                  const DetectorParams& detector, int n_max,
                                  double slack) {
  detector.validate();
  channel.validate();
  if (!(mu >= 0.0)) {
    throw std::domain_error("mean photon number must be >= 0");
  }

  GminResult result;
  if (detector.efficiency == 0.0) {
    // all objective coefficients vanish; skip the solve
    result.status = LpStatus::Optimal;
    result.g_min = 0.0;
    result.degenerate_detector = true;
    return result;
  }

  std::vector<double> gains(detector.decoy_settings.size());
  for (std::size_t k = 0; k < gains.size(); ++k) {
    gains[k] = decoy_gain(mu, channel, detector, k);
  }
  LpProblem problem = build_constraints(gains, detector, mu, n_max, slack);
  problem.objective = g_objective(detector, n_max);

  LpSolution sol = solve_lp(problem);
  result.status = sol.status;
  if (sol.status == LpStatus::Optimal) {
    result.g_min = sol.value;
    result.witness.probs = sol.witness;
    result.witness.sub_normalized = false;
  }
  result.solution = std::move(sol);
  return result;
}

LpParseError::LpParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string write_lp_problem(const LpProblem& problem) {
  problem.validate();
  std::ostringstream os;
  if (!problem.comment.empty()) {
    os << "# " << problem.comment << '\n';
  }
  os << "minimize";
  for (double c : problem.objective) os << ' ' << fmt17(c);
  os << '\n';
  os << "bounds " << fmt17(problem.lower_bound) << ' '
     << fmt17(problem.upper_bound) << '\n';
  for (const LpRow& r : problem.rows) {
    for (double c : r.coeffs) os << fmt17(c) << ' ';
    os << relation_token(r.relation) << ' ' << fmt17(r.rhs);
    if (!r.label.empty()) os << " # " << r.label;
    os << '\n';
  }
  return os.str();
}

namespace {

double parse_double(const std::string& token, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw LpParseError(line, "expected a number, got '" + token + "'");
  }
  if (used != token.size() || !std::isfinite(v)) {
    throw LpParseError(line, "malformed number '" + token + "'");
  }
  return v;
}

}  // namespace

LpProblem read_lp_problem(std::istream& in) {
  LpProblem problem;
  bool have_objective = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string label;
    std::string body = raw;
    if (const auto hash = body.find('#'); hash != std::string::npos) {
      label = body.substr(hash + 1);
      body = body.substr(0, hash);
      const auto first = label.find_first_not_of(" \t");
      label = (first == std::string::npos) ? "" : label.substr(first);
      const auto last = label.find_last_not_of(" \t\r");
      if (last != std::string::npos) label = label.substr(0, last + 1);
    }
    std::istringstream ls(body);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) {
      if (!have_objective && !label.empty()) problem.comment = label;
      continue;
    }

    if (tokens.front() == "minimize") {
      if (have_objective) {
        throw LpParseError(lineno, "duplicate minimize line");
      }
      if (tokens.size() < 2) {
        throw LpParseError(lineno, "minimize line has no coefficients");
      }
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        problem.objective.push_back(parse_double(tokens[i], lineno));
      }
      have_objective = true;
      continue;
    }
    if (tokens.front() == "bounds") {
      if (tokens.size() != 3) {
        throw LpParseError(lineno, "bounds line needs exactly two values");
      }
      problem.lower_bound = parse_double(tokens[1], lineno);
      problem.upper_bound = parse_double(tokens[2], lineno);
      if (!(problem.lower_bound <= problem.upper_bound)) {
        throw LpParseError(lineno, "bounds out of order");
      }
      continue;
    }

    if (!have_objective) {
      throw LpParseError(lineno, "expected a minimize line first");
    }
    if (tokens.size() != problem.objective.size() + 2) {
      throw LpParseError(
          lineno, "constraint needs " + std::to_string(problem.objective.size()) +
                      " coefficients, a relation and a right-hand side");
    }
    LpRow row;
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
      row.coeffs.push_back(parse_double(tokens[i], lineno));
    }
    const std::string& rel = tokens[tokens.size() - 2];
    if (rel == "<=") {
      row.relation = LpRelation::LessEqual;
    } else if (rel == ">=") {
      row.relation = LpRelation::GreaterEqual;
    } else if (rel == "=") {
      row.relation = LpRelation::Equal;
    } else {
      throw LpParseError(lineno, "unknown relation '" + rel + "'");
    }
    row.rhs = parse_double(tokens.back(), lineno);
    row.label = label;
    problem.rows.push_back(std::move(row));
  }
  if (!have_objective) {
    throw LpParseError(lineno == 0 ? 1 : lineno, "no minimize line found");
  }
  problem.validate();
  return problem;
}

std::string write_lp_solution(const LpSolution& solution) {
  std::ostringstream os;
  os << "status = " << to_string(solution.status) << '\n';
  if (solution.status == LpStatus::Optimal) {
    os << "value = " << fmt17(solution.value) << '\n';
    for (std::size_t j = 0; j < solution.witness.size(); ++j) {
      os << 'p' << j << " = " << fmt17(solution.witness[j]) << '\n';
    }
    os << "active_basis =";
    for (const std::string& id : solution.active_basis) os << ' ' << id;
    os << '\n';
  } else {
    os << "certificate = " << solution.diagnostics << '\n';
  }
  return os.str();
}

}  // namespace ddrr
