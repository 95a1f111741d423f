#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ddrr::detail {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-11;
constexpr double kPhase1Tol = 1e-9;
constexpr int kMaxPivots = 50000;

struct Row {
  std::vector<double> a;  // structural coefficients
  LpRelation rel;
  double b;
};

class Tableau {
 public:
  Tableau(std::vector<Row> rows, std::size_t nvars)
      : nvars_(nvars), m_(rows.size()) {
    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (Row& r : rows) {
      if (r.b < 0.0) {  // normalize to nonnegative rhs
        for (double& v : r.a) v = -v;
        r.b = -r.b;
        if (r.rel == LpRelation::LessEqual) {
          r.rel = LpRelation::GreaterEqual;
        } else if (r.rel == LpRelation::GreaterEqual) {
          r.rel = LpRelation::LessEqual;
        }
      }
      if (r.rel != LpRelation::Equal) ++n_slack;
      if (r.rel != LpRelation::LessEqual) ++n_art;
    }
    slack_begin_ = nvars_;
    art_begin_ = nvars_ + n_slack;
    ncols_ = art_begin_ + n_art;
    width_ = ncols_ + 1;  // + rhs column
    t_.assign((m_ + 1) * width_, 0.0);
    basis_.assign(m_, 0);

    std::size_t slack = slack_begin_;
    std::size_t art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& r = rows[i];
      double* row = at(i);
      std::copy(r.a.begin(), r.a.end(), row);
      rhs(i) = r.b;
      switch (r.rel) {
        case LpRelation::LessEqual:
          row[slack] = 1.0;
          basis_[i] = slack++;
          break;
        case LpRelation::GreaterEqual:
          row[slack++] = -1.0;
          row[art] = 1.0;
          basis_[i] = art++;
          break;
        case LpRelation::Equal:
          row[art] = 1.0;
          basis_[i] = art++;
          break;
      }
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return ncols_; }
  std::size_t art_begin() const { return art_begin_; }

  /// Current objective value (set_costs + pivots keep this in sync).
  double objective_value() { return -obj_rhs(); }

  /// Install cost coefficients (length ncols) and price out the basis.
  void set_costs(const std::vector<double>& costs) {
    double* o = obj();
    std::fill(o, o + width_, 0.0);
    std::copy(costs.begin(), costs.end(), o);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = at(i);
      for (std::size_t j = 0; j < width_; ++j) o[j] -= cb * row[j];
    }
  }

  /// Bland's-rule iterations until no reduced cost is negative. Columns at
  /// or past `limit` are ineligible to enter (phase 2 bans artificials).
  LpStatus iterate(std::size_t limit, int& pivots) {
    for (;;) {
      const double* o = obj();
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (o[j] < -kReducedCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return LpStatus::Optimal;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i)[enter];
        if (a > kPivotTol) {
          const double ratio = rhs(i) / a;
          const double tie = 1e-12 * (1.0 + std::abs(best));
          if (ratio < best - tie) {
            best = ratio;
            leave = i;
          } else if (ratio <= best + tie && leave < m_ &&
                     basis_[i] < basis_[leave]) {
            leave = i;
          }
        }
      }
      if (leave == m_) return LpStatus::Unbounded;
      pivot(leave, enter);
      if (++pivots > kMaxPivots) {
        throw SolverError("simplex pivot limit exceeded");
      }
    }
  }

  /// After phase 1, pivot remaining zero-level artificials out of the basis
  /// or drop their rows as redundant.
  void purge_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < art_begin_) {
        ++i;
        continue;
      }
      const double* row = at(i);
      std::size_t col = art_begin_;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (std::abs(row[j]) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col < art_begin_) {
        pivot(i, col);
        ++i;
      } else {
        drop_row(i);
      }
    }
  }

  std::vector<double> extract(std::size_t nvars) {
    std::vector<double> x(nvars, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < nvars) x[basis_[i]] = rhs(i);
    }
    return x;
  }

  std::string infeasibility_report(double violation) {
    std::ostringstream os;
    os << "phase-1 optimum " << violation
       << " > 0: the constraint system has no feasible point; residual "
          "carried by rows";
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= art_begin_ && rhs(i) > kPhase1Tol) os << ' ' << i;
    }
    return os.str();
  }

 private:
  double* at(std::size_t i) { return t_.data() + i * width_; }
  double& rhs(std::size_t i) { return t_[i * width_ + ncols_]; }
  double* obj() { return at(m_); }
  double& obj_rhs() { return rhs(m_); }

  void pivot(std::size_t r, std::size_t c) {
    double* prow = at(r);
    const double piv = prow[c];
    for (std::size_t j = 0; j < width_; ++j) prow[j] /= piv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = at(i);
      const double factor = row[c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= factor * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t i) {
    // move the last constraint row into slot i; the objective row follows
    if (i != m_ - 1) {
      std::copy(at(m_ - 1), at(m_ - 1) + width_, at(i));
      basis_[i] = basis_[m_ - 1];
    }
    std::copy(at(m_), at(m_) + width_, at(m_ - 1));
    --m_;
    basis_.pop_back();
    t_.resize((m_ + 1) * width_);
  }

  std::size_t nvars_;
  std::size_t m_;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t ncols_ = 0;
  std::size_t width_ = 0;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

SimplexResult simplex_solve(const LpProblem& problem) {
  const std::size_t n = problem.num_vars();
  const double lo = problem.lower_bound;
  const double hi = problem.upper_bound;
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi >= lo)) {
    throw std::invalid_argument("variable bounds must be finite with lo <= hi");
  }

  // Shift to y = x - lo >= 0 and add explicit upper-bound rows y_j <= hi-lo.
  std::vector<Row> rows;
  rows.reserve(problem.rows.size() + n);
  for (const LpRow& r : problem.rows) {
    double shift = 0.0;
    for (double c : r.coeffs) shift += c * lo;
    rows.push_back(Row{r.coeffs, r.relation, r.rhs - shift});
  }
  for (std::size_t j = 0; j < n; ++j) {
    Row bound;
    bound.a.assign(n, 0.0);
    bound.a[j] = 1.0;
    bound.rel = LpRelation::LessEqual;
    bound.b = hi - lo;
    rows.push_back(std::move(bound));
  }

  Tableau tab(std::move(rows), n);
  int pivots = 0;

  // Phase 1: minimize the artificial sum.
  {
    std::vector<double> costs(tab.cols(), 0.0);
    for (std::size_t j = tab.art_begin(); j < tab.cols(); ++j) costs[j] = 1.0;
    tab.set_costs(costs);
    const LpStatus st = tab.iterate(tab.cols(), pivots);
    if (st != LpStatus::Optimal) {
      throw SolverError("phase-1 simplex did not terminate at an optimum");
    }
    const double violation = tab.objective_value();
    if (violation > kPhase1Tol) {
      SimplexResult res;
      res.status = LpStatus::Infeasible;
      res.diagnostics = tab.infeasibility_report(violation);
      return res;
    }
    tab.purge_artificials();
  }

  // Phase 2: the real objective over structural columns only.
  {
    std::vector<double> costs(tab.cols(), 0.0);
    std::copy(problem.objective.begin(), problem.objective.end(),
              costs.begin());
    tab.set_costs(costs);
    const LpStatus st = tab.iterate(tab.art_begin(), pivots);
    if (st == LpStatus::Unbounded) {
      SimplexResult res;
      res.status = LpStatus::Unbounded;
      res.diagnostics = "objective unbounded below on the feasible region";
      return res;
    }
  }

  SimplexResult res;
  res.status = LpStatus::Optimal;
  res.x = tab.extract(n);
  for (double& v : res.x) v += lo;  // undo the bound shift
  return res;
}

}  // namespace ddrr::detail
