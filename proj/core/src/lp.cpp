#include "planpace/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>

#include "planpace/core.hpp"

namespace planpace {

namespace {

constexpr double kFeasTol = 1e-7;    // constraint satisfaction tolerance
constexpr double kPivotTol = 1e-9;   // minimum pivot considered usable
constexpr double kPivotHard = 1e-11; // below this a pivot is a breakdown
constexpr double kCostTol = 1e-9;    // reduced-cost improvement threshold

// Dense full-tableau simplex state.  Columns: n structural, then p slacks,
// then artificials, then the rhs.  `reduced` holds the reduced-cost row for
// the current phase; its rhs slot carries minus the current objective value.
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // including rhs column
  std::vector<double> a;
  std::vector<int> basis;    // basis[r] = column basic in row r
  std::vector<double> reduced;
  std::size_t pivots = 0;
  std::ofstream* trace = nullptr;

  double* row(std::size_t r) { return a.data() + r * cols; }
  const double* row(std::size_t r) const { return a.data() + r * cols; }
  double rhs(std::size_t r) const { return row(r)[cols - 1]; }

  void pivot(std::size_t r, std::size_t j) {
    double* pr = row(r);
    const double inv = 1.0 / pr[j];
    for (std::size_t k = 0; k < cols; ++k) pr[k] *= inv;
    pr[j] = 1.0;  // cancel roundoff on the pivot element
    for (std::size_t rr = 0; rr < rows; ++rr) {
      if (rr == r) continue;
      double* other = row(rr);
      const double factor = other[j];
      if (factor == 0.0) continue;
      for (std::size_t k = 0; k < cols; ++k) other[k] -= factor * pr[k];
      other[j] = 0.0;
    }
    const double cf = reduced[j];
    if (cf != 0.0) {
      for (std::size_t k = 0; k < cols; ++k) reduced[k] -= cf * pr[k];
      reduced[j] = 0.0;
    }
    basis[r] = static_cast<int>(j);
    ++pivots;
  }
};

// One phase of the simplex method on the prepared tableau.  `num_cols` is the
// number of eligible entering columns (structural + slack [+ artificial in
// phase 1]).  Returns false on unboundedness.
bool optimize(Tableau& tab, std::size_t num_cols, std::size_t bland_after,
              int phase) {
  for (;;) {
    const bool bland = tab.pivots >= bland_after;
    // --- Pricing: pick the entering column. ---
    std::size_t enter = num_cols;
    if (bland) {
      for (std::size_t j = 0; j < num_cols; ++j) {
        if (tab.reduced[j] > kCostTol) { enter = j; break; }
      }
    } else {
      double best = kCostTol;
      for (std::size_t j = 0; j < num_cols; ++j) {
        if (tab.reduced[j] > best) { best = tab.reduced[j]; enter = j; }
      }
    }
    if (enter == num_cols) return true;  // optimal for this phase

    // --- Ratio test: pick the leaving row. ---
    std::size_t leave = tab.rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_pivot = 0.0;
    for (std::size_t r = 0; r < tab.rows; ++r) {
      const double arj = tab.row(r)[enter];
      if (arj <= kPivotTol) continue;
      const double ratio = tab.rhs(r) / arj;
      bool take = false;
      if (ratio < best_ratio - 1e-12) {
        take = true;
      } else if (ratio < best_ratio + 1e-12 && leave != tab.rows) {
        // Degenerate tie: Bland picks the smallest basic index (anti-cycling);
        // Dantzig mode prefers the larger pivot for numerical stability.
        take = bland ? tab.basis[r] < tab.basis[leave] : arj > best_pivot;
      }
      if (take) {
        best_ratio = ratio;
        leave = r;
        best_pivot = arj;
      }
    }
    if (leave == tab.rows) {
      // No positive entry in the entering column.  Genuinely zero column
      // means an unbounded ray; a column that is only "almost" zero means the
      // arithmetic has degraded past the point of trusting a pivot.
      for (std::size_t r = 0; r < tab.rows; ++r) {
        if (tab.row(r)[enter] > kPivotHard) {
          throw Error(ErrorCode::NumericalBreakdown,
                      "pivot candidates below " + format_double(kPivotTol) +
                          " in column " + std::to_string(enter));
        }
      }
      return false;  // unbounded
    }
    if (tab.row(leave)[enter] < kPivotHard) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "pivot magnitude " + format_double(tab.row(leave)[enter]) +
                      " below " + format_double(kPivotHard));
    }
    if (tab.trace && tab.trace->is_open()) {
      *tab.trace << "phase " << phase << " pivot " << tab.pivots << ": enter "
                 << enter << " leave row " << leave << " (basis "
                 << tab.basis[leave] << ") obj " << -tab.reduced[tab.cols - 1]
                 << "\n";
    }
    tab.pivot(leave, enter);
  }
}

}  // namespace

void LinearProgram::add_inequality(const std::vector<double>& row, double rhs) {
  A.insert(A.end(), row.begin(), row.end());
  b.push_back(rhs);
}

void LinearProgram::add_equality(const std::vector<double>& row, double rhs) {
  E.insert(E.end(), row.begin(), row.end());
  e.push_back(rhs);
}

LpSolution solve_lp(const LinearProgram& lp, const LpDebugOptions* debug) {
  const std::size_t n = lp.n;
  const std::size_t p = lp.p();
  const std::size_t q = lp.q();
  if (lp.c.size() != n || lp.A.size() != p * n || lp.E.size() != q * n) {
    throw Error(ErrorCode::DimensionMismatch, "LP matrix sizes inconsistent");
  }
  for (double v : lp.c) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameters, "non-finite objective entry");
    }
  }

  std::ofstream trace_file;
  if (debug && !debug->trace_path.empty()) {
    trace_file.open(debug->trace_path, std::ios::app);
  }

  // Rows needing an artificial variable: flipped inequalities (negative rhs,
  // slack coefficient becomes -1) and all equality rows.
  std::vector<bool> needs_artificial(p + q, false);
  std::size_t num_art = 0;
  for (std::size_t r = 0; r < p; ++r) {
    if (lp.b[r] < 0.0) { needs_artificial[r] = true; ++num_art; }
  }
  for (std::size_t r = 0; r < q; ++r) {
    needs_artificial[p + r] = true;
    ++num_art;
  }

  Tableau tab;
  tab.rows = p + q;
  const std::size_t art_base = n + p;
  tab.cols = n + p + num_art + 1;
  tab.a.assign(tab.rows * tab.cols, 0.0);
  tab.basis.assign(tab.rows, -1);
  tab.trace = trace_file.is_open() ? &trace_file : nullptr;

  std::size_t next_art = art_base;
  for (std::size_t r = 0; r < p + q; ++r) {
    double* row = tab.row(r);
    const bool ineq = r < p;
    const double* src = ineq ? lp.A.data() + r * n : lp.E.data() + (r - p) * n;
    double rhs = ineq ? lp.b[r] : lp.e[r];
    const double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) row[j] = sign * src[j];
    if (ineq) row[n + r] = sign;  // slack
    row[tab.cols - 1] = sign * rhs;
    if (needs_artificial[r]) {
      row[next_art] = 1.0;
      tab.basis[r] = static_cast<int>(next_art);
      ++next_art;
    } else {
      tab.basis[r] = static_cast<int>(n + r);  // slack is basic
    }
  }

  const std::size_t bland_after = 5 * (n + p + q);
  LpSolution sol;

  // ---- Phase 1: maximize minus the sum of artificials. ----
  if (num_art > 0) {
    tab.reduced.assign(tab.cols, 0.0);
    for (std::size_t j = art_base; j < art_base + num_art; ++j) {
      tab.reduced[j] = -1.0;
    }
    // Zero out reduced costs of the basic artificials.
    for (std::size_t r = 0; r < tab.rows; ++r) {
      if (tab.basis[r] >= static_cast<int>(art_base)) {
        const double* row = tab.row(r);
        for (std::size_t k = 0; k < tab.cols; ++k) tab.reduced[k] += row[k];
      }
    }
    // Phase 1 is always bounded (objective <= 0).
    optimize(tab, art_base + num_art, bland_after, 1);
    const double infeasibility = tab.reduced[tab.cols - 1];  // = sum of artificials
    if (infeasibility > kFeasTol) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = tab.pivots;
      return sol;
    }
    // Drive any artificial still basic (necessarily at level ~0) out of the
    // basis, or drop its row as redundant.
    for (std::size_t r = 0; r < tab.rows; ++r) {
      if (tab.basis[r] < static_cast<int>(art_base)) continue;
      const double* row = tab.row(r);
      std::size_t j = art_base;
      for (std::size_t k = 0; k < art_base; ++k) {
        if (std::abs(row[k]) > kPivotTol) { j = k; break; }
      }
      if (j < art_base) {
        tab.pivot(r, j);
      } else {
        // Row is zero over structural and slack columns: redundant constraint.
        const std::size_t last = tab.rows - 1;
        if (r != last) {
          std::copy(tab.row(last), tab.row(last) + tab.cols, tab.row(r));
          tab.basis[r] = tab.basis[last];
        }
        tab.a.resize(last * tab.cols);
        tab.basis.resize(last);
        tab.rows = last;
        --r;  // re-examine the row moved into this slot
      }
    }
  }

  // ---- Phase 2: maximize the real objective over structural + slack cols. ----
  tab.reduced.assign(tab.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) tab.reduced[j] = lp.c[j];
  for (std::size_t r = 0; r < tab.rows; ++r) {
    const int bj = tab.basis[r];
    if (bj < static_cast<int>(n) && lp.c[bj] != 0.0) {
      const double cb = lp.c[bj];
      const double* row = tab.row(r);
      for (std::size_t k = 0; k < tab.cols; ++k) tab.reduced[k] -= cb * row[k];
      tab.reduced[bj] = 0.0;
    }
  }
  const bool bounded = optimize(tab, n + p, bland_after, 2);
  sol.pivots = tab.pivots;
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < tab.rows; ++r) {
    const int bj = tab.basis[r];
    if (bj >= 0 && bj < static_cast<int>(n)) sol.x[bj] = tab.rhs(r);
  }
  sol.objective_value = -tab.reduced[tab.cols - 1];
  return sol;
}

LpSolution lp_brute_check(const LinearProgram& lp, double h) {
  const std::size_t n = lp.n;
  const std::size_t steps = static_cast<std::size_t>(std::floor(2.0 / h)) + 1;
  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> idx(n, 0);
  LpSolution best;
  best.status = LpStatus::Infeasible;
  best.objective_value = -std::numeric_limits<double>::infinity();

  // Equality rows get slack proportional to the grid pitch: a hyperplane can
  // pass between lattice points but never farther than h * ||row||_1 / 2 from
  // the nearest one along the coordinate directions.
  std::vector<double> eq_slack(lp.q(), 0.0);
  for (std::size_t r = 0; r < lp.q(); ++r) {
    double norm1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) norm1 += std::abs(lp.E[r * n + j]);
    eq_slack[r] = h * norm1 + 1e-12;
  }

  for (;;) {
    for (std::size_t j = 0; j < n; ++j) x[j] = std::min(2.0, idx[j] * h);
    bool ok = true;
    for (std::size_t r = 0; ok && r < lp.p(); ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += lp.A[r * n + j] * x[j];
      ok = lhs <= lp.b[r] + 1e-9;
    }
    for (std::size_t r = 0; ok && r < lp.q(); ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += lp.E[r * n + j] * x[j];
      ok = std::abs(lhs - lp.e[r]) <= eq_slack[r];
    }
    if (ok) {
      double val = 0.0;
      for (std::size_t j = 0; j < n; ++j) val += lp.c[j] * x[j];
      if (best.status == LpStatus::Infeasible || val > best.objective_value) {
        best.status = LpStatus::Optimal;
        best.objective_value = val;
        best.x = x;
      }
    }
    // Odometer increment over the lattice.
    std::size_t d = 0;
    while (d < n && ++idx[d] >= steps) idx[d++] = 0;
    if (d == n) break;
  }
  return best;
}

}  // namespace planpace
