// Self-contained dense linear-programming solver used by the baseline
// oracles: a two-phase primal simplex over the standard form
//
//     maximize    c . x
//     subject to  A x <= b      (p inequality rows)
//                 E x  = e      (q equality rows)
//                 x >= 0
//
// Dantzig pricing with a switch to Bland's rule after 5 * (n + p + q)
// iterations guarantees termination; the solver is deterministic (identical
// inputs give identical pivot sequences).
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace planpace {

struct LinearProgram {
  std::size_t n = 0;       // number of variables
  std::vector<double> c;   // length n, objective (maximize)
  std::vector<double> A;   // row-major p x n
  std::vector<double> b;   // length p
  std::vector<double> E;   // row-major q x n
  std::vector<double> e;   // length q

  std::size_t p() const { return b.size(); }
  std::size_t q() const { return e.size(); }

  void add_inequality(const std::vector<double>& row, double rhs);
  void add_equality(const std::vector<double>& row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;       // length n when Optimal
  double objective_value = 0.0;
  std::size_t pivots = 0;      // total pivot count (deterministic)
};

struct LpDebugOptions {
  // When set, every pivot (phase, iteration, entering/leaving column,
  // objective value) is appended to this text file.
  std::string trace_path;
};

// Feasibility tolerance 1e-7; pivots below 1e-11 in magnitude are refused
// (NumericalBreakdown) rather than divided by.
LpSolution solve_lp(const LinearProgram& lp,
                    const LpDebugOptions* debug = nullptr);

// Independent test oracle: exhaustive grid search with step h over the box
// [0, 2]^n (callers guarantee the feasible region lies inside).  Inequality
// rows are checked with a small absolute slack; equality rows with slack
// h * ||row||_1 since the grid cannot hit a hyperplane exactly.  Intended for
// n <= 3 in tests only.
LpSolution lp_brute_check(const LinearProgram& lp, double h);

}  // namespace planpace
