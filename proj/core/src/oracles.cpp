#include "planpace/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace planpace {

namespace {

// Above this row count the static-style LPs switch to their duals, whose
// tableau has only K-1 constraint rows.
constexpr std::size_t kPrimalRowLimit = 512;

void check_dims(const MeanProfile& profile, const SpendingPlan& plan) {
  if (profile.horizon() != plan.horizon ||
      profile.num_resources() != plan.num_resources) {
    throw Error(ErrorCode::DimensionMismatch,
                "mean profile is " + std::to_string(profile.horizon()) +
                    " rounds x " + std::to_string(profile.num_resources()) +
                    " resources but the plan is " +
                    std::to_string(plan.horizon) + " x " +
                    std::to_string(plan.num_resources));
  }
}

// Solves max obj.xi  s.t.  rows xi <= rhs, xi >= 0 where every rhs entry is
// nonnegative and the objective is nonnegative (a packing LP; xi = 0 is
// feasible and the simplex row keeps it bounded).  Large row counts are
// routed through the LP dual, which by strong duality has the same value.
double packing_value(std::size_t n, const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& rhs,
                     const std::vector<double>& obj) {
  if (n == 0) return 0.0;
  if (rows.size() <= kPrimalRowLimit) {
    LinearProgram lp;
    lp.n = n;
    lp.c = obj;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      lp.add_inequality(rows[r], rhs[r]);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "packing LP unexpectedly not optimal");
    }
    return sol.objective_value;
  }
  // Dual: min rhs.y  s.t.  rows^T y >= obj, y >= 0, posed as a maximization.
  LinearProgram dual;
  dual.n = rows.size();
  dual.c.resize(dual.n);
  for (std::size_t r = 0; r < rows.size(); ++r) dual.c[r] = -rhs[r];
  std::vector<double> row(dual.n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < rows.size(); ++r) row[r] = -rows[r][j];
    dual.add_inequality(row, -obj[j]);
  }
  const LpSolution sol = solve_lp(dual);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                "packing LP dual unexpectedly not optimal");
  }
  return -sol.objective_value;
}

}  // namespace

void MeanProfile::validate() const {
  const std::size_t T = horizon();
  const std::size_t K = num_arms();
  const std::size_t m = num_resources();
  if (T == 0 || K == 0 || m == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "mean profile must have positive T, K and m");
  }
  for (std::size_t t = 0; t < T; ++t) {
    if (fbar[t].size() != K || cbar[t].size() != K) {
      throw Error(ErrorCode::DimensionMismatch,
                  "profile round " + std::to_string(t + 1) +
                      " does not cover all arms");
    }
    for (std::size_t x = 0; x < K; ++x) {
      if (cbar[t][x].size() != m) {
        throw Error(ErrorCode::DimensionMismatch,
                    "profile round " + std::to_string(t + 1) + ", arm " +
                        std::to_string(x) + " has wrong cost arity");
      }
      if (!(fbar[t][x] >= 0.0 && fbar[t][x] <= 1.0)) {
        throw Error(ErrorCode::EntryOutOfRange,
                    "mean reward outside [0,1] at round " +
                        std::to_string(t + 1));
      }
      for (double c : cbar[t][x]) {
        if (!(c >= 0.0 && c <= 1.0)) {
          throw Error(ErrorCode::EntryOutOfRange,
                      "mean cost outside [0,1] at round " +
                          std::to_string(t + 1));
        }
      }
    }
    if (fbar[t][0] != 0.0) {
      throw Error(ErrorCode::EntryOutOfRange,
                  "void arm reward mean must be zero");
    }
    for (double c : cbar[t][0]) {
      if (c != 0.0) {
        throw Error(ErrorCode::EntryOutOfRange,
                    "void arm cost means must be zero");
      }
    }
  }
}

MeanProfile profile_from_environment(const Environment& env) {
  MeanProfile profile;
  profile.fbar.reserve(env.horizon());
  profile.cbar.reserve(env.horizon());
  for (std::size_t t = 1; t <= env.horizon(); ++t) {
    auto [fbar, cbar] = mean_round(env, t);
    profile.fbar.push_back(std::move(fbar));
    profile.cbar.push_back(std::move(cbar));
  }
  return profile;
}

ErrorSchedule ErrorSchedule::uniform(std::size_t num_resources,
                                     std::size_t horizon, double value) {
  ErrorSchedule errs;
  errs.eps.assign(num_resources, std::vector<double>(horizon, value));
  errs.validate();
  return errs;
}

double ErrorSchedule::total() const {
  double sum = 0.0;
  for (const auto& row : eps) {
    for (double v : row) sum += v;
  }
  return sum;
}

void ErrorSchedule::validate() const {
  for (const auto& row : eps) {
    for (double v : row) {
      if (!(v >= 0.0)) {
        throw Error(ErrorCode::EntryOutOfRange,
                    "error-schedule entries must be nonnegative");
      }
    }
  }
}

std::pair<double, std::vector<double>> opt_dynamic(const MeanProfile& profile,
                                                   const SpendingPlan& plan) {
  profile.validate();
  check_dims(profile, plan);
  const std::size_t T = profile.horizon();
  const std::size_t K = profile.num_arms();
  const std::size_t m = profile.num_resources();
  std::vector<double> per_round(T, 0.0);
  double total = 0.0;
  if (K < 2) return {0.0, per_round};
  // One small LP per round over xi(1..K-1); xi(0) is eliminated through
  // xi(0) = 1 - sum of the rest, leaving the simplex row sum xi <= 1.
  for (std::size_t t = 0; t < T; ++t) {
    LinearProgram lp;
    lp.n = K - 1;
    lp.c.assign(profile.fbar[t].begin() + 1, profile.fbar[t].end());
    lp.add_inequality(std::vector<double>(K - 1, 1.0), 1.0);
    std::vector<double> row(K - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t x = 1; x < K; ++x) row[x - 1] = profile.cbar[t][x][i];
      lp.add_inequality(row, plan.entry(i, t));
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "per-round LP not optimal at round " + std::to_string(t + 1));
    }
    per_round[t] = sol.objective_value;
    total += sol.objective_value;
  }
  return {total, std::move(per_round)};
}

double opt_static(const MeanProfile& profile, const SpendingPlan& plan) {
  profile.validate();
  check_dims(profile, plan);
  const std::size_t T = profile.horizon();
  const std::size_t K = profile.num_arms();
  const std::size_t m = profile.num_resources();
  if (K < 2) return 0.0;
  std::vector<double> obj(K - 1, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t x = 1; x < K; ++x) obj[x - 1] += profile.fbar[t][x];
  }
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  rows.reserve(1 + m * T);
  rhs.reserve(1 + m * T);
  rows.emplace_back(K - 1, 1.0);
  rhs.push_back(1.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(K - 1);
      for (std::size_t x = 1; x < K; ++x) row[x - 1] = profile.cbar[t][x][i];
      rows.push_back(std::move(row));
      rhs.push_back(plan.entry(i, t));
    }
  }
  return packing_value(K - 1, rows, rhs, obj);
}

double opt_dynamic_eps(const MeanProfile& profile, const SpendingPlan& plan,
                       const ErrorSchedule& errs, double budget) {
  profile.validate();
  check_dims(profile, plan);
  errs.validate();
  const std::size_t T = profile.horizon();
  const std::size_t K = profile.num_arms();
  const std::size_t m = profile.num_resources();
  if (errs.eps.size() != m || (!errs.eps.empty() && errs.eps[0].size() != T)) {
    throw Error(ErrorCode::DimensionMismatch,
                "error schedule must be m x T");
  }
  if (K < 2) return 0.0;

  // One joint LP over all per-round mixtures, variable index
  // (t, x) -> t*(K-1) + (x-1).
  const std::size_t n = T * (K - 1);
  LinearProgram lp;
  lp.n = n;
  lp.c.assign(n, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t x = 1; x < K; ++x) {
      lp.c[t * (K - 1) + (x - 1)] = profile.fbar[t][x];
    }
  }
  std::vector<double> row(n, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t x = 1; x < K; ++x) row[t * (K - 1) + (x - 1)] = 1.0;
    lp.add_inequality(row, 1.0);
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t x = 1; x < K; ++x) {
        row[t * (K - 1) + (x - 1)] = profile.cbar[t][x][i];
      }
      lp.add_inequality(row, plan.entry(i, t) + errs.eps[i][t]);
    }
  }
  // With eps identically zero the aggregate rows are implied by the per-round
  // rows (plan rows sum to B), so they are omitted.
  if (errs.total() > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t x = 1; x < K; ++x) {
          row[t * (K - 1) + (x - 1)] = profile.cbar[t][x][i];
        }
      }
      lp.add_inequality(row, budget);
    }
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalBreakdown,
                "relaxed dynamic LP unexpectedly not optimal");
  }
  return sol.objective_value;
}

double opt_static_eps(const MeanProfile& profile, const SpendingPlan& plan,
                      const ErrorSchedule& errs, double budget) {
  profile.validate();
  check_dims(profile, plan);
  errs.validate();
  const std::size_t T = profile.horizon();
  const std::size_t K = profile.num_arms();
  const std::size_t m = profile.num_resources();
  if (errs.eps.size() != m || (!errs.eps.empty() && errs.eps[0].size() != T)) {
    throw Error(ErrorCode::DimensionMismatch,
                "error schedule must be m x T");
  }
  if (K < 2) return 0.0;
  std::vector<double> obj(K - 1, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t x = 1; x < K; ++x) obj[x - 1] += profile.fbar[t][x];
  }
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  rows.emplace_back(K - 1, 1.0);
  rhs.push_back(1.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(K - 1);
      for (std::size_t x = 1; x < K; ++x) row[x - 1] = profile.cbar[t][x][i];
      rows.push_back(std::move(row));
      rhs.push_back(plan.entry(i, t) + errs.eps[i][t]);
    }
  }
  if (errs.total() > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(K - 1, 0.0);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t x = 1; x < K; ++x) {
          row[x - 1] += profile.cbar[t][x][i];
        }
      }
      rows.push_back(std::move(row));
      rhs.push_back(budget);
    }
  }
  return packing_value(K - 1, rows, rhs, obj);
}

std::pair<double, double> realized_regrets(const RunTrace& trace,
                                           const OracleReport& report) {
  return {report.opt_dynamic - trace.total_reward,
          report.opt_static - trace.total_reward};
}

double regret_bound(Setting setting, bool meta, std::size_t horizon,
                    double rho, double rho_min, double R_D_T, double R_P_T,
                    double delta, double delta_P, double eps_total) {
  if (horizon == 0) {
    throw Error(ErrorCode::InvalidParameters, "regret_bound: T must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "regret_bound: delta must lie in (0,1)");
  }
  if (setting == Setting::OlrcBandit && !(delta_P > 0.0 && delta_P < 1.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "regret_bound: delta_P must lie in (0,1)");
  }
  if (!(R_D_T >= 0.0) || !(R_P_T >= 0.0) || !(eps_total >= 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "regret_bound: regret terms must be nonnegative");
  }
  const double T = static_cast<double>(horizon);
  const double S = std::sqrt(2.0 * T * std::log(T / delta));

  if (!meta) {
    if (!(rho_min > 0.0)) {
      throw Error(ErrorCode::InvalidParameters,
                  "regret_bound: rho_min must be positive without meta "
                  "rescaling");
    }
    const double inv = 1.0 / rho_min;
    double bound = 1.0 + inv + 2.0 * inv * R_D_T;
    switch (setting) {
      case Setting::Ora:
        bound += (8.0 + 8.0 * inv) * S;
        break;
      case Setting::OlrcFull:
        bound += (1.0 + 2.0 * inv) * R_P_T + (8.0 + 8.0 * inv) * S;
        break;
      case Setting::OlrcBandit:
        bound += (1.0 + 2.0 * inv) * R_P_T + (4.0 + 4.0 * inv) * S;
        break;
    }
    return bound + inv * eps_total;
  }

  if (!(rho > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "regret_bound: rho must be positive under meta rescaling");
  }
  const double q = std::pow(T, 0.25);       // T^{1/4}
  const double t34 = std::pow(T, 0.75);     // T^{3/4}
  const double sqrt_log = std::sqrt(std::log(T / delta));
  const double sqrt_T = std::sqrt(T);
  double bound = 0.0;
  switch (setting) {
    case Setting::Ora:
      bound = (14.0 / rho) * (sqrt_log + R_D_T / sqrt_T) * t34 + t34 +
              (8.0 + 4.0 * q / rho) * S + (2.0 * q / rho) * R_D_T;
      break;
    case Setting::OlrcFull:
      bound = (14.0 / rho) * (sqrt_log + (R_P_T + R_D_T) / sqrt_T) * t34 +
              t34 + (8.0 + 4.0 * q / rho) * S + (2.0 * q / rho) * R_D_T +
              (1.0 + 2.0 * q / rho) * R_P_T;
      break;
    case Setting::OlrcBandit:
      bound = (14.0 / rho) * ((R_P_T + R_D_T) / sqrt_T) * t34 + t34 +
              (4.0 + 4.0 * q / rho) * S + (2.0 * q / rho) * R_D_T +
              (1.0 + 2.0 * q / rho) * R_P_T;
      break;
  }
  return bound + (q / rho) * eps_total;
}

double hedge_unit_regret(std::size_t num_actions, std::size_t horizon) {
  if (num_actions < 2) return 0.0;
  return std::sqrt(static_cast<double>(horizon) / 2.0 *
                   std::log(static_cast<double>(num_actions)));
}

double entropic_dual_unit_regret(std::size_t num_resources,
                                 std::size_t horizon) {
  return hedge_unit_regret(num_resources + 1, horizon);
}

double ogd_unit_regret(std::size_t num_resources, double radius,
                       std::size_t horizon) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "ogd_unit_regret: radius must be positive");
  }
  const double G = std::sqrt(static_cast<double>(num_resources)) *
                   std::max(1.0, 2.0 * radius);
  const double raw = 1.5 * radius * G * std::sqrt(static_cast<double>(horizon));
  return raw / (2.0 * radius);
}

double exp3ix_unit_regret(std::size_t num_arms, std::size_t horizon,
                          double delta_P) {
  if (!(delta_P > 0.0 && delta_P < 1.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "exp3ix_unit_regret: delta_P must lie in (0,1)");
  }
  if (num_arms < 2) return 0.0;
  const double K = static_cast<double>(num_arms);
  const double T = static_cast<double>(horizon);
  const double lk = std::log(K);
  return 4.0 * std::sqrt(K * T * lk) +
         (std::sqrt(2.0 * K * T / lk) + 1.0) * std::log(2.0 / delta_P);
}

}  // namespace planpace
