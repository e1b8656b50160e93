#include "planpace/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace planpace {

namespace {
constexpr double kRowSumTolerance = 1e-9;
}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::PlanRowSumMismatch: return "PlanRowSumMismatch";
    case ErrorCode::EntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::DegenerateDimensions: return "DegenerateDimensions";
    case ErrorCode::ScaledCostOutOfRange: return "ScaledCostOutOfRange";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::ProbabilityUnderflow: return "ProbabilityUnderflow";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::ZeroRhoMin: return "ZeroRhoMin";
    case ErrorCode::RefusePreprocess: return "RefusePreprocess";
    case ErrorCode::InfeasiblePlanSpec: return "InfeasiblePlanSpec";
    case ErrorCode::BanditHygieneViolation: return "BanditHygieneViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

const char* setting_name(Setting setting) {
  switch (setting) {
    case Setting::Ora: return "ORA";
    case Setting::OlrcFull: return "OLRC_full";
    case Setting::OlrcBandit: return "OLRC_bandit";
  }
  return "unknown";
}

double SpendingPlan::row_sum(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) sum += entry(i, t);
  return sum;
}

double SpendingPlan::rho_min() const {
  double lo = entries.empty() ? 0.0 : entries.front();
  for (double v : entries) lo = std::min(lo, v);
  return lo;
}

Mixture Mixture::void_dirac(std::size_t num_arms) {
  Mixture xi;
  xi.probs.assign(num_arms, 0.0);
  xi.probs[0] = 1.0;
  return xi;
}

Mixture Mixture::uniform(std::size_t num_arms) {
  Mixture xi;
  xi.probs.assign(num_arms, 1.0 / static_cast<double>(num_arms));
  return xi;
}

double LagrangeVector::l1_norm() const {
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum;
}

bool LagrangeVector::feasible(double slack) const {
  double sum = 0.0;
  for (double v : values) {
    if (v < -slack) return false;
    sum += v;
  }
  return sum <= radius + slack;
}

const Instance& validate_instance(const Instance& inst) {
  if (inst.horizon < 1) {
    throw Error(ErrorCode::DegenerateDimensions, "horizon T must be >= 1");
  }
  if (inst.num_arms < 2) {
    throw Error(ErrorCode::DegenerateDimensions,
                "need K >= 2 arms (void arm plus at least one real arm), got " +
                    std::to_string(inst.num_arms));
  }
  if (inst.num_resources < 1) {
    throw Error(ErrorCode::DegenerateDimensions, "need m >= 1 resources");
  }
  if (!(inst.budget >= 0.0) || !std::isfinite(inst.budget)) {
    throw Error(ErrorCode::EntryOutOfRange, "budget B must be a nonnegative real");
  }
  const SpendingPlan& plan = inst.plan;
  if (plan.num_resources != inst.num_resources || plan.horizon != inst.horizon ||
      plan.entries.size() != plan.num_resources * plan.horizon) {
    throw Error(ErrorCode::DegenerateDimensions,
                "plan dimensions do not match the instance (expected " +
                    std::to_string(inst.num_resources) + " x " +
                    std::to_string(inst.horizon) + ")");
  }
  for (std::size_t i = 0; i < plan.num_resources; ++i) {
    for (std::size_t t = 0; t < plan.horizon; ++t) {
      const double v = plan.entry(i, t);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::EntryOutOfRange,
                    "plan entry (" + std::to_string(i) + ", " +
                        std::to_string(t) + ") = " + format_double(v) +
                        " outside [0, 1]");
      }
    }
    const double sum = plan.row_sum(i);
    if (std::abs(sum - inst.budget) > kRowSumTolerance) {
      throw Error(ErrorCode::PlanRowSumMismatch,
                  "plan row " + std::to_string(i) + " sums to " +
                      format_double(sum) + ", expected B = " +
                      format_double(inst.budget));
    }
  }
  return inst;
}

std::vector<double> budget_scale_factors(const std::vector<double>& budgets) {
  if (budgets.empty()) {
    throw Error(ErrorCode::DegenerateDimensions, "no budgets given");
  }
  double lo = budgets.front();
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] > 0.0)) {
      throw Error(ErrorCode::InvalidParameters,
                  "budget " + std::to_string(i) + " must be positive");
    }
    lo = std::min(lo, budgets[i]);
  }
  std::vector<double> scales(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) scales[i] = budgets[i] / lo;
  return scales;
}

double normalize_cost(double raw_cost, double scale_factor) {
  const double scaled = raw_cost / scale_factor;
  if (!(scaled >= 0.0 && scaled <= 1.0)) {
    throw Error(ErrorCode::ScaledCostOutOfRange,
                "scaled cost " + format_double(scaled) + " outside [0, 1]");
  }
  return scaled;
}

void normalize_costs(std::vector<double>& costs_by_arm, std::size_t num_arms,
                     const std::vector<double>& scale_factors) {
  const std::size_t m = scale_factors.size();
  if (costs_by_arm.size() != num_arms * m) {
    throw Error(ErrorCode::DimensionMismatch,
                "cost matrix is not K x m with K = " + std::to_string(num_arms) +
                    ", m = " + std::to_string(m));
  }
  for (std::size_t x = 0; x < num_arms; ++x) {
    for (std::size_t i = 0; i < m; ++i) {
      costs_by_arm[x * m + i] =
          normalize_cost(costs_by_arm[x * m + i], scale_factors[i]);
    }
  }
}

std::vector<double> update_budget(const std::vector<double>& remaining,
                                  const std::vector<double>& costs) {
  if (remaining.size() != costs.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "remaining and cost vectors differ in length");
  }
  std::vector<double> next(remaining.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    next[i] = remaining[i] - costs[i];
  }
  return next;
}

bool should_force_void(const std::vector<double>& remaining) {
  for (double b : remaining) {
    if (b < 1.0) return true;
  }
  return false;
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     std::size_t num_resources) {
  out << "t,arm,forced_void,reward";
  for (std::size_t i = 0; i < num_resources; ++i) out << ",cost_" << i;
  for (std::size_t i = 0; i < num_resources; ++i) out << ",remaining_" << i;
  for (std::size_t i = 0; i < num_resources; ++i) out << ",lambda_" << i;
  out << ",cum_reward\n";
  double cum = 0.0;
  for (const RoundOutcome& o : trace.outcomes) {
    cum += o.reward;
    out << o.t << ',' << o.arm << ',' << (o.forced_void ? 1 : 0) << ','
        << format_double(o.reward);
    for (std::size_t i = 0; i < num_resources; ++i) {
      out << ',' << format_double(o.costs[i]);
    }
    for (std::size_t i = 0; i < num_resources; ++i) {
      out << ',' << format_double(o.remaining_budgets[i]);
    }
    for (std::size_t i = 0; i < num_resources; ++i) {
      out << ',' << format_double(o.lambda.values[i]);
    }
    out << ',' << format_double(cum) << '\n';
  }
}

}  // namespace planpace
