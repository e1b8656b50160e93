#include "planpace/minimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace planpace {

namespace {

// Rescales a payoff from [lo, hi] to [0,1], clamping out-of-range inputs and
// counting each clamp.
double rescale_clamped(double payoff, double lo, double hi,
                       std::size_t* clamp_events) {
  if (payoff < lo || payoff > hi) {
    if (clamp_events != nullptr) ++(*clamp_events);
    payoff = std::clamp(payoff, lo, hi);
  }
  return (payoff - lo) / (hi - lo);
}

// Softmax of a log-weight vector, stabilized by subtracting the maximum.
Mixture softmax(const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  Mixture mix;
  mix.probs.resize(log_weights.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    mix.probs[k] = std::exp(log_weights[k] - top);
    sum += mix.probs[k];
  }
  for (double& p : mix.probs) p /= sum;
  return mix;
}

}  // namespace

void MinimizerConfig::validate() const {
  if (!(payoff_hi > payoff_lo)) {
    throw Error(ErrorCode::InvalidParameters,
                "minimizer payoff range requires payoff_hi > payoff_lo");
  }
  if (horizon_hint == 0) {
    throw Error(ErrorCode::InvalidParameters,
                "minimizer horizon hint must be positive");
  }
  if (gamma >= 1.0) {
    throw Error(ErrorCode::InvalidParameters,
                "EXP3-IX exploration parameter must lie in [0, 1)");
  }
}

Mixture hedge_select(const std::vector<double>& weights) {
  if (weights.empty()) {
    throw Error(ErrorCode::EmptyInput, "hedge_select: empty weight vector");
  }
  const double top = *std::max_element(weights.begin(), weights.end());
  if (!(top > 0.0) || !std::isfinite(top)) {
    throw Error(ErrorCode::InvalidParameters,
                "hedge_select: weights must be finite and positive");
  }
  Mixture mix;
  mix.probs.resize(weights.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    mix.probs[k] = weights[k] / top;
    sum += mix.probs[k];
  }
  for (double& p : mix.probs) p /= sum;
  return mix;
}

std::vector<double> hedge_update(const std::vector<double>& weights,
                                 const std::vector<double>& payoffs,
                                 double eta, double payoff_lo,
                                 double payoff_hi,
                                 std::size_t* clamp_events) {
  if (weights.size() != payoffs.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "hedge_update: weights and payoffs differ in length");
  }
  if (!(eta > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "hedge_update: eta must be positive");
  }
  std::vector<double> log_w(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double s =
        rescale_clamped(payoffs[k], payoff_lo, payoff_hi, clamp_events);
    log_w[k] = std::log(weights[k]) + eta * s;
  }
  return softmax(log_w).probs;
}

double exp3ix_loss_estimate(double prob, double loss, double gamma) {
  const double denom = prob + gamma;
  if (denom <= 0.0) {
    throw Error(ErrorCode::ProbabilityUnderflow,
                "EXP3-IX: played-arm probability plus gamma is not positive");
  }
  return loss / denom;
}

Exp3IxState Exp3IxState::make(std::size_t num_arms,
                              const MinimizerConfig& config) {
  config.validate();
  if (num_arms == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "EXP3-IX requires at least one arm");
  }
  Exp3IxState state;
  state.log_weights.assign(num_arms, 0.0);
  state.config = config;
  return state;
}

Mixture Exp3IxState::mixture() const { return softmax(log_weights); }

double Exp3IxState::eta() const {
  const std::size_t k = log_weights.size();
  const double lk = std::log(static_cast<double>(std::max<std::size_t>(k, 2)));
  const std::size_t t = config.time_varying_rate ? round : config.horizon_hint;
  return std::sqrt(2.0 * lk /
                   (static_cast<double>(k) * static_cast<double>(t)));
}

double Exp3IxState::gamma() const {
  if (config.gamma >= 0.0) return config.gamma;
  return eta() / 2.0;
}

Mixture exp3ix_step(Exp3IxState& state, std::size_t played_arm,
                    double observed_payoff) {
  if (played_arm >= state.log_weights.size()) {
    throw Error(ErrorCode::InvalidParameters,
                "EXP3-IX: played arm index out of range");
  }
  const Mixture current = state.mixture();
  const double gain =
      rescale_clamped(observed_payoff, state.config.payoff_lo,
                      state.config.payoff_hi, &state.clamp_events);
  const double loss = 1.0 - gain;
  const double estimate =
      exp3ix_loss_estimate(current.probs[played_arm], loss, state.gamma());
  state.log_weights[played_arm] -= state.eta() * estimate;
  // Keep the log weights anchored so long runs cannot drift toward -inf.
  const double top =
      *std::max_element(state.log_weights.begin(), state.log_weights.end());
  for (double& lw : state.log_weights) lw -= top;
  ++state.round;
  return state.mixture();
}

std::vector<double> project_l1_ball(const BallProjectionInput& input) {
  if (!(input.radius > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "l1-ball projection requires a positive radius");
  }
  std::vector<double> clipped(input.point.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < input.point.size(); ++i) {
    clipped[i] = std::max(0.0, input.point[i]);
    sum += clipped[i];
  }
  if (sum <= input.radius) return clipped;

  // Sort-and-threshold projection onto {z >= 0, sum z = D}: find the largest
  // k with u_(k) > (sum of top k - D) / k, then shift by that threshold.
  std::vector<double> sorted = clipped;
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate =
        (running - input.radius) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      theta = candidate;
    } else {
      break;
    }
  }
  for (double& v : clipped) v = std::max(0.0, v - theta);
  return clipped;
}

LagrangeVector ogd_dual_step(const LagrangeVector& lambda,
                             const std::vector<double>& gradient,
                             double eta_t) {
  if (lambda.values.size() != gradient.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "ogd_dual_step: lambda and gradient differ in length");
  }
  if (!(eta_t > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "ogd_dual_step: eta must be positive");
  }
  BallProjectionInput input;
  input.radius = lambda.radius;
  input.point.resize(gradient.size());
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    input.point[i] = lambda.values[i] + eta_t * gradient[i];
  }
  LagrangeVector next;
  next.values = project_l1_ball(input);
  next.radius = lambda.radius;
  return next;
}

double LearningRateSchedule::eta(std::size_t t) const {
  switch (kind) {
    case MinimizerKind::Hedge:
      return fixed_eta;
    case MinimizerKind::Ogd:
      return radius / (gradient_bound * std::sqrt(static_cast<double>(t)));
    case MinimizerKind::Exp3Ix: {
      const double lk = std::log(static_cast<double>(num_actions));
      return std::sqrt(2.0 * lk / (static_cast<double>(num_actions) *
                                   static_cast<double>(t)));
    }
  }
  return fixed_eta;
}

double LearningRateSchedule::gamma(std::size_t t) const {
  return kind == MinimizerKind::Exp3Ix ? eta(t) / 2.0 : 0.0;
}

LearningRateSchedule default_learning_rate(MinimizerKind kind,
                                           std::size_t count, double radius,
                                           double width,
                                           std::size_t horizon) {
  if (count == 0 || horizon == 0 || !(radius > 0.0) || !(width > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "default_learning_rate: all arguments must be positive");
  }
  LearningRateSchedule sched;
  sched.kind = kind;
  sched.num_actions = count;
  sched.radius = radius;
  switch (kind) {
    case MinimizerKind::Hedge:
      sched.fixed_eta =
          std::sqrt(8.0 * std::log(static_cast<double>(count)) /
                    static_cast<double>(horizon));
      break;
    case MinimizerKind::Ogd:
      sched.gradient_bound =
          std::sqrt(static_cast<double>(count)) * std::max(1.0, width);
      break;
    case MinimizerKind::Exp3Ix:
      break;  // fully determined by num_actions and t
  }
  return sched;
}

HedgePrimal::HedgePrimal(std::size_t num_arms, const MinimizerConfig& config)
    : config_(config) {
  config_.validate();
  if (num_arms == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "Hedge requires at least one arm");
  }
  weights_.assign(num_arms, 1.0 / static_cast<double>(num_arms));
  schedule_ =
      default_learning_rate(MinimizerKind::Hedge,
                            std::max<std::size_t>(num_arms, 2), 1.0,
                            config_.width(), config_.horizon_hint);
}

Mixture HedgePrimal::select() const { return hedge_select(weights_); }

void HedgePrimal::receive(const std::vector<double>& payoffs) {
  weights_ = hedge_update(weights_, payoffs, schedule_.fixed_eta,
                          config_.payoff_lo, config_.payoff_hi,
                          &clamp_events_);
}

Exp3IxPrimal::Exp3IxPrimal(std::size_t num_arms,
                           const MinimizerConfig& config)
    : state_(Exp3IxState::make(num_arms, config)) {}

Mixture Exp3IxPrimal::select() const { return state_.mixture(); }

void Exp3IxPrimal::receive(std::size_t played_arm, double observed_payoff) {
  exp3ix_step(state_, played_arm, observed_payoff);
}

EuclideanDual::EuclideanDual(std::size_t num_resources, double radius,
                             std::size_t horizon_hint) {
  if (num_resources == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "dual minimizer requires at least one resource");
  }
  lambda_.values.assign(num_resources, 0.0);
  lambda_.radius = radius;
  // Dual gradients are (spend - B_t) scaled by the payoff range; the width
  // passed here is the per-coordinate gradient bound 2D used by Alg. 1/2.
  schedule_ = default_learning_rate(MinimizerKind::Ogd, num_resources, radius,
                                    2.0 * radius, horizon_hint);
}

void EuclideanDual::receive(const std::vector<double>& gradient) {
  lambda_ = ogd_dual_step(lambda_, gradient, schedule_.eta(round_));
  ++round_;
}

EntropicDual::EntropicDual(std::size_t num_resources, double radius,
                           std::size_t horizon_hint,
                           double gradient_linf_bound)
    : radius_(radius), payoff_bound_(radius * gradient_linf_bound) {
  if (num_resources == 0) {
    throw Error(ErrorCode::DegenerateDimensions,
                "dual minimizer requires at least one resource");
  }
  if (!(radius > 0.0) || !(gradient_linf_bound > 0.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "entropic dual requires positive radius and gradient bound");
  }
  weights_.assign(num_resources + 1,
                  1.0 / static_cast<double>(num_resources + 1));
  eta_ = std::sqrt(8.0 * std::log(static_cast<double>(num_resources + 1)) /
                   static_cast<double>(std::max<std::size_t>(horizon_hint, 1)));
}

LagrangeVector EntropicDual::select() const {
  const Mixture mix = hedge_select(weights_);
  LagrangeVector lambda;
  lambda.radius = radius_;
  lambda.values.resize(weights_.size() - 1);
  for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
    lambda.values[i] = radius_ * mix.probs[i];
  }
  return lambda;
}

void EntropicDual::receive(const std::vector<double>& gradient) {
  if (gradient.size() + 1 != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "entropic dual: gradient has wrong length");
  }
  // Linear payoff over the ball: r^D(lambda) = <lambda, g>.  In simplex
  // coordinates lambda = D * w, so coordinate i earns D * g_i and the slack
  // coordinate earns 0.
  std::vector<double> payoffs(weights_.size(), 0.0);
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    payoffs[i] = radius_ * gradient[i];
  }
  weights_ = hedge_update(weights_, payoffs, eta_, -payoff_bound_,
                          payoff_bound_, &clamp_events_);
}

std::unique_ptr<DualMinimizer> make_dual_minimizer(DualKind kind,
                                                   std::size_t num_resources,
                                                   double radius,
                                                   std::size_t horizon_hint) {
  if (kind == DualKind::Entropic) {
    return std::make_unique<EntropicDual>(num_resources, radius,
                                          horizon_hint);
  }
  return std::make_unique<EuclideanDual>(num_resources, radius, horizon_hint);
}

}  // namespace planpace
