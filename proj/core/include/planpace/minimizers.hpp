// Black-box regret minimizers used as primal and dual subroutines:
// exponentiated weights (Hedge) for full feedback over arms, EXP3-IX for
// bandit feedback over arms, and projected online gradient ascent over the
// truncated l1 ball for the full-feedback dual.  An entropic dual variant
// (Hedge over the scaled (m+1)-simplex with a slack coordinate) is available
// behind a switch.
//
// All minimizers internally rescale payoffs from their configured range
// [payoff_lo, payoff_hi] to [0,1].  Out-of-range payoffs are clamped and the
// clamp events counted; strict-mode runs treat any clamp as a failure.

#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "planpace/core.hpp"

namespace planpace {

// Shared configuration for a regret minimizer: the payoff range [a,b] it is
// initialized with, a horizon hint for fixed-rate schedules, and (EXP3-IX
// only) an exploration parameter override.
struct MinimizerConfig {
  double payoff_lo = 0.0;
  double payoff_hi = 1.0;
  std::size_t horizon_hint = 1;
  bool time_varying_rate = true;
  double gamma = -1.0;  // EXP3-IX only; negative means "use the schedule"

  double width() const { return payoff_hi - payoff_lo; }
  void validate() const;
};

struct BallProjectionInput {
  std::vector<double> point;
  double radius = 1.0;  // D > 0
};

// ---------------------------------------------------------------------------
// Stateless building blocks.
// ---------------------------------------------------------------------------

// Normalizes a positive weight vector to a probability vector.  Guards
// against underflow by dividing through by the maximum weight first.
Mixture hedge_select(const std::vector<double>& weights);

// Exponentiated-weights update: w'_k proportional to w_k * exp(eta * s_k)
// where s_k is payoff_k affinely rescaled from [payoff_lo, payoff_hi] to
// [0,1].  Arithmetic is done in the log domain and the result is returned
// normalized, so repeated application cannot overflow.  Payoffs outside the
// range are clamped; each clamped entry increments *clamp_events if given.
std::vector<double> hedge_update(const std::vector<double>& weights,
                                 const std::vector<double>& payoffs,
                                 double eta, double payoff_lo = 0.0,
                                 double payoff_hi = 1.0,
                                 std::size_t* clamp_events = nullptr);

// The implicit-exploration loss estimate: loss / (prob + gamma) for the
// played arm, 0 elsewhere.  Exposed for direct testing.
double exp3ix_loss_estimate(double prob, double loss, double gamma);

// EXP3-IX over K arms with bandit feedback.  The mixture that generated the
// played arm must be the state's current mixture; step() applies the IX
// importance-weighted loss estimate via an exponentiated-weights update and
// advances the round counter (which drives the time-varying schedule
// eta_t = sqrt(2 ln K / (K t)), gamma_t = eta_t / 2).
struct Exp3IxState {
  std::vector<double> log_weights;
  std::size_t round = 1;  // t, 1-based; drives the schedule
  MinimizerConfig config;
  std::size_t clamp_events = 0;

  static Exp3IxState make(std::size_t num_arms, const MinimizerConfig& config);
  Mixture mixture() const;
  double eta() const;
  double gamma() const;
};

// Applies one bandit-feedback step and returns the next mixture.  Throws
// ProbabilityUnderflow if prob + gamma <= 0 (impossible with gamma > 0).
Mixture exp3ix_step(Exp3IxState& state, std::size_t played_arm,
                    double observed_payoff);

// Euclidean projection onto {z >= 0 : ||z||_1 <= D}: clip negatives to zero;
// if the clipped sum is within the ball return it, otherwise project onto the
// scaled simplex {z >= 0, sum z = D} by the sort-and-threshold rule.
std::vector<double> project_l1_ball(const BallProjectionInput& input);

// Projected gradient ascent step for the dual: returns the projection of
// lambda + eta_t * gradient onto the ball of lambda's radius.
LagrangeVector ogd_dual_step(const LagrangeVector& lambda,
                             const std::vector<double>& gradient,
                             double eta_t);

// ---------------------------------------------------------------------------
// Learning-rate schedules.
// ---------------------------------------------------------------------------

enum class MinimizerKind { Hedge, Ogd, Exp3Ix };

// eta(t) for t >= 1.  Hedge uses a fixed rate sqrt(8 ln K / T) tuned to the
// horizon; OGD uses eta_t = D / (G sqrt(t)) with gradient bound
// G = sqrt(m) * max(1, W); EXP3-IX uses eta_t = sqrt(2 ln K / (K t)) with
// gamma_t = eta_t / 2.
struct LearningRateSchedule {
  MinimizerKind kind = MinimizerKind::Hedge;
  double fixed_eta = 0.0;       // Hedge
  double radius = 0.0;          // OGD: ball radius D
  double gradient_bound = 0.0;  // OGD: G
  std::size_t num_actions = 0;  // Hedge / EXP3-IX: K

  double eta(std::size_t t) const;
  double gamma(std::size_t t) const;  // EXP3-IX only; 0 for other kinds
};

// `count` is K for hedge/exp3ix and m for ogd.  `radius` (D) and the payoff
// range width W only matter for ogd.  All arguments must be positive.
LearningRateSchedule default_learning_rate(MinimizerKind kind,
                                           std::size_t count, double radius,
                                           double width, std::size_t horizon);

// ---------------------------------------------------------------------------
// Stateful wrappers implementing the select/receive protocol the algorithms
// consume.  State is single-owner mutable; nothing is shared during a run.
// ---------------------------------------------------------------------------

// Full-feedback primal minimizer over K arms (Hedge).
class HedgePrimal {
 public:
  HedgePrimal(std::size_t num_arms, const MinimizerConfig& config);

  Mixture select() const;
  void receive(const std::vector<double>& payoffs);

  std::size_t clamp_events() const { return clamp_events_; }
  double eta() const { return schedule_.fixed_eta; }

 private:
  std::vector<double> weights_;
  MinimizerConfig config_;
  LearningRateSchedule schedule_;
  std::size_t clamp_events_ = 0;
};

// Bandit-feedback primal minimizer over K arms (EXP3-IX).
class Exp3IxPrimal {
 public:
  Exp3IxPrimal(std::size_t num_arms, const MinimizerConfig& config);

  Mixture select() const;
  void receive(std::size_t played_arm, double observed_payoff);

  std::size_t clamp_events() const { return state_.clamp_events; }
  const Exp3IxState& state() const { return state_; }

 private:
  Exp3IxState state_;
};

// Full-feedback dual minimizer over the truncated l1 ball
// L = {lambda >= 0 : ||lambda||_1 <= D}.  receive() takes the gradient of the
// linear dual payoff r^D(lambda) = sum_i lambda[i] * gradient[i], i.e.
// (spend - B_t) componentwise.
class DualMinimizer {
 public:
  virtual ~DualMinimizer() = default;

  virtual LagrangeVector select() const = 0;
  virtual void receive(const std::vector<double>& gradient) = 0;
  virtual std::size_t clamp_events() const = 0;
  virtual const char* name() const = 0;
};

enum class DualKind { Euclidean, Entropic };

// Euclidean OMD (projected online gradient ascent), the default dual.
class EuclideanDual final : public DualMinimizer {
 public:
  EuclideanDual(std::size_t num_resources, double radius,
                std::size_t horizon_hint);

  LagrangeVector select() const override { return lambda_; }
  void receive(const std::vector<double>& gradient) override;
  std::size_t clamp_events() const override { return 0; }
  const char* name() const override { return "euclidean"; }

 private:
  LagrangeVector lambda_;
  LearningRateSchedule schedule_;
  std::size_t round_ = 1;
};

// Entropic dual: Hedge over the (m+1)-simplex scaled by D; the extra
// coordinate is slack, so the iterate D * w_{0..m-1} ranges over the whole
// ball.  The linear dual payoff becomes the coordinate payoff vector
// (D * gradient, 0), fed to Hedge on the range [-D * g_max, D * g_max].
class EntropicDual final : public DualMinimizer {
 public:
  EntropicDual(std::size_t num_resources, double radius,
               std::size_t horizon_hint, double gradient_linf_bound = 1.0);

  LagrangeVector select() const override;
  void receive(const std::vector<double>& gradient) override;
  std::size_t clamp_events() const override { return clamp_events_; }
  const char* name() const override { return "entropic"; }

 private:
  std::vector<double> weights_;  // over m + 1 coordinates
  double radius_;
  double payoff_bound_;  // D * gradient_linf_bound
  double eta_;
  std::size_t clamp_events_ = 0;
};

std::unique_ptr<DualMinimizer> make_dual_minimizer(DualKind kind,
                                                   std::size_t num_resources,
                                                   double radius,
                                                   std::size_t horizon_hint);

}  // namespace planpace
