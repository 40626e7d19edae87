#include "kawasaki/scheduler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kawasaki/lambert_w.hpp"

namespace kawasaki {
namespace {

void require_gap(double theta_high, double theta_low) {
  if (!(theta_low < theta_high)) throw std::invalid_argument("scale pair needs theta_low < theta_high");
}

Certificate certify(double theta_low, double theta_high, double t, double horizon, const ScaleParams& p,
                    int series_order, bool free_op) {
  if (!(t >= 0.0)) throw std::invalid_argument("certificate time must be non-negative");
  Certificate c;
  c.theta_low = theta_low;
  c.theta_high = theta_high;
  c.t = t;
  c.horizon = horizon;
  c.free_operator = free_op;
  c.ratio = t / horizon;
  c.valid = t < horizon;
  c.norm_bound = c.valid ? horizon / (horizon - t) : std::numeric_limits<double>::infinity();
  const double mass = free_op ? 0.0 : p.mean_phi;
  c.single_application_bound =
      2.0 * p.alpha * std::exp(mass * std::exp(theta_low)) / (std::numbers::e * (theta_high - theta_low));
  for (int n = 1; n <= series_order; ++n) c.per_factor_bounds.push_back(n / (std::numbers::e * horizon));
  return c;
}

}  // namespace

void ScaleParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(mean_phi > 0.0) || !std::isfinite(mean_phi)) throw std::invalid_argument("mean_phi must be positive");
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("C must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

double horizon_T(double theta_high, double theta_low, const ScaleParams& p) {
  require_gap(theta_high, theta_low);
  return (theta_high - theta_low) / (2.0 * p.alpha) * std::exp(-p.mean_phi * std::exp(theta_high));
}

double horizon_Tbar(double theta_high, double theta_low, const ScaleParams& p) {
  require_gap(theta_high, theta_low);
  return (theta_high - theta_low) / (2.0 * p.alpha);
}

double delta_theta(double theta, const ScaleParams& p) {
  return lambert_w0_exp(-theta - std::log(p.mean_phi));
}

double tau_theta(double theta, const ScaleParams& p) {
  const double d = delta_theta(theta, p);
  if (d == 0.0) return 0.0;
  return d / (2.0 * p.alpha) * std::exp(-1.0 / d);
}

double theta_of_t(double t, const ScaleParams& p) { return std::log(p.C) + p.alpha * t; }

std::string_view to_string(LadderStatus s) noexcept {
  switch (s) {
    case LadderStatus::Reached: return "reached";
    case LadderStatus::StepCap: return "step-cap";
    case LadderStatus::Stalled: return "stalled";
  }
  return "unknown";
}

ScaleLadder build_ladder(const ScaleParams& p, double t_target, std::uint64_t max_steps) {
  p.validate();
  if (!(t_target > 0.0) || !std::isfinite(t_target)) throw std::invalid_argument("t_target must be positive");
  if (max_steps == 0) throw std::invalid_argument("step cap must be positive");
  ScaleLadder ladder;
  ladder.t_target = t_target;
  double cum = 0.0;
  ladder.theta_star.push_back(theta_of_t(0.0, p));
  while (cum < t_target) {
    if (ladder.steps.size() >= max_steps) {
      ladder.status = LadderStatus::StepCap;
      return ladder;
    }
    const double th = ladder.theta_star.back();
    const double d = delta_theta(th, p);
    const double tau = tau_theta(th, p);
    const double s = (1.0 - p.epsilon) * tau;
    const double next = cum + s;
    if (!(next > cum)) {
      ladder.status = LadderStatus::Stalled;
      return ladder;
    }
    cum = next;
    ladder.deltas.push_back(d);
    ladder.taus.push_back(tau);
    ladder.steps.push_back(s);
    ladder.cumulative.push_back(cum);
    ladder.theta_star.push_back(theta_of_t(cum, p));
  }
  ladder.status = LadderStatus::Reached;
  return ladder;
}

Certificate norm_certificate(double theta_low, double theta_high, double t, const ScaleParams& p, int series_order) {
  return certify(theta_low, theta_high, t, horizon_T(theta_high, theta_low, p), p, series_order, false);
}

Certificate free_norm_certificate(double theta_low, double theta_high, double t, const ScaleParams& p,
                                  int series_order) {
  return certify(theta_low, theta_high, t, horizon_Tbar(theta_high, theta_low, p), p, series_order, true);
}

}  // namespace kawasaki
