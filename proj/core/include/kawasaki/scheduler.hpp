#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kawasaki {

/// Constants behind every horizon: the attempt rate alpha, the potential mass
/// mean_phi, the initial bound C (k_0(eta) <= C^|eta|) and the ladder damping
/// epsilon.
struct ScaleParams {
  double alpha = 1.0;
  double mean_phi = 1.0;
  double C = 1.0;
  double epsilon = 0.1;

  /// Throws std::invalid_argument unless alpha, mean_phi, C > 0 and 0 < epsilon < 1.
  void validate() const;
};

/// T(theta', theta) = (theta' - theta) / (2 alpha) * exp(-mean_phi e^theta').
[[nodiscard]] double horizon_T(double theta_high, double theta_low, const ScaleParams& p);
/// Free-jump horizon (theta' - theta) / (2 alpha).
[[nodiscard]] double horizon_Tbar(double theta_high, double theta_low, const ScaleParams& p);
/// delta(theta) = W0(e^-theta / mean_phi): the gap maximizing horizon_T(theta + gap, theta).
[[nodiscard]] double delta_theta(double theta, const ScaleParams& p);
/// tau(theta) = delta / (2 alpha) * exp(-1 / delta) = max over theta' of horizon_T(theta', theta).
[[nodiscard]] double tau_theta(double theta, const ScaleParams& p);
/// log C + alpha t
[[nodiscard]] double theta_of_t(double t, const ScaleParams& p);

enum class LadderStatus { Reached, StepCap, Stalled };
[[nodiscard]] std::string_view to_string(LadderStatus s) noexcept;

struct ScaleLadder {
  std::vector<double> theta_star;  // theta*_0, theta*_1, ..., one longer than steps
  std::vector<double> deltas;      // delta(theta*_{n-1})
  std::vector<double> taus;        // tau(theta*_{n-1})
  std::vector<double> steps;       // s_n = (1 - epsilon) tau(theta*_{n-1})
  std::vector<double> cumulative;  // s_1 + ... + s_n
  LadderStatus status = LadderStatus::Reached;
  double t_target = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return steps.size(); }
  [[nodiscard]] bool reached() const noexcept { return status == LadderStatus::Reached; }
  [[nodiscard]] double reached_time() const noexcept { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// Appends steps until the cumulative time reaches t_target. The status turns
/// to StepCap after max_steps steps and to Stalled once a step no longer
/// changes the cumulative time in double precision; the ladder built so far is
/// returned either way.
[[nodiscard]] ScaleLadder build_ladder(const ScaleParams& p, double t_target, std::uint64_t max_steps = 1'000'000);

/// Record of the arithmetic that licenses one series step of length t between
/// two scales.
struct Certificate {
  double theta_low = 0.0;
  double theta_high = 0.0;
  double t = 0.0;
  double horizon = 0.0;      // T(theta_high, theta_low), or the free horizon
  double ratio = 0.0;        // t / horizon
  double norm_bound = 0.0;   // horizon / (horizon - t); +inf when invalid
  /// 2 alpha exp(mean_phi e^theta_low) / (e (theta_high - theta_low))
  double single_application_bound = 0.0;
  /// n / (e horizon) for n = 1 .. series order
  std::vector<double> per_factor_bounds;
  bool free_operator = false;
  bool valid = false;
};

[[nodiscard]] Certificate norm_certificate(double theta_low, double theta_high, double t, const ScaleParams& p,
                                           int series_order = 0);
/// Same record for the free operator, whose horizon is horizon_Tbar.
[[nodiscard]] Certificate free_norm_certificate(double theta_low, double theta_high, double t, const ScaleParams& p,
                                                int series_order = 0);

}  // namespace kawasaki
