#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "kawasaki/correlation_field.hpp"
#include "kawasaki/kernels.hpp"
#include "kawasaki/lattice.hpp"
#include "kawasaki/scheduler.hpp"

namespace kawasaki {

enum class Operator { Ldelta, Lbar };
[[nodiscard]] std::string_view to_string(Operator op) noexcept;

/// The correlation-evolution operators discretized on a lattice. Every
/// integral over R^d is a sum over lattice separations weighted by h^d.
class Hierarchy {
 public:
  Hierarchy(const Lattice& lattice, const KernelSpec& kernels);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] const LatticeKernels& tables() const noexcept { return tab_; }
  /// Lattice sum of a (times h^d); the per-particle attempt rate used by every bound.
  [[nodiscard]] double alpha() const noexcept { return tab_.alpha; }
  [[nodiscard]] double mean_phi() const noexcept { return tab_.mean_phi; }
  /// ScaleParams built from the lattice constants.
  [[nodiscard]] ScaleParams scale_params(double C, double epsilon = 0.1) const;

  /// (Q_y k)(eta): sum over m <= qy_order of (1/m!) sum_{z_1..z_m} k(eta u z) prod t_y(z_i) h^{md}.
  [[nodiscard]] double apply_Qy(const CorrelationField& k, Site y, std::span<const Site> eta) const;
  /// Gain minus loss; the derivative of k0 is 0.
  [[nodiscard]] CorrelationField apply_Ldelta(const CorrelationField& k) const;
  /// Gain term with phi set to 0: sum_{y in eta} sum_x h^d a(x - y) k(eta \ y u x).
  [[nodiscard]] CorrelationField apply_Lbar(const CorrelationField& k) const;
  [[nodiscard]] CorrelationField apply(Operator op, const CorrelationField& k) const;

  /// Bound on the Q_y terms dropped beyond qy_order at scale theta:
  /// ||k||_theta e^{theta n_max} sum_{m > M_Q} x^m / m!, x = e^theta h^d sum |t|.
  [[nodiscard]] double qy_tail_bound(const CorrelationField& k, double theta) const;

  /// Pointwise (L k)(eta) for one tuple; apply_Ldelta evaluates this at every stored slot.
  [[nodiscard]] double ldelta_at(const CorrelationField& k, std::span<const Site> eta) const;
  [[nodiscard]] double lbar_at(const CorrelationField& k, std::span<const Site> eta) const;

 private:
  void check_field(const CorrelationField& k) const;

  Lattice lattice_;
  LatticeKernels tab_;
};

struct ScaleNormReport {
  double theta = 0.0;
  double norm_value = 0.0;
};

/// max over n = 1..n_max and stored tuples of |k^(n)| e^{-theta n}.
[[nodiscard]] ScaleNormReport scale_norm(const CorrelationField& k, double theta);

/// C^n e^{t alpha n}
[[nodiscard]] double free_solution(double C, double alpha, double t, int n);

/// Thrown when a series step is requested at or beyond its horizon.
class HorizonExceeded : public std::runtime_error {
 public:
  explicit HorizonExceeded(Certificate certificate);
  [[nodiscard]] const Certificate& certificate() const noexcept { return certificate_; }

 private:
  Certificate certificate_;
};

/// Thrown by the time integrators when a value leaves the overflow guard.
class OverflowGuardTripped : public std::runtime_error {
 public:
  OverflowGuardTripped(double time, double value);
  [[nodiscard]] double time() const noexcept { return time_; }
  [[nodiscard]] double value() const noexcept { return value_; }

 private:
  double time_;
  double value_;
};

struct ScalePair {
  double theta_low = 0.0;
  double theta_high = 1.0;
};

struct TaylorResult {
  CorrelationField field;
  /// max |entry| of the last retained term t^N/N! L^N k
  double last_term = 0.0;
  /// scale_norm of the last retained term at theta_high
  double last_term_norm = 0.0;
  Certificate certificate;
};

/// sum_{n=0}^{order} t^n / n! L^n k between the scales of `scales`. Throws
/// HorizonExceeded unless t is below T(theta_high, theta_low) for L^Delta, or
/// below the free horizon for Lbar, computed from the lattice constants.
[[nodiscard]] TaylorResult taylor_semigroup_step(const Hierarchy& h, const CorrelationField& k, double t, int order,
                                                 Operator op, ScalePair scales);

/// One classical fourth-order Runge-Kutta step.
[[nodiscard]] CorrelationField rk4_step(const Hierarchy& h, const CorrelationField& k, double dt, Operator op);

using FieldObserver = std::function<void(double t, const CorrelationField& k)>;

/// RK4 from 0 to t_end with step dt (the last step is shortened to land on
/// t_end). The observer sees t = 0 and every step. Throws
/// OverflowGuardTripped once any |k| exceeds `overflow_guard` or turns non-finite.
CorrelationField integrate(const Hierarchy& h, const CorrelationField& k, double t_end, double dt, Operator op,
                           double overflow_guard = 1e12, const FieldObserver& observer = {});

}  // namespace kawasaki
