#pragma once

#include <string>
#include <string_view>

#include "kawasaki/torus.hpp"

namespace kawasaki {

enum class KernelFamily { TopHat, TruncatedGaussian, TruncatedExponential };

[[nodiscard]] KernelFamily parse_kernel_family(std::string_view name);
[[nodiscard]] std::string_view to_string(KernelFamily family) noexcept;

/// Relative tail mass discarded when a Gaussian or exponential profile is cut off.
inline constexpr double kKernelTailTolerance = 1e-12;

/// Radial, compactly supported profile f(|x|) on R^d.
///
/// `scale` is the top-hat radius, the Gaussian standard deviation or the
/// exponential decay length. Gaussian and exponential profiles are truncated
/// at the smallest radius whose discarded tail is below kKernelTailTolerance
/// of the untruncated integral; all derived integrals refer to the truncated
/// profile.
class RadialProfile {
 public:
  RadialProfile(KernelFamily family, double amplitude, double scale, int dimension);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] double cutoff() const noexcept { return cutoff_; }
  /// Fraction of the untruncated integral lying beyond the cutoff.
  [[nodiscard]] double tail_fraction() const noexcept { return tail_fraction_; }
  [[nodiscard]] bool is_zero() const noexcept { return amplitude_ == 0.0; }

  [[nodiscard]] double operator()(double r) const noexcept;
  [[nodiscard]] double at(const Point& v) const noexcept { return (*this)(euclidean_norm(v, dimension_)); }

  /// Closed-form integral of the profile over the ball of radius min(r, cutoff).
  [[nodiscard]] double mass_within(double r) const noexcept;
  [[nodiscard]] double integral() const noexcept { return integral_; }
  /// Radial density of |X| for X with density f / integral(), at radius r.
  [[nodiscard]] double radial_density(double r) const noexcept;
  /// Inverse CDF of |X|; u in [0, 1).
  [[nodiscard]] double sample_radius(double u) const;

 private:
  KernelFamily family_;
  double amplitude_;
  double scale_;
  int dimension_;
  double cutoff_ = 0.0;
  double tail_fraction_ = 0.0;
  double integral_ = 0.0;
};

/// Jump kernel a and repulsion potential phi with their integrability constants.
struct KernelSpec {
  KernelSpec(RadialProfile jump, RadialProfile potential, bool exclude_self_term = false);

  RadialProfile a;
  RadialProfile phi;
  double alpha;          // integral of a
  double mean_phi;       // integral of phi
  double sup_phi;        // phi(0): every family peaks at the origin
  double cutoff_radius;  // max(support of a, support of phi)
  /// Drop z = x (the jumping particle) from the exponent of the rate.
  bool exclude_self_term;

  [[nodiscard]] double jump(const Point& displacement) const noexcept { return a.at(displacement); }
  [[nodiscard]] double potential(const Point& displacement) const noexcept { return phi.at(displacement); }
  [[nodiscard]] int dimension() const noexcept { return a.dimension(); }
};

/// Quadrature of the integral of 1 - exp(-phi) over R^d; never exceeds mean_phi.
[[nodiscard]] double repulsion_deficit_integral(const RadialProfile& phi);

}  // namespace kawasaki
