#include "kawasaki/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace kawasaki {
namespace {

constexpr double kSqrtHalfPi = 1.2533141373155002512;  // sqrt(pi/2)

// Surface measure of the unit sphere in R^d.
double sphere_area(int d) noexcept {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 4.0 * std::numbers::pi;
  }
}

// Untruncated tail mass beyond u (in units of the scale), relative to the full integral.
double gaussian_tail(int d, double u) {
  const double g = std::exp(-0.5 * u * u);
  switch (d) {
    case 1: return std::erfc(u / std::numbers::sqrt2);
    case 2: return g;
    default: return std::erfc(u / std::numbers::sqrt2) + u * g / kSqrtHalfPi;
  }
}

double exponential_tail(int d, double u) {
  const double e = std::exp(-u);
  switch (d) {
    case 1: return e;
    case 2: return e * (1.0 + u);
    default: return 0.5 * e * (u * u + 2.0 * u + 2.0);
  }
}

// Smallest u with tail(u) <= tol; tails are strictly decreasing in u.
template <typename Tail>
double solve_cutoff(Tail tail, double tol) {
  double lo = 0.0;
  double hi = 1.0;
  while (tail(hi) > tol) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > tol ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "top-hat") return KernelFamily::TopHat;
  if (name == "truncated-gaussian") return KernelFamily::TruncatedGaussian;
  if (name == "truncated-exponential") return KernelFamily::TruncatedExponential;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::TopHat: return "top-hat";
    case KernelFamily::TruncatedGaussian: return "truncated-gaussian";
    case KernelFamily::TruncatedExponential: return "truncated-exponential";
  }
  return "?";
}

RadialProfile::RadialProfile(KernelFamily family, double amplitude, double scale, int dimension)
    : family_(family), amplitude_(amplitude), scale_(scale), dimension_(dimension) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("kernel dimension must be 1, 2 or 3");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("kernel amplitude must be finite and nonnegative");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("kernel range parameter must be positive");

  switch (family) {
    case KernelFamily::TopHat:
      cutoff_ = scale;
      tail_fraction_ = 0.0;
      break;
    case KernelFamily::TruncatedGaussian: {
      const double u = solve_cutoff([d = dimension](double x) { return gaussian_tail(d, x); }, kKernelTailTolerance);
      cutoff_ = u * scale;
      tail_fraction_ = gaussian_tail(dimension, u);
      break;
    }
    case KernelFamily::TruncatedExponential: {
      const double u = solve_cutoff([d = dimension](double x) { return exponential_tail(d, x); }, kKernelTailTolerance);
      cutoff_ = u * scale;
      tail_fraction_ = exponential_tail(dimension, u);
      break;
    }
  }
  integral_ = mass_within(cutoff_);
}

double RadialProfile::operator()(double r) const noexcept {
  if (r > cutoff_ || amplitude_ == 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::TopHat: return amplitude_;
    case KernelFamily::TruncatedGaussian: {
      const double u = r / scale_;
      return amplitude_ * std::exp(-0.5 * u * u);
    }
    case KernelFamily::TruncatedExponential: return amplitude_ * std::exp(-r / scale_);
  }
  return 0.0;
}

double RadialProfile::mass_within(double r) const noexcept {
  r = std::min(r, cutoff_);
  if (r <= 0.0 || amplitude_ == 0.0) return 0.0;
  const double A = amplitude_;
  const double s = scale_;
  switch (family_) {
    case KernelFamily::TopHat: return A * ball_volume(dimension_, r);
    case KernelFamily::TruncatedGaussian: {
      const double u = r / s;
      const double g = std::exp(-0.5 * u * u);
      switch (dimension_) {
        case 1: return A * 2.0 * s * kSqrtHalfPi * std::erf(u / std::numbers::sqrt2);
        case 2: return A * 2.0 * std::numbers::pi * s * s * -std::expm1(-0.5 * u * u);
        default:
          return A * 4.0 * std::numbers::pi * s * s * s * (kSqrtHalfPi * std::erf(u / std::numbers::sqrt2) - u * g);
      }
    }
    case KernelFamily::TruncatedExponential: {
      const double u = r / s;
      const double e = std::exp(-u);
      switch (dimension_) {
        case 1: return A * 2.0 * s * -std::expm1(-u);
        case 2: return A * 2.0 * std::numbers::pi * s * s * (-std::expm1(-u) - u * e);
        default: return A * 4.0 * std::numbers::pi * s * s * s * (2.0 - e * (u * u + 2.0 * u + 2.0));
      }
    }
  }
  return 0.0;
}

double RadialProfile::radial_density(double r) const noexcept {
  if (r < 0.0 || r > cutoff_ || integral_ == 0.0) return 0.0;
  return sphere_area(dimension_) * std::pow(r, dimension_ - 1) * (*this)(r) / integral_;
}

double RadialProfile::sample_radius(double u) const {
  if (integral_ == 0.0) throw std::logic_error("cannot sample from a zero kernel");
  u = std::clamp(u, 0.0, 1.0);
  if (family_ == KernelFamily::TopHat) return cutoff_ * std::pow(u, 1.0 / dimension_);
  if (family_ == KernelFamily::TruncatedGaussian && dimension_ == 2) {
    const double q = -std::expm1(-0.5 * (cutoff_ / scale_) * (cutoff_ / scale_));
    return std::min(cutoff_, scale_ * std::sqrt(-2.0 * std::log1p(-u * q)));
  }

  // Safeguarded Newton on the closed-form CDF.
  const double target = u * integral_;
  double lo = 0.0;
  double hi = cutoff_;
  double r = 0.5 * cutoff_;
  for (int it = 0; it < 200; ++it) {
    const double g = mass_within(r) - target;
    if (g > 0.0) hi = r; else lo = r;
    const double slope = radial_density(r) * integral_;
    double next = (slope > 0.0) ? r - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-15 * cutoff_ || hi - lo <= 1e-15 * cutoff_) return next;
    r = next;
  }
  return r;
}

KernelSpec::KernelSpec(RadialProfile jump, RadialProfile potential, bool exclude_self)
    : a(jump),
      phi(potential),
      alpha(jump.integral()),
      mean_phi(potential.integral()),
      sup_phi(potential(0.0)),
      cutoff_radius(std::max(jump.cutoff(), potential.cutoff())),
      exclude_self_term(exclude_self) {
  if (jump.dimension() != potential.dimension()) {
    throw std::invalid_argument("jump kernel and potential must share the spatial dimension");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("jump kernel must have positive integral");
}

double repulsion_deficit_integral(const RadialProfile& phi) {
  if (phi.is_zero()) return 0.0;
  const int d = phi.dimension();
  auto integrand = [&](double r) { return std::pow(r, d - 1) * -std::expm1(-phi(r)); };
  const double radial = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, phi.cutoff(), 15, 1e-14);
  return sphere_area(d) * radial;
}

}  // namespace kawasaki
