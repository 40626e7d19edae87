#include "kawasaki/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kawasaki {
namespace {

constexpr int kMaxIterations = 100;

// Newton on g(w) = w + log(w) - log_x, which is concave and increasing.
double w0_from_log(double log_x) {
  double w = log_x - std::log(log_x);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double g = w + std::log(w) - log_x;
    const double next = w - g / (1.0 + 1.0 / w);
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * w) return next;
    w = next;
  }
  return w;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("lambert_w0 needs a non-negative argument");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x > 1e300) return w0_from_log(std::log(x));

  double w = std::log1p(x);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    const double next = w - step;
    // Halley converges cubically; stop once the update is at rounding level.
    const bool settled = std::abs(next - w) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w);
    w = next;
    if (settled) break;
  }
  return w;
}

double lambert_w0_exp(double log_x) {
  if (std::isnan(log_x)) throw std::domain_error("lambert_w0_exp: NaN argument");
  if (log_x < 700.0) return lambert_w0(std::exp(log_x));
  return w0_from_log(log_x);
}

}  // namespace kawasaki
