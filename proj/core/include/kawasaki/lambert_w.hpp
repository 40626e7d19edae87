#pragma once

namespace kawasaki {

/// Principal branch W0 of the Lambert function for x >= 0, i.e. the w >= 0
/// with w e^w = x. Halley iteration started from log(1 + x); stops when the
/// relative residual drops below 1e-14 or after 100 iterations.
/// Throws std::domain_error for negative or NaN input.
[[nodiscard]] double lambert_w0(double x);

/// W0(exp(log_x)), usable when exp(log_x) overflows.
[[nodiscard]] double lambert_w0_exp(double log_x);

}  // namespace kawasaki
