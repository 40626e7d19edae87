#include "kawasaki/torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kawasaki {

TorusDomain::TorusDomain(int dimension, double side_length)
    : dimension_(dimension), side_length_(side_length) {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("torus dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw std::invalid_argument("torus side length must be positive and finite");
  }
}

double TorusDomain::volume() const noexcept { return std::pow(side_length_, dimension_); }

Point TorusDomain::wrap(const Point& p) const noexcept {
  Point out{0.0, 0.0, 0.0};
  for (int c = 0; c < dimension_; ++c) {
    double x = p[c] - side_length_ * std::floor(p[c] / side_length_);
    // floor() can leave x == L after rounding when p[c] is a tiny negative number
    if (x >= side_length_) x = 0.0;
    out[c] = x;
  }
  return out;
}

bool TorusDomain::contains(const Point& p) const noexcept {
  for (int c = 0; c < dimension_; ++c) {
    if (!(p[c] >= 0.0 && p[c] < side_length_)) return false;
  }
  for (int c = dimension_; c < 3; ++c) {
    if (p[c] != 0.0) return false;
  }
  return true;
}

Point min_image(const Point& p, const Point& q, const TorusDomain& domain) noexcept {
  const double L = domain.side_length();
  Point out{0.0, 0.0, 0.0};
  for (int c = 0; c < domain.dimension(); ++c) {
    double dx = p[c] - q[c];
    dx -= L * std::floor(dx / L + 0.5);
    if (dx >= 0.5 * L) dx -= L;
    if (dx < -0.5 * L) dx += L;
    out[c] = dx;
  }
  return out;
}

double euclidean_norm(const Point& v, int dimension) noexcept {
  if (dimension == 1) return std::abs(v[0]);
  double s = 0.0;
  for (int c = 0; c < dimension; ++c) s += v[c] * v[c];
  return std::sqrt(s);
}

double torus_distance(const Point& p, const Point& q, const TorusDomain& domain) noexcept {
  return euclidean_norm(min_image(p, q, domain), domain.dimension());
}

double ball_volume(int dimension, double r) noexcept {
  switch (dimension) {
    case 1: return 2.0 * r;
    case 2: return std::numbers::pi * r * r;
    default: return 4.0 / 3.0 * std::numbers::pi * r * r * r;
  }
}

}  // namespace kawasaki
