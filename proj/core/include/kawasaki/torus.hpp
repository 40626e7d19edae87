#pragma once

#include <array>
#include <cstddef>

namespace kawasaki {

/// Position or displacement. Components beyond the domain dimension are zero.
using Point = std::array<double, 3>;

/// Periodic box [0, L)^d. Every spatial difference in the model is taken
/// through min_image(), so kernel arguments always live in [-L/2, L/2)^d.
class TorusDomain {
 public:
  TorusDomain(int dimension, double side_length);

  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] double side_length() const noexcept { return side_length_; }
  [[nodiscard]] double volume() const noexcept;

  /// Maps an arbitrary point into [0, L)^d.
  [[nodiscard]] Point wrap(const Point& p) const noexcept;
  [[nodiscard]] bool contains(const Point& p) const noexcept;

 private:
  int dimension_;
  double side_length_;
};

/// Representative of p - q with every component in [-L/2, L/2).
[[nodiscard]] Point min_image(const Point& p, const Point& q, const TorusDomain& domain) noexcept;

[[nodiscard]] double euclidean_norm(const Point& v, int dimension) noexcept;

/// |min_image(p, q)|
[[nodiscard]] double torus_distance(const Point& p, const Point& q, const TorusDomain& domain) noexcept;

/// Volume of the d-ball of radius r.
[[nodiscard]] double ball_volume(int dimension, double r) noexcept;

}  // namespace kawasaki
