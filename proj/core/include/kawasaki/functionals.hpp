#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kawasaki/configuration.hpp"
#include "kawasaki/kernels.hpp"
#include "kawasaki/torus.hpp"

namespace kawasaki {

/// Rate c(x, y, gamma) = a(x - y) exp(-sum_{z in gamma} phi(y - z)) for the
/// particle with identifier `x` to jump to `y`. The sum includes z = x unless
/// kernels.exclude_self_term is set. Throws std::invalid_argument if x is not in gamma.
[[nodiscard]] double jump_rate_c(ParticleId x, const Point& y, const Configuration& gamma,
                                 const KernelSpec& kernels, const TorusDomain& domain);

/// Sum of phi(y - z) over the exponent range of jump_rate_c.
[[nodiscard]] double interaction_exponent(std::size_t mover, const Point& y, const Configuration& gamma,
                                          const KernelSpec& kernels, const TorusDomain& domain);

/// Pair energy: sum over unordered pairs of phi(u - v).
[[nodiscard]] double total_energy(const Configuration& gamma, const KernelSpec& kernels, const TorusDomain& domain);

/// e(f; eta) = product of f(x) over x in eta; 1 for the empty configuration.
template <typename F>
[[nodiscard]] double e_product(F&& f, std::span<const Point> eta) {
  double prod = 1.0;
  for (const auto& x : eta) prod *= f(x);
  return prod;
}

/// Axis-aligned box [lo, hi] restricted to the first `dimension` axes.
struct BoxRegion {
  int dimension = 1;
  Point lo{0.0, 0.0, 0.0};
  Point hi{0.0, 0.0, 0.0};

  [[nodiscard]] bool contains(const Point& p) const noexcept;
  [[nodiscard]] bool covers(const BoxRegion& other) const noexcept;
  [[nodiscard]] double volume() const noexcept;
};

/// Function on finite configurations with bounded support: G(eta) vanishes if
/// any point of eta leaves the support box or if |eta| exceeds max_order().
/// The per-order evaluators must be symmetric in their arguments.
class FiniteSupportFunction {
 public:
  using Evaluator = std::function<double(std::span<const Point>)>;

  FiniteSupportFunction(BoxRegion support, double value_at_empty, std::vector<Evaluator> by_order);

  [[nodiscard]] int max_order() const noexcept { return static_cast<int>(by_order_.size()); }
  [[nodiscard]] const BoxRegion& support() const noexcept { return support_; }
  [[nodiscard]] double value_at_empty() const noexcept { return empty_; }
  [[nodiscard]] double operator()(std::span<const Point> eta) const;

 private:
  BoxRegion support_;
  double empty_;
  std::vector<Evaluator> by_order_;  // by_order_[n - 1] evaluates G^(n)
};

/// (KG)(gamma): sum of G over nonempty subsets of gamma.
[[nodiscard]] double k_transform(const FiniteSupportFunction& G, const Configuration& gamma);

/// Midpoint grid with `points_per_axis` nodes along each axis of `box`.
struct QuadratureGrid {
  BoxRegion box;
  int points_per_axis = 16;
};

/// G(empty) + sum_{n=1}^{order_cap} (1/n!) * integral of G^(n) over (R^d)^n,
/// each integral by the tensor midpoint rule on `grid`.
/// Throws std::invalid_argument if the grid box does not cover the support of G.
[[nodiscard]] double lp_integral_truncated(const FiniteSupportFunction& G, int order_cap, const QuadratureGrid& grid);

}  // namespace kawasaki
