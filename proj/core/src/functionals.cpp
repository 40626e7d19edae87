#include "kawasaki/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kawasaki {

double interaction_exponent(std::size_t mover, const Point& y, const Configuration& gamma,
                            const KernelSpec& kernels, const TorusDomain& domain) {
  double s = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (i == mover && kernels.exclude_self_term) continue;
    s += kernels.potential(min_image(y, gamma[i].position, domain));
  }
  return s;
}

double jump_rate_c(ParticleId x, const Point& y, const Configuration& gamma, const KernelSpec& kernels,
                   const TorusDomain& domain) {
  const auto idx = gamma.index_of(x);
  if (!idx) throw std::invalid_argument("jump_rate_c: particle " + std::to_string(x) + " is not in the configuration");
  const double a = kernels.jump(min_image(gamma[*idx].position, y, domain));
  if (a == 0.0) return 0.0;
  return a * std::exp(-interaction_exponent(*idx, y, gamma, kernels, domain));
}

double total_energy(const Configuration& gamma, const KernelSpec& kernels, const TorusDomain& domain) {
  double e = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (std::size_t j = i + 1; j < gamma.size(); ++j) {
      e += kernels.potential(min_image(gamma[i].position, gamma[j].position, domain));
    }
  }
  return e;
}

bool BoxRegion::contains(const Point& p) const noexcept {
  for (int c = 0; c < dimension; ++c) {
    if (p[c] < lo[c] || p[c] > hi[c]) return false;
  }
  return true;
}

bool BoxRegion::covers(const BoxRegion& other) const noexcept {
  if (other.dimension != dimension) return false;
  for (int c = 0; c < dimension; ++c) {
    if (other.lo[c] < lo[c] || other.hi[c] > hi[c]) return false;
  }
  return true;
}

double BoxRegion::volume() const noexcept {
  double v = 1.0;
  for (int c = 0; c < dimension; ++c) v *= std::max(0.0, hi[c] - lo[c]);
  return v;
}

FiniteSupportFunction::FiniteSupportFunction(BoxRegion support, double value_at_empty, std::vector<Evaluator> by_order)
    : support_(support), empty_(value_at_empty), by_order_(std::move(by_order)) {
  for (const auto& f : by_order_) {
    if (!f) throw std::invalid_argument("FiniteSupportFunction: empty evaluator");
  }
}

double FiniteSupportFunction::operator()(std::span<const Point> eta) const {
  if (eta.empty()) return empty_;
  if (eta.size() > by_order_.size()) return 0.0;
  for (const auto& p : eta) {
    if (!support_.contains(p)) return 0.0;
  }
  return by_order_[eta.size() - 1](eta);
}

double k_transform(const FiniteSupportFunction& G, const Configuration& gamma) {
  std::vector<Point> inside;
  for (const auto& p : gamma.particles()) {
    if (G.support().contains(p.position)) inside.push_back(p.position);
  }
  const int m = static_cast<int>(inside.size());
  const int n_max = std::min(G.max_order(), m);

  double total = 0.0;
  std::vector<int> pick;
  std::vector<Point> eta;
  for (int n = 1; n <= n_max; ++n) {
    pick.resize(n);
    for (int i = 0; i < n; ++i) pick[i] = i;
    eta.resize(n);
    while (true) {
      for (int i = 0; i < n; ++i) eta[i] = inside[pick[i]];
      total += G(eta);
      int i = n - 1;
      while (i >= 0 && pick[i] == m - n + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return total;
}

double lp_integral_truncated(const FiniteSupportFunction& G, int order_cap, const QuadratureGrid& grid) {
  if (order_cap < 0) throw std::invalid_argument("lp_integral_truncated: negative order cap");
  if (grid.points_per_axis < 1) throw std::invalid_argument("lp_integral_truncated: empty quadrature grid");
  if (!grid.box.covers(G.support())) {
    throw std::invalid_argument("lp_integral_truncated: quadrature grid does not cover the support of G");
  }
  const int d = grid.box.dimension;
  const int p = grid.points_per_axis;

  std::vector<Point> nodes;
  {
    long total = 1;
    for (int c = 0; c < d; ++c) total *= p;
    nodes.reserve(total);
    for (long idx = 0; idx < total; ++idx) {
      Point x{0.0, 0.0, 0.0};
      long rem = idx;
      for (int c = 0; c < d; ++c) {
        const int i = static_cast<int>(rem % p);
        rem /= p;
        const double w = (grid.box.hi[c] - grid.box.lo[c]) / p;
        x[c] = grid.box.lo[c] + (i + 0.5) * w;
      }
      nodes.push_back(x);
    }
  }
  const double cell = grid.box.volume() / static_cast<double>(nodes.size());

  double result = G.value_at_empty();
  const int cap = std::min(order_cap, G.max_order());
  double factorial = 1.0;
  std::vector<std::size_t> idx;
  std::vector<Point> eta;
  for (int n = 1; n <= cap; ++n) {
    factorial *= n;
    const double work = std::pow(static_cast<double>(nodes.size()), n);
    if (work > 5e8) throw std::invalid_argument("lp_integral_truncated: quadrature too large at order " + std::to_string(n));
    idx.assign(n, 0);
    eta.resize(n);
    double sum = 0.0;
    while (true) {
      for (int i = 0; i < n; ++i) eta[i] = nodes[idx[i]];
      sum += G(eta);
      int i = n - 1;
      while (i >= 0 && ++idx[i] == nodes.size()) idx[i--] = 0;
      if (i < 0) break;
    }
    result += sum * std::pow(cell, n) / factorial;
  }
  return result;
}

}  // namespace kawasaki
