#include "kawasaki/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace kawasaki {

Lattice::Lattice(int dimension, int sites_per_axis, double spacing) : dim_(dimension), m_(sites_per_axis), h_(spacing) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (sites_per_axis < 2) throw std::invalid_argument("lattice needs at least 2 sites per axis");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("lattice spacing must be positive");
  n_sites_ = 1;
  for (int c = 0; c < dim_; ++c) n_sites_ *= static_cast<std::size_t>(m_);
  if (n_sites_ > (std::size_t{1} << 24)) throw std::invalid_argument("lattice too large");
  cell_volume_ = std::pow(h_, dim_);
}

std::array<int, 3> Lattice::coords(Site s) const noexcept {
  std::array<int, 3> c{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    c[k] = static_cast<int>(s % static_cast<Site>(m_));
    s /= static_cast<Site>(m_);
  }
  return c;
}

Site Lattice::from_coords(std::array<int, 3> c) const noexcept {
  Site s = 0;
  for (int k = dim_ - 1; k >= 0; --k) {
    const int v = ((c[k] % m_) + m_) % m_;
    s = s * static_cast<Site>(m_) + static_cast<Site>(v);
  }
  return s;
}

Site Lattice::shift(Site p, Site offset) const noexcept {
  if (dim_ == 1) return (p + offset) % static_cast<Site>(m_);
  auto a = coords(p);
  const auto b = coords(offset);
  for (int k = 0; k < dim_; ++k) a[k] += b[k];
  return from_coords(a);
}

Site Lattice::separation(Site a, Site b) const noexcept {
  if (dim_ == 1) return (a + static_cast<Site>(m_) - b) % static_cast<Site>(m_);
  auto ca = coords(a);
  const auto cb = coords(b);
  for (int k = 0; k < dim_; ++k) ca[k] -= cb[k];
  return from_coords(ca);
}

Site Lattice::negate(Site s) const noexcept { return separation(0, s); }

Point Lattice::position(Site s) const noexcept {
  const auto c = coords(s);
  Point p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim_; ++k) p[k] = c[k] * h_;
  return p;
}

Point Lattice::displacement(Site sep) const noexcept {
  const auto c = coords(sep);
  Point p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim_; ++k) {
    const int v = (2 * c[k] >= m_) ? c[k] - m_ : c[k];
    p[k] = v * h_;
  }
  return p;
}

Site Lattice::site_of(const Point& p) const noexcept {
  std::array<int, 3> c{0, 0, 0};
  for (int k = 0; k < dim_; ++k) c[k] = static_cast<int>(std::lround(p[k] / h_));
  return from_coords(c);
}

LatticeKernels::LatticeKernels(const Lattice& lattice, const KernelSpec& kernels) {
  if (kernels.dimension() != lattice.dimension()) {
    throw std::invalid_argument("kernel and lattice dimensions differ");
  }
  if (!(kernels.cutoff_radius < 0.5 * lattice.side_length())) {
    throw std::invalid_argument("kernel support must be shorter than half the lattice side");
  }
  const std::size_t n = lattice.site_count();
  a.resize(n);
  phi.resize(n);
  tau.resize(n);
  t.resize(n);
  const double w = lattice.cell_volume();
  for (Site s = 0; s < n; ++s) {
    const Point v = lattice.displacement(s);
    a[s] = kernels.jump(v);
    phi[s] = kernels.potential(v);
    tau[s] = std::exp(-phi[s]);
    t[s] = std::expm1(-phi[s]);
    if (a[s] != 0.0) a_support.push_back(s);
    if (t[s] != 0.0) t_support.push_back(s);
    alpha += w * a[s];
    mean_phi += w * phi[s];
    abs_t_mass += w * std::abs(t[s]);
  }
}

}  // namespace kawasaki
