#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kawasaki/kernels.hpp"
#include "kawasaki/torus.hpp"

namespace kawasaki {

using Site = std::uint32_t;

/// Periodic grid of M^d sites with spacing h on the torus [0, M h)^d. Sites
/// double as separation vectors: separation(a, b) is the site s with b + s = a.
class Lattice {
 public:
  Lattice(int dimension, int sites_per_axis, double spacing);

  [[nodiscard]] int dimension() const noexcept { return dim_; }
  [[nodiscard]] int sites_per_axis() const noexcept { return m_; }
  [[nodiscard]] double spacing() const noexcept { return h_; }
  [[nodiscard]] std::size_t site_count() const noexcept { return n_sites_; }
  /// h^d: the quadrature weight of one site.
  [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }
  [[nodiscard]] double side_length() const noexcept { return m_ * h_; }
  [[nodiscard]] TorusDomain domain() const { return TorusDomain(dim_, side_length()); }

  [[nodiscard]] std::array<int, 3> coords(Site s) const noexcept;
  [[nodiscard]] Site from_coords(std::array<int, 3> c) const noexcept;  // wraps each component
  [[nodiscard]] Site shift(Site p, Site offset) const noexcept;
  [[nodiscard]] Site separation(Site a, Site b) const noexcept;
  [[nodiscard]] Site negate(Site s) const noexcept;

  [[nodiscard]] Point position(Site s) const noexcept;
  /// Min-image displacement of a separation, components in [-M/2, M/2) * h.
  [[nodiscard]] Point displacement(Site sep) const noexcept;
  /// Nearest site to a point of the torus.
  [[nodiscard]] Site site_of(const Point& p) const noexcept;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  int dim_;
  int m_;
  double h_;
  std::size_t n_sites_;
  double cell_volume_;
};

/// Kernel values tabulated by lattice separation; every continuum integral
/// over R^d becomes a sum over separations times h^d.
struct LatticeKernels {
  LatticeKernels(const Lattice& lattice, const KernelSpec& kernels);

  std::vector<double> a;    // a(displacement(s))
  std::vector<double> phi;  // phi(displacement(s))
  std::vector<double> tau;  // exp(-phi)
  std::vector<double> t;    // exp(-phi) - 1
  std::vector<Site> a_support;
  std::vector<Site> t_support;
  double alpha = 0.0;       // h^d sum a
  double mean_phi = 0.0;    // h^d sum phi
  double abs_t_mass = 0.0;  // h^d sum |t| <= mean_phi
};

}  // namespace kawasaki
