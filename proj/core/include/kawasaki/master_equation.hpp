#pragma once

#include <string_view>
#include <vector>

#include "kawasaki/correlation_field.hpp"
#include "kawasaki/kernels.hpp"
#include "kawasaki/lattice.hpp"

namespace kawasaki {

/// Exclusion: N distinct occupied sites. Multiset: N particles with any
/// occupation numbers; a particle at x leaves at n_x times the one-particle rate.
enum class Sector { Exclusion, Multiset };
[[nodiscard]] Sector parse_sector(std::string_view name);
[[nodiscard]] std::string_view to_string(Sector s) noexcept;

/// Forward equation of the N-particle jump process on a small lattice torus.
///
/// A jump x -> x + s happens at rate h^d a(s) exp(-sum_{z in eta} phi(x + s - z)),
/// the sum taken over the configuration before the jump (the jumping particle
/// included unless the kernels exclude it). In the exclusion sector a jump
/// onto an occupied site is forbidden. Jumps with s = 0 change nothing and
/// are left out.
class MasterEquation {
 public:
  static constexpr std::size_t kMaxStates = 100'000;

  MasterEquation(const Lattice& lattice, const KernelSpec& kernels, int particles, Sector sector = Sector::Exclusion);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] int particles() const noexcept { return n_; }
  [[nodiscard]] Sector sector() const noexcept { return sector_; }
  [[nodiscard]] std::size_t state_count() const noexcept { return states_.size(); }
  /// Sorted occupied sites of state i (with repetition in the multiset sector).
  [[nodiscard]] const std::vector<Site>& state(std::size_t i) const { return states_.at(i); }
  [[nodiscard]] std::size_t index_of(std::vector<Site> sites) const;

  /// d prob / dt
  [[nodiscard]] std::vector<double> rhs(const std::vector<double>& prob) const;
  /// exp(-E) (exclusion) or exp(-E) / prod n_x! (multiset), normalized.
  [[nodiscard]] std::vector<double> gibbs() const;
  /// Normalized null vector of the generator by a dense LU solve; needs at most 5000 states.
  [[nodiscard]] std::vector<double> stationary() const;
  [[nodiscard]] std::vector<double> rk4_step(const std::vector<double>& prob, double dt) const;
  /// RK4 to t_end with steps of at most dt.
  [[nodiscard]] std::vector<double> evolve(std::vector<double> prob, double t_end, double dt) const;

  /// Point mass on the given sites.
  [[nodiscard]] std::vector<double> delta_state(const std::vector<Site>& sites) const;
  /// Each particle placed independently and uniformly (multiset sector), or a
  /// uniform N-subset (exclusion sector).
  [[nodiscard]] std::vector<double> uniform_placement() const;

  /// Pair energy of a state, same-site pairs included.
  [[nodiscard]] double energy(std::size_t i) const;

  /// E[n_x] / h^d per site.
  [[nodiscard]] std::vector<double> site_density(const std::vector<double>& prob) const;
  /// Correlation field of the state: k1(x) = E[n_x]/h^d and
  /// k2(x, y) = E[n_x n_y - [x = y] n_x]/h^{2d}; translation-invariant mode
  /// averages over translations. Orders above 2 are left at zero.
  [[nodiscard]] CorrelationField correlations(const std::vector<double>& prob, FieldMode mode, ClosureRule closure,
                                              int qy_order) const;

 private:
  struct Transition {
    std::size_t to;
    double rate;
  };

  Lattice lattice_;
  LatticeKernels tab_;
  bool exclude_self_;
  int n_;
  Sector sector_;
  std::vector<std::vector<Site>> states_;
  std::vector<std::vector<Transition>> out_;  // outgoing transitions per state
  std::vector<double> exit_rate_;
};

}  // namespace kawasaki
