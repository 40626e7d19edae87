#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kawasaki/cell_list.hpp"
#include "kawasaki/configuration.hpp"
#include "kawasaki/kernels.hpp"
#include "kawasaki/lattice.hpp"
#include "kawasaki/rng.hpp"
#include "kawasaki/torus.hpp"

namespace kawasaki::kmc {

struct EventCounters {
  std::uint64_t proposals = 0;
  std::uint64_t acceptances = 0;

  [[nodiscard]] double acceptance_ratio() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(acceptances) / static_cast<double>(proposals);
  }
  EventCounters& operator+=(const EventCounters& o) noexcept {
    proposals += o.proposals;
    acceptances += o.acceptances;
    return *this;
  }
};

/// Jumps restricted to the sites of a lattice: displacements are drawn from
/// the tabulated kernel h^d a(s) / alpha_lattice. With `exclusion`, a
/// proposal onto a site held by another particle is rejected.
struct LatticeMoves {
  Lattice lattice;
  bool exclusion = true;
};

struct EngineOptions {
  std::optional<LatticeMoves> lattice;
  bool use_cell_list = true;
};

/// Exact simulation of the jump process by thinning a Poisson clock.
///
/// Every particle proposes jumps at rate alpha; the displacement has density
/// a / alpha and the move is accepted with probability
/// exp(-sum_z phi(y - z)), which equals c(x, y, gamma) / a(x - y).
/// Rejected proposals still advance the clock.
class SimState {
 public:
  SimState(TorusDomain domain, KernelSpec kernels, Configuration initial, CounterRng rng, EngineOptions options = {});

  /// One event: exponential wait at rate alpha * N, then one thinned proposal.
  void step();
  /// Runs events up to time t and leaves the clock at exactly t.
  void advance_to(double t);

  [[nodiscard]] double clock() const noexcept { return clock_; }
  [[nodiscard]] const Configuration& config() const noexcept { return config_; }
  [[nodiscard]] const EventCounters& counters() const noexcept { return counters_; }
  [[nodiscard]] const TorusDomain& domain() const noexcept { return domain_; }
  [[nodiscard]] const KernelSpec& kernels() const noexcept { return kernels_; }
  [[nodiscard]] const CellList& cells() const noexcept { return cells_; }
  /// alpha (or its lattice sum) times the particle count.
  [[nodiscard]] double total_attempt_rate() const noexcept;
  [[nodiscard]] double attempt_rate_per_particle() const noexcept { return alpha_; }

  /// exp(-sum_z phi(y - z)) using the cell list.
  [[nodiscard]] double acceptance_probability(std::size_t mover, const Point& y) const;
  /// Same quantity by an O(N) loop over every particle.
  [[nodiscard]] double acceptance_probability_bruteforce(std::size_t mover, const Point& y) const;

 private:
  void propose();
  [[nodiscard]] Point draw_continuum_target(const Point& x);

  TorusDomain domain_;
  KernelSpec kernels_;
  Configuration config_;
  CounterRng rng_;
  EngineOptions options_;
  CellList cells_;
  double clock_ = 0.0;
  double alpha_ = 0.0;
  EventCounters counters_;

  // lattice mode
  std::vector<Site> offsets_;
  std::vector<double> offset_cdf_;
  std::vector<int> occupancy_;
};

struct Snapshot {
  double time;
  Configuration config;
};

struct ReplicaResult {
  std::vector<Snapshot> snapshots;
  std::uint64_t seed = 0;
  EventCounters counters;
};

/// Snapshot times k * snapshot_dt below t_end, followed by t_end itself.
[[nodiscard]] std::vector<double> snapshot_schedule(double t_end, double snapshot_dt);

using InitialSampler = std::function<Configuration(CounterRng&)>;

/// Single replica; the initial configuration is drawn from `rng` first.
[[nodiscard]] ReplicaResult run(const TorusDomain& domain, const KernelSpec& kernels, const InitialSampler& initial,
                                double t_end, double snapshot_dt, std::uint64_t seed, const EngineOptions& options = {});
[[nodiscard]] ReplicaResult run(const TorusDomain& domain, const KernelSpec& kernels, const Configuration& initial,
                                double t_end, double snapshot_dt, std::uint64_t seed, const EngineOptions& options = {});

/// Replica r runs with seed (base_seed XOR r); results come back in replica order
/// whatever the thread count.
[[nodiscard]] std::vector<ReplicaResult> run_replicas(const TorusDomain& domain, const KernelSpec& kernels,
                                                      const InitialSampler& initial, double t_end, double snapshot_dt,
                                                      std::uint64_t base_seed, int replicas, int threads = 1,
                                                      const EngineOptions& options = {});

// Initial states

/// Poisson(kappa) point process on the torus.
[[nodiscard]] Configuration poisson_configuration(const TorusDomain& domain, double kappa, CounterRng& rng);
/// round(kappa |Lambda|)^(1/d) points per axis on a grid, each displaced uniformly
/// by up to +-jitter/2 grid cells.
[[nodiscard]] Configuration jittered_grid_configuration(const TorusDomain& domain, double kappa, double jitter,
                                                        CounterRng& rng);
/// n particles on uniformly chosen lattice sites (distinct sites if `distinct`).
[[nodiscard]] Configuration lattice_uniform_configuration(const Lattice& lattice, int n, bool distinct, CounterRng& rng);

/// max over trials of |log[c(x,y,g) e^{-E(g)}] - log[c(y,x,g') e^{-E(g')}]|,
/// g' = g \ x u y, for n_particles placed uniformly in a cube of side 2 * cutoff_radius and a
/// target y drawn from the jump kernel around x.
[[nodiscard]] double detailed_balance_probe(int n_trials, int n_particles, const TorusDomain& domain,
                                            const KernelSpec& kernels, std::uint64_t seed);

}  // namespace kawasaki::kmc
