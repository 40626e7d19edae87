#include "kawasaki/kmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "kawasaki/functionals.hpp"

namespace kawasaki::kmc {
namespace {

Point random_direction(int dim, CounterRng& rng) {
  switch (dim) {
    case 1:
      return {rng.uniform() < 0.5 ? -1.0 : 1.0, 0.0, 0.0};
    case 2: {
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      return {std::cos(th), std::sin(th), 0.0};
    }
    default: {
      const double z = 2.0 * rng.uniform() - 1.0;
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      return {s * std::cos(th), s * std::sin(th), z};
    }
  }
}

double cell_side_for(const KernelSpec& k) {
  // only the potential enters the acceptance sum
  return k.phi.is_zero() ? 0.0 : k.phi.cutoff();
}

}  // namespace

SimState::SimState(TorusDomain domain, KernelSpec kernels, Configuration initial, CounterRng rng, EngineOptions options)
    : domain_(domain),
      kernels_(std::move(kernels)),
      config_(std::move(initial)),
      rng_(rng),
      options_(std::move(options)),
      cells_(domain_, cell_side_for(kernels_)) {
  if (kernels_.dimension() != domain_.dimension()) throw std::invalid_argument("kernel and domain dimensions differ");
  if (!(kernels_.cutoff_radius < 0.5 * domain_.side_length())) {
    throw std::invalid_argument("kernel support must be shorter than half the box side");
  }
  config_.validate(domain_);
  alpha_ = kernels_.alpha;

  if (options_.lattice) {
    const Lattice& lat = options_.lattice->lattice;
    if (lat.dimension() != domain_.dimension() || std::abs(lat.side_length() - domain_.side_length()) > 1e-12) {
      throw std::invalid_argument("lattice does not tile the simulation box");
    }
    const LatticeKernels tab(lat, kernels_);
    if (tab.a_support.empty()) throw std::invalid_argument("jump kernel vanishes on every lattice separation");
    double acc = 0.0;
    for (Site s : tab.a_support) {
      acc += tab.a[s];
      offsets_.push_back(s);
      offset_cdf_.push_back(acc);
    }
    for (double& c : offset_cdf_) c /= acc;
    alpha_ = tab.alpha;
    occupancy_.assign(lat.site_count(), 0);
    for (std::size_t i = 0; i < config_.size(); ++i) {
      const Point& p = config_[i].position;
      const Site s = lat.site_of(p);
      if (torus_distance(p, lat.position(s), domain_) > 1e-9 * lat.spacing()) {
        throw std::invalid_argument("lattice mode requires particles on lattice sites");
      }
      if (++occupancy_[s] > 1 && options_.lattice->exclusion) {
        throw std::invalid_argument("exclusion mode requires distinct occupied sites");
      }
    }
  }
  if (options_.use_cell_list) cells_.rebuild(config_);
}

double SimState::total_attempt_rate() const noexcept { return alpha_ * static_cast<double>(config_.size()); }

double SimState::acceptance_probability_bruteforce(std::size_t mover, const Point& y) const {
  return std::exp(-interaction_exponent(mover, y, config_, kernels_, domain_));
}

double SimState::acceptance_probability(std::size_t mover, const Point& y) const {
  if (!options_.use_cell_list) return acceptance_probability_bruteforce(mover, y);
  if (kernels_.phi.is_zero()) return 1.0;
  double s = 0.0;
  cells_.for_each_near(y, [&](std::size_t j) {
    if (j == mover && kernels_.exclude_self_term) return;
    s += kernels_.potential(min_image(y, config_[j].position, domain_));
  });
  return std::exp(-s);
}

Point SimState::draw_continuum_target(const Point& x) {
  const double r = kernels_.a.sample_radius(rng_.uniform());
  const Point u = random_direction(domain_.dimension(), rng_);
  Point y = x;
  for (int c = 0; c < domain_.dimension(); ++c) y[c] += r * u[c];
  return domain_.wrap(y);
}

void SimState::propose() {
  const std::size_t i = static_cast<std::size_t>(rng_.below(config_.size()));
  const Point x = config_[i].position;
  ++counters_.proposals;

  Point y;
  Site from = 0;
  Site to = 0;
  if (options_.lattice) {
    const Lattice& lat = options_.lattice->lattice;
    const double u = rng_.uniform();
    auto it = std::upper_bound(offset_cdf_.begin(), offset_cdf_.end(), u);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - offset_cdf_.begin()), offsets_.size() - 1);
    from = lat.site_of(x);
    to = lat.shift(from, offsets_[k]);
    if (options_.lattice->exclusion && to != from && occupancy_[to] > 0) return;
    y = lat.position(to);
  } else {
    y = draw_continuum_target(x);
  }

  const double p = acceptance_probability(i, y);
  if (!(rng_.uniform() < p)) return;

  ++counters_.acceptances;
  config_.move(i, y);
  if (options_.use_cell_list) cells_.move(i, x, y);
  if (options_.lattice) {
    --occupancy_[from];
    ++occupancy_[to];
  }
}

void SimState::step() {
  if (config_.empty()) throw std::logic_error("step: empty configuration has no dynamics");
  clock_ += rng_.exponential(total_attempt_rate());
  propose();
}

void SimState::advance_to(double t) {
  if (t < clock_) throw std::invalid_argument("advance_to: target time lies in the past");
  if (config_.empty()) throw std::logic_error("advance_to: empty configuration has no dynamics");
  const double rate = total_attempt_rate();
  for (;;) {
    const double w = rng_.exponential(rate);
    // The overshooting wait is discarded; the clock is memoryless.
    if (clock_ + w > t) {
      clock_ = t;
      return;
    }
    clock_ += w;
    propose();
  }
}

std::vector<double> snapshot_schedule(double t_end, double snapshot_dt) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive and finite");
  if (!(snapshot_dt > 0.0) || !std::isfinite(snapshot_dt)) throw std::invalid_argument("snapshot_dt must be positive");
  const double count = t_end / snapshot_dt;
  if (count > 1e7) throw std::invalid_argument("snapshot_dt too small for t_end");
  std::vector<double> times;
  for (std::size_t k = 0;; ++k) {
    const double tk = static_cast<double>(k) * snapshot_dt;
    if (!(tk < t_end) || (k > 0 && t_end - tk < 1e-12 * t_end)) break;
    times.push_back(tk);
  }
  times.push_back(t_end);
  return times;
}

ReplicaResult run(const TorusDomain& domain, const KernelSpec& kernels, const Configuration& initial, double t_end,
                  double snapshot_dt, std::uint64_t seed, const EngineOptions& options) {
  return run(
      domain, kernels, [&initial](CounterRng&) { return initial; }, t_end, snapshot_dt, seed, options);
}

ReplicaResult run(const TorusDomain& domain, const KernelSpec& kernels, const InitialSampler& initial, double t_end,
                  double snapshot_dt, std::uint64_t seed, const EngineOptions& options) {
  const auto times = snapshot_schedule(t_end, snapshot_dt);
  CounterRng rng(seed);
  Configuration start = initial(rng);
  if (start.empty()) throw std::invalid_argument("run: initial configuration is empty");
  SimState sim(domain, kernels, std::move(start), rng, options);
  ReplicaResult out;
  out.seed = seed;
  out.snapshots.reserve(times.size());
  const std::size_t n0 = sim.config().size();
  for (double t : times) {
    sim.advance_to(t);
    if (sim.config().size() != n0) throw std::logic_error("particle number changed along a trajectory");
    out.snapshots.push_back({t, sim.config()});
  }
  out.counters = sim.counters();
  return out;
}

std::vector<ReplicaResult> run_replicas(const TorusDomain& domain, const KernelSpec& kernels,
                                        const InitialSampler& initial, double t_end, double snapshot_dt,
                                        std::uint64_t base_seed, int replicas, int threads,
                                        const EngineOptions& options) {
  if (replicas < 1) throw std::invalid_argument("replica count must be at least 1");
  if (threads < 1) throw std::invalid_argument("thread count must be at least 1");
  std::vector<ReplicaResult> results(static_cast<std::size_t>(replicas));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= replicas) return;
      try {
        const std::uint64_t seed = base_seed ^ static_cast<std::uint64_t>(r);
        results[static_cast<std::size_t>(r)] = run(domain, kernels, initial, t_end, snapshot_dt, seed, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(replicas);
        return;
      }
    }
  };

  const int n_threads = std::min(threads, replicas);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

Configuration poisson_configuration(const TorusDomain& domain, double kappa, CounterRng& rng) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("density must be non-negative");
  const double mean = kappa * domain.volume();
  if (mean > 1e8) throw std::invalid_argument("expected particle count too large");
  long n = 0;
  if (mean > 0.0) {
    std::poisson_distribution<long> pd(mean);
    n = pd(rng);
  }
  std::vector<Point> pts(static_cast<std::size_t>(n), Point{0.0, 0.0, 0.0});
  const double L = domain.side_length();
  for (auto& p : pts) {
    for (int c = 0; c < domain.dimension(); ++c) p[c] = L * rng.uniform();
    p = domain.wrap(p);
  }
  return Configuration::from_positions(pts);
}

Configuration jittered_grid_configuration(const TorusDomain& domain, double kappa, double jitter, CounterRng& rng) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("density must be positive");
  if (!(jitter >= 0.0 && jitter <= 1.0)) throw std::invalid_argument("jitter must lie in [0, 1]");
  const int d = domain.dimension();
  const double target = kappa * domain.volume();
  const int m = std::max(1, static_cast<int>(std::lround(std::pow(target, 1.0 / d))));
  if (std::pow(static_cast<double>(m), d) > 1e8) throw std::invalid_argument("grid too large");
  const double s = domain.side_length() / m;
  std::vector<Point> pts;
  std::array<int, 3> idx{0, 0, 0};
  const int total = static_cast<int>(std::lround(std::pow(static_cast<double>(m), d)));
  pts.reserve(static_cast<std::size_t>(total));
  for (int n = 0; n < total; ++n) {
    int rem = n;
    for (int c = 0; c < d; ++c) {
      idx[c] = rem % m;
      rem /= m;
    }
    Point p{0.0, 0.0, 0.0};
    for (int c = 0; c < d; ++c) p[c] = (idx[c] + 0.5 + jitter * (rng.uniform() - 0.5)) * s;
    pts.push_back(domain.wrap(p));
  }
  return Configuration::from_positions(pts);
}

Configuration lattice_uniform_configuration(const Lattice& lattice, int n, bool distinct, CounterRng& rng) {
  if (n < 0) throw std::invalid_argument("particle count must be non-negative");
  const std::size_t m = lattice.site_count();
  if (distinct && static_cast<std::size_t>(n) > m) throw std::invalid_argument("more particles than lattice sites");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  if (distinct) {
    // partial Fisher-Yates over the site indices
    std::vector<Site> sites(m);
    for (std::size_t s = 0; s < m; ++s) sites[s] = static_cast<Site>(s);
    for (int k = 0; k < n; ++k) {
      const std::size_t j = static_cast<std::size_t>(k) + rng.below(m - static_cast<std::size_t>(k));
      std::swap(sites[static_cast<std::size_t>(k)], sites[j]);
      pts.push_back(lattice.position(sites[static_cast<std::size_t>(k)]));
    }
  } else {
    for (int k = 0; k < n; ++k) pts.push_back(lattice.position(static_cast<Site>(rng.below(m))));
  }
  return Configuration::from_positions(pts);
}

double detailed_balance_probe(int n_trials, int n_particles, const TorusDomain& domain, const KernelSpec& kernels,
                              std::uint64_t seed) {
  if (n_trials < 1 || n_particles < 1) throw std::invalid_argument("probe needs trials and particles");
  CounterRng rng(seed);
  double worst = 0.0;
  const int d = domain.dimension();
  // Particles are packed into a cluster a couple of interaction ranges wide so
  // the potential terms are active in every trial.
  const double side = std::min(domain.side_length(), 2.0 * kernels.cutoff_radius);
  for (int trial = 0; trial < n_trials; ++trial) {
    std::vector<Point> pts(static_cast<std::size_t>(n_particles), Point{0.0, 0.0, 0.0});
    for (auto& p : pts) {
      for (int c = 0; c < d; ++c) p[c] = side * rng.uniform();
      p = domain.wrap(p);
    }
    const Configuration gamma = Configuration::from_positions(pts);
    const std::size_t i = static_cast<std::size_t>(rng.below(gamma.size()));
    const Point x = gamma[i].position;
    const double r = kernels.a.sample_radius(rng.uniform());
    const Point u = random_direction(d, rng);
    Point y = x;
    for (int c = 0; c < d; ++c) y[c] += r * u[c];
    y = domain.wrap(y);

    const double a_fwd = kernels.jump(min_image(x, y, domain));
    if (a_fwd == 0.0) continue;
    Configuration moved = gamma;
    moved.move(i, y);
    const double a_bwd = kernels.jump(min_image(y, x, domain));
    const double lhs = std::log(a_fwd) - interaction_exponent(i, y, gamma, kernels, domain) -
                       total_energy(gamma, kernels, domain);
    const double rhs = std::log(a_bwd) - interaction_exponent(i, x, moved, kernels, domain) -
                       total_energy(moved, kernels, domain);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace kawasaki::kmc
