#include "validation.hpp"

#include <algorithm>
#include <cmath>

#include <kawasaki/functionals.hpp>
#include <kawasaki/hierarchy.hpp>
#include <kawasaki/kmc.hpp>
#include <kawasaki/lambert_w.hpp>
#include <kawasaki/master_equation.hpp>
#include <kawasaki/rng.hpp>
#include <kawasaki/scheduler.hpp>

#include "output.hpp"

namespace kawasaki::cli {
namespace {

SuiteResult verdict(std::string name, double measured, double threshold, std::string detail = {}) {
  return SuiteResult{std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

Point random_point(const TorusDomain& domain, CounterRng& rng) {
  Point p{0.0, 0.0, 0.0};
  for (int c = 0; c < domain.dimension(); ++c) p[c] = domain.side_length() * rng.uniform();
  return domain.wrap(p);
}

// The small lattice every oracle suite shares: 16 sites per axis at the configured spacing.
Lattice oracle_lattice(const RunConfig& cfg) { return Lattice(1, 16, cfg.spacing); }

KernelSpec one_dimensional_kernels(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.dimension = 1;
  return c.kernels();
}

// Optimal scale gap; a unit gap when there is no repulsion and the horizon no longer peaks.
double scale_gap(double theta, const ScaleParams& p) { return p.mean_phi > 0.0 ? delta_theta(theta, p) : 1.0; }

}  // namespace

SuiteResult kernel_symmetry_suite(const KernelFn& a, const KernelFn& phi, const TorusDomain& domain, int trials,
                                  std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Point p = random_point(domain, rng);
    const Point q = random_point(domain, rng);
    const Point pq = min_image(p, q, domain);
    const Point qp = min_image(q, p, domain);
    worst = std::max({worst, std::abs(a(pq) - a(qp)), std::abs(phi(pq) - phi(qp))});
  }
  return verdict("kernel_symmetry", worst, 0.0, fmt::format("{} random pairs", trials));
}

SuiteResult repulsion_integral_suite(const KernelSpec& kernels) {
  const double deficit = repulsion_deficit_integral(kernels.phi);
  const double excess = deficit - kernels.mean_phi;
  // relative slack 1e-8
  return verdict("repulsion_integral", excess, 1e-8 * std::max(1.0, kernels.mean_phi),
                 fmt::format("integral of 1-exp(-phi) = {}, mean_phi = {}", num(deficit), num(kernels.mean_phi)));
}

SuiteResult detailed_balance_suite(const KernelSpec& kernels, const TorusDomain& domain, std::uint64_t seed) {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    worst = std::max(worst, kmc::detailed_balance_probe(20, n, domain, kernels, seed + static_cast<std::uint64_t>(n)));
  }
  return verdict("detailed_balance", worst, 1e-12, "120 configurations with 1 to 6 particles");
}

SuiteResult cell_list_suite(const KernelSpec& kernels, const TorusDomain& domain, double kappa, std::uint64_t seed) {
  CounterRng rng(seed);
  Configuration cfg = kmc::poisson_configuration(domain, std::max(kappa, 1e-3), rng);
  if (cfg.empty()) cfg = Configuration::from_positions(std::vector<Point>{random_point(domain, rng)});
  const kmc::SimState sim(domain, kernels, cfg, CounterRng(seed + 1));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto mover = static_cast<std::size_t>(rng.below(cfg.size()));
    const Point y = random_point(domain, rng);
    worst = std::max(worst, std::abs(sim.acceptance_probability(mover, y) - sim.acceptance_probability_bruteforce(mover, y)));
  }
  return verdict("cell_list", worst, 1e-14, fmt::format("1000 proposals among {} particles", cfg.size()));
}

SuiteResult poisson_invariance_suite(const RunConfig& cfg) {
  RunConfig free_cfg = cfg;
  free_cfg.phi.integral_given = false;
  free_cfg.phi.amplitude_given = true;
  free_cfg.phi.amplitude = 0.0;
  const Hierarchy h(free_cfg.lattice(), free_cfg.kernels());
  const auto k = CorrelationField::constant(h.lattice(), free_cfg.mode(), free_cfg.closure_rule(), free_cfg.qy_order,
                                            free_cfg.kappa);
  const double m = h.apply_Ldelta(k).max_abs();
  return verdict("poisson_invariance", m, 1e-12, "max |L k| for k = kappa^n with phi = 0");
}

SuiteResult oracle_equivalence_suite(const RunConfig& cfg) {
  const Lattice lat = oracle_lattice(cfg);
  const KernelSpec kernels = one_dimensional_kernels(cfg);
  const MasterEquation me(lat, kernels, 2, Sector::Multiset);
  const Hierarchy h(lat, kernels);
  const ClosureRule closure{ClosureKind::ZeroTail, 2};
  auto prob = me.uniform_placement();
  CorrelationField field = me.correlations(prob, FieldMode::TranslationInvariant, closure, 1);

  const double density = 2.0 / (static_cast<double>(lat.site_count()) * lat.cell_volume());
  const ScaleParams p = h.scale_params(density);
  const double th = theta_of_t(0.0, p);
  const double horizon = horizon_T(th + scale_gap(th, p), th, p);
  const double t_end = 0.5 * horizon;
  const int checkpoints = 5;
  const double dt = 1e-3;
  double worst = 0.0;
  for (int c = 1; c <= checkpoints; ++c) {
    const double span = t_end / checkpoints;
    prob = me.evolve(prob, span, dt);
    field = integrate(h, field, span, dt, Operator::Ldelta);
    const CorrelationField exact = me.correlations(prob, FieldMode::TranslationInvariant, closure, 1);
    const double scale = std::max(exact.max_abs(), 1e-300);
    worst = std::max(worst, max_abs_difference(field, exact) / scale);
  }
  return verdict("oracle_equivalence", worst, 0.02,
                 fmt::format("N=2 multiset sector on 16 sites against the zero-tail hierarchy over [0, {}]", num(t_end)));
}

SuiteResult stationary_gibbs_suite(const RunConfig& cfg) {
  const MasterEquation me(oracle_lattice(cfg), one_dimensional_kernels(cfg), 2, Sector::Exclusion);
  const auto pi = me.stationary();
  const auto g = me.gibbs();
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::abs(pi[i] - g[i]));
  return verdict("stationary_gibbs", worst, 1e-10, fmt::format("{} states", me.state_count()));
}

SuiteResult probability_conservation_suite(const RunConfig& cfg, std::uint64_t seed) {
  const MasterEquation me(oracle_lattice(cfg), one_dimensional_kernels(cfg), 2, Sector::Exclusion);
  CounterRng rng(seed);
  std::vector<double> p(me.state_count());
  double z = 0.0;
  for (double& v : p) z += (v = rng.uniform());
  for (double& v : p) v /= z;
  double s = 0.0;
  for (double v : me.rhs(p)) s += v;
  return verdict("probability_conservation", std::abs(s), 1e-14, "sum of the master-equation derivative");
}

SuiteResult lambert_residual_suite(std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = std::pow(10.0, -10.0 + 20.0 * rng.uniform());
    const double w = lambert_w0(x);
    worst = std::max(worst, std::abs(w * std::exp(w) - x) / x);
  }
  return verdict("lambert_w_residual", worst, 1e-14, "10^4 inputs log-uniform on [1e-10, 1e10]");
}

SuiteResult horizon_argmax_suite(std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    ScaleParams p;
    p.alpha = 0.1 + 2.0 * rng.uniform();
    p.mean_phi = 0.1 + 2.0 * rng.uniform();
    const double th = -2.0 + 4.0 * rng.uniform();
    double best = -1.0;
    double arg = th;
    for (int k = 1; k <= 500000; ++k) {
      const double tp = th + 1e-5 * k;
      const double v = horizon_T(tp, th, p);
      if (v > best) {
        best = v;
        arg = tp;
      }
    }
    worst = std::max(worst, std::abs(arg - (th + delta_theta(th, p))));
  }
  return verdict("horizon_argmax", worst, 1e-4, "50 random (alpha, mean_phi, theta), grid step 1e-5");
}

SuiteResult ladder_suite(const RunConfig& cfg) {
  const ScaleParams p = cfg.scheduler_params();
  const ScaleLadder ladder = build_ladder(p, cfg.t_target, cfg.max_steps);
  double worst = 0.0;
  bool increasing = true;
  for (std::size_t n = 0; n < ladder.size(); ++n) {
    worst = std::max(worst, std::abs(ladder.theta_star[n + 1] - theta_of_t(ladder.cumulative[n], p)));
    if (n > 0 && !(ladder.cumulative[n] > ladder.cumulative[n - 1])) increasing = false;
  }
  SuiteResult r = verdict("ladder", worst, 1e-12,
                          fmt::format("{} steps, status {}, reached t = {}", ladder.size(), to_string(ladder.status),
                                      num(ladder.reached_time())));
  r.pass = r.pass && increasing && ladder.reached();
  return r;
}

SuiteResult composition_suite(const RunConfig& cfg) {
  const Hierarchy h(cfg.lattice(), cfg.kernels());
  const double C = cfg.initial_C();
  const auto k = CorrelationField::constant(h.lattice(), cfg.mode(), cfg.closure_rule(), cfg.qy_order, C);
  const ScaleParams p = h.scale_params(C);
  const double th0 = theta_of_t(0.0, p);
  const double gap = scale_gap(th0, p);
  const double horizon = horizon_T(th0 + gap, th0, p);
  const double t = 0.1 * horizon;
  const double s = 0.15 * horizon;
  const int order = 40;
  const ScalePair outer{th0, th0 + gap};
  const auto whole = taylor_semigroup_step(h, k, t + s, order, Operator::Ldelta, outer);
  // intermediate scale halfway through the gap
  const ScalePair first{th0, th0 + 0.5 * gap};
  const ScalePair second{th0 + 0.5 * gap, th0 + gap};
  const auto a = taylor_semigroup_step(h, k, s, order, Operator::Ldelta, first);
  const auto b = taylor_semigroup_step(h, a.field, t, order, Operator::Ldelta, second);
  const double diff = max_abs_difference(whole.field, b.field);
  const double tol = whole.last_term + a.last_term + b.last_term + 1e-13 * std::max(1.0, k.max_abs());
  return verdict("semigroup_composition", diff, tol, "S(t+s) against S(t) S(s) through an intermediate scale");
}

std::vector<SuiteResult> run_all_suites(const RunConfig& cfg) {
  const KernelSpec kernels = cfg.kernels();
  const TorusDomain domain = cfg.domain();
  std::vector<SuiteResult> out;
  out.push_back(kernel_symmetry_suite([&](const Point& v) { return kernels.jump(v); },
                                      [&](const Point& v) { return kernels.potential(v); }, domain, 10000, cfg.seed));
  out.push_back(repulsion_integral_suite(kernels));
  out.push_back(detailed_balance_suite(kernels, domain, cfg.seed));
  out.push_back(cell_list_suite(kernels, domain, cfg.kappa, cfg.seed));
  out.push_back(poisson_invariance_suite(cfg));
  out.push_back(oracle_equivalence_suite(cfg));
  out.push_back(stationary_gibbs_suite(cfg));
  out.push_back(probability_conservation_suite(cfg, cfg.seed));
  out.push_back(lambert_residual_suite(cfg.seed));
  out.push_back(horizon_argmax_suite(cfg.seed));
  out.push_back(ladder_suite(cfg));
  out.push_back(composition_suite(cfg));
  return out;
}

}  // namespace kawasaki::cli
