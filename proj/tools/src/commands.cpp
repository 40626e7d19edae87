#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <kawasaki/estimators.hpp>
#include <kawasaki/hierarchy.hpp>
#include <kawasaki/kmc.hpp>
#include <kawasaki/lattice.hpp>
#include <kawasaki/scheduler.hpp>

#include "output.hpp"
#include "validation.hpp"

namespace kawasaki::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

std::filesystem::path prepare_output(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

json manifest_header(const char* command, const RunConfig& cfg) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = cfg.seed;
  return m;
}

json bound_json(const BoundCheck& b) {
  return json{{"t", b.t},
              {"n", b.n},
              {"bound", b.bound},
              {"worst_value", b.worst_value},
              {"margin", b.margin},
              {"pass", b.pass}};
}

void bound_row(CsvWriter& csv, const BoundCheck& b) {
  csv.row({num(b.t), std::to_string(b.n), num(b.bound), num(b.worst_value), num(b.margin), b.pass ? "1" : "0"});
}

ScaleLadder ladder_for(const RunConfig& cfg, double epsilon) {
  ScaleParams p = cfg.scheduler_params();
  p.epsilon = epsilon;
  return build_ladder(p, cfg.t_target, cfg.max_steps);
}

// Largest |a - b| / max(|b|, tiny) over the two fields.
double relative_difference(const CorrelationField& a, const CorrelationField& b) {
  return max_abs_difference(a, b) / std::max(b.max_abs(), std::numeric_limits<double>::min());
}

std::vector<double> output_times(double t_end, double dt) {
  std::vector<double> times{0.0};
  for (double t : kmc::snapshot_schedule(t_end, dt)) {
    if (t > 0.0) times.push_back(t);
  }
  return times;
}

}  // namespace

int cmd_schedule(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto dir = prepare_output(cfg);
  const ScaleParams p = cfg.scheduler_params();
  const ScaleLadder ladder = build_ladder(p, cfg.t_target, cfg.max_steps);

  CsvWriter csv(dir / "ladder.csv", "n,theta_star,delta,tau,s_n,cumulative");
  json certs = json::array();
  bool all_valid = true;
  for (std::size_t n = 0; n < ladder.size(); ++n) {
    csv.row({std::to_string(n + 1), num(ladder.theta_star[n + 1]), num(ladder.deltas[n]), num(ladder.taus[n]),
             num(ladder.steps[n]), num(ladder.cumulative[n])});
    const double lo = ladder.theta_star[n];
    const Certificate c = norm_certificate(lo, lo + ladder.deltas[n], ladder.steps[n], p);
    all_valid = all_valid && c.valid;
    certs.push_back(to_json(c));
  }
  write_json(dir / "certificates.json", certs);

  // A larger epsilon must never need fewer steps.
  const double wider = 0.5 * (1.0 + cfg.epsilon);
  const ScaleLadder other = ladder_for(cfg, wider);
  const bool monotone = !(other.reached() && ladder.reached()) || other.size() >= ladder.size();

  json m = manifest_header("schedule", cfg);
  m["parameters"] = json{{"alpha", p.alpha}, {"mean_phi", p.mean_phi}, {"C", p.C}, {"epsilon", p.epsilon},
                         {"t_target", cfg.t_target}, {"max_steps", cfg.max_steps}};
  m["status"] = std::string(to_string(ladder.status));
  m["steps"] = ladder.size();
  m["reached_time"] = ladder.reached_time();
  m["all_certificates_valid"] = all_valid;
  m["epsilon_comparison"] = json{{"epsilon", wider},
                                 {"steps", other.size()},
                                 {"status", std::string(to_string(other.status))},
                                 {"monotone", monotone}};
  write_json(dir / "manifest.json", m);

  log << fmt::format("ladder: {} steps, status {}, reached t = {}\n", ladder.size(), to_string(ladder.status),
                     num(ladder.reached_time()));
  if (!ladder.reached()) return kExitAnomaly;
  return all_valid ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const TorusDomain domain = cfg.domain();
  const KernelSpec kernels = cfg.kernels();
  const bool lattice_moves = cfg.proposals == "lattice";
  kmc::EngineOptions options;
  double alpha = kernels.alpha;
  if (lattice_moves) {
    const Lattice lat = cfg.lattice();
    if (std::abs(lat.side_length() - cfg.side_length) > 1e-9 * cfg.side_length) {
      throw ConfigError("lattice proposals need sites_per_axis * spacing equal to domain.side_length");
    }
    options.lattice = kmc::LatticeMoves{lat, cfg.exclusion};
    alpha = LatticeKernels(lat, kernels).alpha;
  }

  kmc::InitialSampler sampler;
  if (cfg.initial_kind == "poisson") {
    sampler = [&](CounterRng& r) { return kmc::poisson_configuration(domain, cfg.kappa, r); };
  } else if (cfg.initial_kind == "jittered-grid") {
    sampler = [&](CounterRng& r) { return kmc::jittered_grid_configuration(domain, cfg.kappa, cfg.jitter, r); };
  } else if (cfg.initial_kind == "lattice-uniform") {
    if (!lattice_moves) throw ConfigError("initial.kind lattice-uniform requires dynamics.proposals = lattice");
    sampler = [&](CounterRng& r) {
      return kmc::lattice_uniform_configuration(options.lattice->lattice, cfg.particles, cfg.exclusion, r);
    };
  } else {
    throw ConfigError("initial.kind custom-field only applies to the hierarchy command");
  }

  const auto results = kmc::run_replicas(domain, kernels, sampler, cfg.t_end, cfg.snapshot_dt, cfg.seed, cfg.replicas,
                                         cfg.threads, options);
  const auto dir = prepare_output(cfg);

  // Particle number is conserved along every trajectory.
  bool conserved = true;
  kmc::EventCounters counters;
  for (const auto& r : results) {
    counters += r.counters;
    for (const auto& s : r.snapshots) conserved = conserved && s.config.size() == r.snapshots.front().config.size();
  }

  if (cfg.write_snapshots) {
    std::string header = "t,particle_id,x";
    if (cfg.dimension >= 2) header += ",y";
    if (cfg.dimension >= 3) header += ",z";
    std::ofstream out(dir / "snapshots.csv");
    out << header << '\n';
    for (const auto& s : results.front().snapshots) {
      for (const auto& p : s.config.particles()) {
        out << num(s.time) << ',' << p.id;
        for (int c = 0; c < cfg.dimension; ++c) out << ',' << num(p.position[static_cast<std::size_t>(c)]);
        out << '\n';
      }
    }
    if (!out) throw std::runtime_error("write failed for snapshots.csv");
  }

  const double r_max = cfg.r_max > 0.0 ? cfg.r_max : std::min(0.5 * cfg.side_length, 4.0 * kernels.cutoff_radius);
  const auto edges = uniform_bin_edges(r_max, cfg.bins);
  const double C = cfg.initial_C();

  CsvWriter moments(dir / "moments.csv", "t,n,bin_lo,bin_hi,k_hat,stderr");
  CsvWriter bounds(dir / "bounds.csv", "t,n,bound,worst_value,margin,pass");
  json checks = json::array();
  json variance = json::array();
  bool all_pass = conserved;
  const std::size_t n_times = results.front().snapshots.size();
  for (std::size_t j = 0; j < n_times; ++j) {
    const double t = results.front().snapshots[j].time;
    std::vector<Configuration> configs;
    configs.reserve(results.size());
    for (const auto& r : results) configs.push_back(r.snapshots[j].config);

    const MomentEstimate k1 = density_estimate(configs, domain, t);
    const MomentEstimate k2 = pair_correlation_estimate(configs, domain, edges, t);
    moments.row({num(t), "1", num(0.0), num(0.0), num(k1.values[0]), num(k1.stderrs[0])});
    for (std::size_t b = 0; b < k2.values.size(); ++b) {
      moments.row({num(t), "2", num(k2.bin_edges[b]), num(k2.bin_edges[b + 1]), num(k2.values[b]),
                   num(k2.stderrs[b])});
    }
    for (const auto* est : {&k1, &k2}) {
      const BoundCheck b = sub_poissonian_check(*est, C, alpha, t);
      bound_row(bounds, b);
      checks.push_back(bound_json(b));
      all_pass = all_pass && b.pass;
    }
    if (cfg.window > 0.0) {
      const VarianceCheck v = variance_positivity_check(k1, k2, cfg.window, cfg.dimension);
      variance.push_back(json{{"t", t}, {"window_side", v.window_side}, {"value", v.value},
                              {"std_error", v.std_error}, {"pass", v.pass}});
      all_pass = all_pass && v.pass;
    }
  }

  json m = manifest_header("simulate", cfg);
  m["replicas"] = cfg.replicas;
  m["threads"] = cfg.threads;
  m["replica_seed_rule"] = "seed XOR replica_index";
  m["domain"] = json{{"dimension", cfg.dimension}, {"side_length", cfg.side_length}};
  m["proposals"] = cfg.proposals;
  if (lattice_moves) {
    m["lattice"] = json{{"sites_per_axis", cfg.sites_per_axis}, {"spacing", cfg.spacing}, {"exclusion", cfg.exclusion}};
  }
  m["initial"] = json{{"kind", cfg.initial_kind}, {"kappa", cfg.kappa}, {"C", C}};
  m["kernels"] = to_json(kernels);
  m["attempt_rate_per_particle"] = alpha;
  m["truncation"] = json{{"jump_tail_fraction", kernels.a.tail_fraction()},
                         {"potential_tail_fraction", kernels.phi.tail_fraction()}};
  m["proposals_total"] = counters.proposals;
  m["acceptances_total"] = counters.acceptances;
  m["acceptance_ratio"] = counters.acceptance_ratio();
  m["estimator_r_max"] = r_max;
  m["particle_number_conserved"] = conserved;
  m["sub_poissonian_checks"] = checks;
  if (cfg.window > 0.0) m["variance_checks"] = variance;
  m["pass"] = all_pass;
  write_json(dir / "manifest.json", m);

  log << fmt::format("simulate: {} replicas, acceptance ratio {:.6f}, {}\n", cfg.replicas, counters.acceptance_ratio(),
                     all_pass ? "all checks pass" : "CHECK FAILED");
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_hierarchy(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Hierarchy h(cfg.lattice(), cfg.kernels());
  const double C = cfg.initial_C();
  const ClosureRule closure = cfg.closure_rule();

  CorrelationField k0 = [&] {
    if (cfg.initial_kind == "poisson") return CorrelationField::constant(h.lattice(), cfg.mode(), closure, cfg.qy_order, cfg.kappa);
    if (cfg.initial_kind != "custom-field") {
      throw ConfigError("hierarchy initial.kind must be poisson or custom-field");
    }
    CorrelationField f(h.lattice(), cfg.mode(), closure, cfg.qy_order);
    std::fill(f.order(1).begin(), f.order(1).end(), cfg.field_k1);
    std::fill(f.order(2).begin(), f.order(2).end(), cfg.field_k2);
    if (closure.n_max == 3) std::fill(f.order(3).begin(), f.order(3).end(), cfg.field_k1 * cfg.field_k2);
    f.freeze_closure_density();
    return f;
  }();

  const ScaleParams p = h.scale_params(C, cfg.epsilon);
  const bool interacting = h.mean_phi() > 0.0;
  auto scales_at = [&](double t) {
    const double lo = std::log(C) + h.alpha() * t;
    return ScalePair{lo, lo + (interacting ? delta_theta(lo, p) : 1.0)};
  };

  const auto dir = prepare_output(cfg);
  const auto times = output_times(cfg.hierarchy_t_end, cfg.output_dt);
  const bool use_taylor = cfg.integrator != "rk4";
  const bool use_rk4 = cfg.integrator != "taylor";

  json m = manifest_header("hierarchy", cfg);
  m["lattice"] = json{{"dimension", cfg.dimension}, {"sites_per_axis", cfg.sites_per_axis}, {"spacing", cfg.spacing}};
  m["field_mode"] = std::string(to_string(cfg.mode()));
  m["closure"] = json{{"kind", std::string(to_string(closure.kind))}, {"n_max", closure.n_max}};
  m["qy_order"] = cfg.qy_order;
  m["integrator"] = cfg.integrator;
  m["lattice_alpha"] = h.alpha();
  m["lattice_mean_phi"] = h.mean_phi();
  m["C"] = C;

  CsvWriter traj(dir / "trajectory.csv", "t,n,sep_index,value");
  CsvWriter diag(dir / "diagnostics.csv", "t,last_taylor_term,closure_tail_bound,norm_theta");
  CsvWriter bounds(dir / "bounds.csv", "t,n,bound,worst_value,margin,pass");

  json certs = json::array();
  json checks = json::array();
  bool all_pass = true;
  bool k0_exact = true;
  double worst_rel = 0.0;
  double last_term = std::numeric_limits<double>::quiet_NaN();

  auto record = [&](double t, const CorrelationField& k) {
    traj.row({num(t), "0", "0", num(k.k0)});
    for (int n = 1; n <= k.n_max(); ++n) {
      const auto& v = k.order(n);
      for (std::size_t i = 0; i < v.size(); ++i) traj.row({num(t), std::to_string(n), std::to_string(i), num(v[i])});
    }
    const double theta = scales_at(t).theta_low;
    diag.row({num(t), num(last_term), num(h.qy_tail_bound(k, theta)), num(scale_norm(k, theta).norm_value)});
    for (const BoundCheck& b : sub_poissonian_check(k, C, h.alpha(), t)) {
      bound_row(bounds, b);
      checks.push_back(bound_json(b));
      all_pass = all_pass && b.pass;
    }
    k0_exact = k0_exact && k.k0 == 1.0;
  };

  int code = kExitOk;
  CorrelationField cur = k0;
  CorrelationField rk = k0;
  try {
    record(0.0, use_taylor ? cur : rk);
    for (std::size_t j = 1; j < times.size(); ++j) {
      const double t_prev = times[j - 1];
      const double t_next = times[j];
      if (use_taylor) {
        double t = t_prev;
        while (t < t_next) {
          const ScalePair sc = scales_at(t);
          const double room = t_next - t;
          double step = 0.0;
          if (cfg.taylor_dt > 0.0) {
            step = std::min(cfg.taylor_dt, room);
          } else {
            const double horizon = horizon_T(sc.theta_high, sc.theta_low, p);
            step = std::min((1.0 - cfg.epsilon) * horizon, room);
          }
          TaylorResult r = taylor_semigroup_step(h, cur, step, cfg.taylor_order, Operator::Ldelta, sc);
          certs.push_back(to_json(r.certificate));
          cur = std::move(r.field);
          last_term = r.last_term;
          if (!cur.all_finite() || cur.max_abs() > cfg.overflow_guard) throw OverflowGuardTripped(t + step, cur.max_abs());
          t = (room - step <= 1e-15 * std::max(1.0, t_next)) ? t_next : t + step;
        }
      }
      if (use_rk4) rk = integrate(h, rk, t_next - t_prev, std::min(cfg.rk4_dt, t_next - t_prev), Operator::Ldelta, cfg.overflow_guard);
      if (use_taylor && use_rk4) worst_rel = std::max(worst_rel, relative_difference(cur, rk));
      record(t_next, use_taylor ? cur : rk);
    }
  } catch (const HorizonExceeded& e) {
    m["refused_step"] = to_json(e.certificate());
    log << "refused: " << e.what() << '\n';
    code = kExitCheckFailed;
  } catch (const OverflowGuardTripped& e) {
    m["overflow"] = json{{"t", e.time()}, {"value", e.value()}};
    log << "overflow guard: " << e.what() << '\n';
    code = kExitAnomaly;
  }

  if (use_taylor && use_rk4) {
    m["taylor_vs_rk4_relative_difference"] = worst_rel;
    m["taylor_vs_rk4_tolerance"] = 1e-6;
    all_pass = all_pass && worst_rel <= 1e-6;
  }
  m["certificates"] = certs;
  m["k0_exactly_one"] = k0_exact;
  m["free_solution_domination"] = checks;
  m["pass"] = all_pass && k0_exact && code == kExitOk;
  write_json(dir / "manifest.json", m);

  if (code != kExitOk) return code;
  log << fmt::format("hierarchy: {} output times, {} series steps, {}\n", times.size(), certs.size(),
                     all_pass && k0_exact ? "all checks pass" : "CHECK FAILED");
  return all_pass && k0_exact ? kExitOk : kExitCheckFailed;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto dir = prepare_output(cfg);
  const auto results = run_all_suites(cfg);
  CsvWriter csv(dir / "validate.csv", "suite,pass,measured,threshold");
  json doc = json::array();
  bool all = true;
  for (const auto& r : results) {
    csv.row({r.name, r.pass ? "1" : "0", num(r.measured), num(r.threshold)});
    doc.push_back(json{{"suite", r.name},
                       {"pass", r.pass},
                       {"measured", r.measured},
                       {"threshold", r.threshold},
                       {"detail", r.detail}});
    log << fmt::format("{:<26} {}  measured {}  threshold {}\n", r.name, r.pass ? "pass" : "FAIL", num(r.measured),
                       num(r.threshold));
    all = all && r.pass;
  }
  write_json(dir / "validate.json", doc);
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace kawasaki::cli
