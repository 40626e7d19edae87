#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace kawasaki::cli {
namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long i = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string parse_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> choices) {
  for (const char* c : choices) {
    if (v == c) return v;
  }
  std::string msg = key + ": '" + v + "' is not one of";
  for (const char* c : choices) msg += std::string(" ") + c;
  throw ConfigError(msg);
}

int to_int(const std::string& key, long long v) {
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw ConfigError(key + ": integer out of range");
  return static_cast<int>(v);
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [&t](const char* k, double RunConfig::*m) {
      t[k] = [m](RunConfig& c, const std::string& key, const std::string& v) { c.*m = parse_double(key, v); };
    };
    auto num = [&t](const char* k, int RunConfig::*m) {
      t[k] = [m](RunConfig& c, const std::string& key, const std::string& v) { c.*m = to_int(key, parse_int(key, v)); };
    };
    auto flag = [&t](const char* k, bool RunConfig::*m) {
      t[k] = [m](RunConfig& c, const std::string& key, const std::string& v) { c.*m = parse_bool(key, v); };
    };
    auto profile = [&t](const std::string& prefix, ProfileConfig RunConfig::*m, const char* strength) {
      t["kernels." + prefix + "_family"] = [m](RunConfig& c, const std::string& key, const std::string& v) {
        (c.*m).family = parse_choice(key, v, {"top-hat", "truncated-gaussian", "truncated-exponential"});
      };
      t["kernels." + prefix + "_range"] = [m](RunConfig& c, const std::string& key, const std::string& v) {
        (c.*m).range = parse_double(key, v);
      };
      t["kernels." + prefix + "_" + strength] = [m](RunConfig& c, const std::string& key, const std::string& v) {
        (c.*m).amplitude = parse_double(key, v);
        (c.*m).amplitude_given = true;
        (c.*m).integral_given = false;
      };
      t["kernels." + prefix + "_integral"] = [m](RunConfig& c, const std::string& key, const std::string& v) {
        (c.*m).integral = parse_double(key, v);
        (c.*m).integral_given = true;
        (c.*m).amplitude_given = false;
      };
    };

    num("domain.dimension", &RunConfig::dimension);
    dbl("domain.side_length", &RunConfig::side_length);
    num("lattice.sites_per_axis", &RunConfig::sites_per_axis);
    dbl("lattice.spacing", &RunConfig::spacing);
    profile("jump", &RunConfig::jump, "amplitude");
    profile("phi", &RunConfig::phi, "height");
    flag("kernels.exclude_self_term", &RunConfig::exclude_self_term);

    t["initial.kind"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.initial_kind = parse_choice(key, v, {"poisson", "jittered-grid", "lattice-uniform", "custom-field"});
    };
    dbl("initial.kappa", &RunConfig::kappa);
    dbl("initial.jitter", &RunConfig::jitter);
    dbl("initial.C", &RunConfig::C);
    num("initial.particles", &RunConfig::particles);
    dbl("initial.field_k1", &RunConfig::field_k1);
    dbl("initial.field_k2", &RunConfig::field_k2);

    dbl("dynamics.t_end", &RunConfig::t_end);
    dbl("dynamics.snapshot_dt", &RunConfig::snapshot_dt);
    num("dynamics.replicas", &RunConfig::replicas);
    t["dynamics.seed"] = [](RunConfig& c, const std::string& key, const std::string& v) { c.seed = parse_u64(key, v); };
    num("dynamics.threads", &RunConfig::threads);
    t["dynamics.proposals"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.proposals = parse_choice(key, v, {"continuum", "lattice"});
    };
    flag("dynamics.exclusion", &RunConfig::exclusion);
    flag("dynamics.write_snapshots", &RunConfig::write_snapshots);

    num("estimators.bins", &RunConfig::bins);
    dbl("estimators.r_max", &RunConfig::r_max);
    dbl("estimators.window", &RunConfig::window);

    t["hierarchy.mode"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.field_mode = parse_choice(key, v, {"translation-invariant", "full-grid"});
    };
    num("hierarchy.n_max", &RunConfig::n_max);
    num("hierarchy.qy_order", &RunConfig::qy_order);
    t["hierarchy.closure"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.closure = parse_choice(key, v, {"poisson-tail", "zero-tail"});
    };
    t["hierarchy.integrator"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.integrator = parse_choice(key, v, {"taylor", "rk4", "both"});
    };
    dbl("hierarchy.dt", &RunConfig::rk4_dt);
    num("hierarchy.taylor_order", &RunConfig::taylor_order);
    dbl("hierarchy.taylor_dt", &RunConfig::taylor_dt);
    dbl("hierarchy.t_end", &RunConfig::hierarchy_t_end);
    dbl("hierarchy.output_dt", &RunConfig::output_dt);
    dbl("hierarchy.overflow_guard", &RunConfig::overflow_guard);

    dbl("scheduler.alpha", &RunConfig::sched_alpha);
    dbl("scheduler.mean_phi", &RunConfig::sched_mean_phi);
    dbl("scheduler.C", &RunConfig::sched_C);
    dbl("scheduler.epsilon", &RunConfig::epsilon);
    dbl("scheduler.t_target", &RunConfig::t_target);
    t["scheduler.max_steps"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.max_steps = parse_u64(key, v);
    };

    t["output.directory"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };
    return t;
  }();
  return table;
}

RadialProfile build_profile(const ProfileConfig& p, int dimension, const char* what) {
  try {
    const KernelFamily fam = parse_kernel_family(p.family);
    if (p.integral_given) {
      const RadialProfile unit(fam, 1.0, p.range, dimension);
      return RadialProfile(fam, p.integral / unit.integral(), p.range, dimension);
    }
    return RadialProfile(fam, p.amplitude, p.range, dimension);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

TorusDomain RunConfig::domain() const { return TorusDomain(dimension, side_length); }
Lattice RunConfig::lattice() const { return Lattice(dimension, sites_per_axis, spacing); }

KernelSpec RunConfig::kernels() const {
  try {
    return KernelSpec(build_profile(jump, dimension, "jump kernel"), build_profile(phi, dimension, "potential"),
                      exclude_self_term);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScaleParams RunConfig::scheduler_params() const {
  ScaleParams p;
  p.alpha = sched_alpha;
  p.mean_phi = sched_mean_phi;
  p.C = sched_C;
  p.epsilon = epsilon;
  return p;
}

ClosureRule RunConfig::closure_rule() const { return ClosureRule{parse_closure_kind(closure), n_max}; }
FieldMode RunConfig::mode() const { return parse_field_mode(field_mode); }

void RunConfig::validate() const {
  require(dimension >= 1 && dimension <= 3, "domain.dimension must be 1, 2 or 3");
  require(side_length > 0.0, "domain.side_length must be positive");
  require(sites_per_axis >= 2 && sites_per_axis <= 4096, "lattice.sites_per_axis must lie in [2, 4096]");
  require(spacing > 0.0, "lattice.spacing must be positive");
  require(jump.range > 0.0 && phi.range > 0.0, "kernel ranges must be positive");
  require(jump.amplitude_given ? jump.amplitude > 0.0 : jump.integral > 0.0, "jump kernel strength must be positive");
  require(phi.amplitude_given ? phi.amplitude >= 0.0 : phi.integral >= 0.0, "potential strength must be non-negative");
  require(kappa >= 0.0, "initial.kappa must be non-negative");
  require(jitter >= 0.0 && jitter <= 1.0, "initial.jitter must lie in [0, 1]");
  require(C >= 0.0, "initial.C must be non-negative");
  require(initial_C() > 0.0, "initial bound C (or kappa) must be positive");
  require(particles >= 1, "initial.particles must be at least 1");
  require(field_k1 >= 0.0 && field_k2 >= 0.0, "custom field values must be non-negative");
  require(t_end > 0.0, "dynamics.t_end must be positive");
  require(snapshot_dt > 0.0, "dynamics.snapshot_dt must be positive");
  require(replicas >= 1, "dynamics.replicas must be at least 1");
  require(threads >= 1, "dynamics.threads must be at least 1");
  require(bins >= 1, "estimators.bins must be at least 1");
  require(r_max >= 0.0 && r_max <= 0.5 * side_length, "estimators.r_max must lie in [0, L/2]");
  require(window >= 0.0 && window <= side_length, "estimators.window must lie in [0, L]");
  require(n_max == 2 || n_max == 3, "hierarchy.n_max must be 2 or 3");
  require(qy_order >= 0 && qy_order <= 2, "hierarchy.qy_order must be 0, 1 or 2");
  require(rk4_dt > 0.0, "hierarchy.dt must be positive");
  require(taylor_order >= 1 && taylor_order <= 500, "hierarchy.taylor_order must lie in [1, 500]");
  require(taylor_dt >= 0.0, "hierarchy.taylor_dt must be non-negative");
  require(hierarchy_t_end > 0.0, "hierarchy.t_end must be positive");
  require(output_dt > 0.0, "hierarchy.output_dt must be positive");
  require(overflow_guard > 0.0, "hierarchy.overflow_guard must be positive");
  require(sched_alpha > 0.0, "scheduler.alpha must be positive");
  require(sched_mean_phi > 0.0, "scheduler.mean_phi must be positive");
  require(sched_C > 0.0, "scheduler.C must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "scheduler.epsilon must lie in (0, 1)");
  require(t_target > 0.0, "scheduler.t_target must be positive");
  require(max_steps >= 1, "scheduler.max_steps must be at least 1");
  // constructing the derived objects runs their own checks
  (void)domain();
  try {
    (void)lattice();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
  (void)kernels();
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(dotted_key);
  if (it == table.end()) throw ConfigError("unknown configuration key '" + dotted_key + "'");
  it->second(cfg, dotted_key, value);
}

void load_ini(RunConfig& cfg, const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' lies outside any [section]");
    for (const auto& [key, leaf] : body) {
      if (!leaf.empty()) throw ConfigError("nested key under '" + section + "." + key + "'");
      apply_setting(cfg, section + "." + key, leaf.get_value<std::string>());
    }
  }
}

}  // namespace kawasaki::cli
