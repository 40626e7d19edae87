#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <kawasaki/correlation_field.hpp>
#include <kawasaki/kernels.hpp>
#include <kawasaki/lattice.hpp>
#include <kawasaki/scheduler.hpp>
#include <kawasaki/torus.hpp>

namespace kawasaki::cli {

/// Raised for malformed or out-of-range configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProfileConfig {
  std::string family = "top-hat";
  double range = 1.0;
  // Exactly one of amplitude / integral is used; integral rescales the
  // amplitude so the profile integrates to the given value.
  double amplitude = 0.0;
  double integral = 0.0;
  bool integral_given = false;
  bool amplitude_given = false;
};

struct RunConfig {
  // [domain]
  int dimension = 1;
  double side_length = 200.0;
  // [lattice]
  int sites_per_axis = 32;
  double spacing = 0.25;
  // [kernels]
  ProfileConfig jump{"top-hat", 1.125, 0.0, 1.0, true, false};
  ProfileConfig phi{"top-hat", 0.375, 0.0, 0.5, true, false};
  bool exclude_self_term = false;
  // [initial]
  std::string initial_kind = "poisson";  // poisson | jittered-grid | lattice-uniform | custom-field
  double kappa = 0.3;
  double jitter = 0.5;
  double C = 0.0;  // 0: take kappa
  int particles = 2;  // lattice-uniform
  double field_k1 = 0.3;  // custom-field
  double field_k2 = 0.09;
  // [dynamics]
  double t_end = 2.0;
  double snapshot_dt = 0.5;
  int replicas = 100;
  std::uint64_t seed = 20261019;
  int threads = 1;
  std::string proposals = "continuum";  // continuum | lattice
  bool exclusion = true;
  bool write_snapshots = true;
  // [estimators]
  int bins = 20;
  double r_max = 0.0;  // 0: min(L/2, 4 * cutoff)
  double window = 0.0;  // 0: no variance check
  // [hierarchy]
  std::string field_mode = "translation-invariant";
  int n_max = 2;
  int qy_order = 1;
  std::string closure = "poisson-tail";
  std::string integrator = "taylor";  // taylor | rk4 | both
  double rk4_dt = 0.01;
  int taylor_order = 40;
  double taylor_dt = 0.0;  // 0: steps chosen from the horizon
  double hierarchy_t_end = 2.0;
  double output_dt = 0.25;
  double overflow_guard = 1e12;
  // [scheduler]
  double sched_alpha = 0.2;
  double sched_mean_phi = 0.5;
  double sched_C = 0.3;
  double epsilon = 0.1;
  double t_target = 10.0;
  std::uint64_t max_steps = 1'000'000;
  // [output]
  std::filesystem::path out_dir = "out";

  [[nodiscard]] double initial_C() const { return C > 0.0 ? C : kappa; }
  [[nodiscard]] TorusDomain domain() const;
  [[nodiscard]] Lattice lattice() const;
  [[nodiscard]] KernelSpec kernels() const;
  [[nodiscard]] ScaleParams scheduler_params() const;
  [[nodiscard]] ClosureRule closure_rule() const;
  [[nodiscard]] FieldMode mode() const;

  /// Range checks for every field; throws ConfigError.
  void validate() const;
};

/// Every accepted key in "section.key" form.
[[nodiscard]] const std::vector<std::string>& known_keys();

/// Applies one "section.key=value" assignment; unknown keys or bad values throw ConfigError.
void apply_setting(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
/// Reads an INI file on top of cfg.
void load_ini(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace kawasaki::cli
