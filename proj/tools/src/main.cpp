#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> settings;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "INI configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out_dir, "output directory (overrides output.directory)");
  sub->add_option("--seed", f.seed, "base seed (overrides dynamics.seed)");
  sub->add_option("--threads", f.threads, "worker threads (overrides dynamics.threads)");
  sub->add_option("--set", f.settings, "section.key=value, repeatable; applied after the file")->take_all();
}

kawasaki::cli::RunConfig build_config(const CommonFlags& f) {
  using namespace kawasaki::cli;
  RunConfig cfg;
  if (!f.config_path.empty()) load_ini(cfg, f.config_path);
  for (const auto& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kawasaki::cli;
  CLI::App app{"Kawasaki jump dynamics with repulsion: simulator, correlation hierarchy and scale scheduler"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* schedule = app.add_subcommand("schedule", "build the continuation ladder and its certificates");
  auto* simulate = app.add_subcommand("simulate", "run kinetic Monte Carlo replicas and estimate correlations");
  auto* hierarchy = app.add_subcommand("hierarchy", "integrate the truncated correlation hierarchy on a lattice");
  auto* validate = app.add_subcommand("validate", "run the invariant suites");
  for (auto* sub : {schedule, simulate, hierarchy, validate}) add_common(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = build_config(flags);
    if (schedule->parsed()) return cmd_schedule(cfg, std::cout);
    if (simulate->parsed()) return cmd_simulate(cfg, std::cout);
    if (hierarchy->parsed()) return cmd_hierarchy(cfg, std::cout);
    return cmd_validate(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}
