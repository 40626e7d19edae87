#pragma once

#include <ostream>

#include "run_config.hpp"

namespace kawasaki::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitCheckFailed = 2,
  kExitAnomaly = 3,
};

// Each command validates `cfg`, writes its artifacts under cfg.out_dir and
// prints a short human summary to `log`.

int cmd_schedule(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_hierarchy(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

}  // namespace kawasaki::cli
