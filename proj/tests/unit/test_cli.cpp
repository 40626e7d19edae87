#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "output.hpp"
#include "run_config.hpp"
#include "validation.hpp"

using namespace kawasaki;
using namespace kawasaki::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kawasaki_cli_tests_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(RunConfig{}.validate()); }

TEST(Config, UnknownKeysAreRejected) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "dynamics.speed", "3"), ConfigError);
  EXPECT_THROW(apply_setting(c, "replicas", "3"), ConfigError);
}

TEST(Config, BadValuesAreRejected) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "dynamics.replicas", "many"), ConfigError);
  EXPECT_THROW(apply_setting(c, "hierarchy.closure", "mean-field"), ConfigError);
  apply_setting(c, "initial.kappa", "-0.3");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, IniFileAndCommandLineLayering) {
  const fs::path dir = scratch("ini");
  const fs::path ini = write_file(dir / "run.ini",
                                  "; comment\n[dynamics]\nreplicas = 7\nseed = 11\n\n[kernels]\nphi_height = 0.25\n");
  RunConfig c;
  load_ini(c, ini);
  EXPECT_EQ(c.replicas, 7);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_TRUE(c.phi.amplitude_given);
  apply_setting(c, "dynamics.replicas", "9");
  EXPECT_EQ(c.replicas, 9);
  EXPECT_NEAR(c.kernels().phi.amplitude(), 0.25, 0);
}

TEST(Config, IniRejectsStrayKeysAndSections) {
  const fs::path dir = scratch("ini_bad");
  RunConfig c;
  EXPECT_THROW(load_ini(c, write_file(dir / "a.ini", "[dynamics]\nwarp = 1\n")), ConfigError);
  EXPECT_THROW(load_ini(c, write_file(dir / "b.ini", "[nowhere]\nkey = 1\n")), ConfigError);
  EXPECT_THROW(load_ini(c, write_file(dir / "c.ini", "orphan = 1\n")), ConfigError);
  EXPECT_THROW(load_ini(c, dir / "missing.ini"), ConfigError);
}

TEST(Config, IntegralOptionFixesKernelMass) {
  RunConfig c;
  const KernelSpec k = c.kernels();
  EXPECT_NEAR(k.alpha, 1.0, 1e-14);
  EXPECT_NEAR(k.mean_phi, 0.5, 1e-14);
}

TEST(Output, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) EXPECT_EQ(std::stod(num(v)), v);
}

TEST(Schedule, DemoWritesLadderAndExitsCleanly) {
  RunConfig c;
  c.out_dir = scratch("schedule");
  std::ostringstream log;
  EXPECT_EQ(cmd_schedule(c, log), kExitOk);
  EXPECT_EQ(first_line(c.out_dir / "ladder.csv"), "n,theta_star,delta,tau,s_n,cumulative");
  EXPECT_TRUE(fs::exists(c.out_dir / "certificates.json"));
  const auto m = json::parse(std::ifstream(c.out_dir / "manifest.json"));
  EXPECT_EQ(m["steps"], 18);
  EXPECT_TRUE(m["epsilon_comparison"]["monotone"].get<bool>());
  EXPECT_NE(log.str().find("18 steps"), std::string::npos);
}

TEST(Schedule, ZeroTargetIsAConfigError) {
  RunConfig c;
  c.t_target = 0.0;
  c.out_dir = scratch("schedule_zero");
  std::ostringstream log;
  EXPECT_THROW((void)cmd_schedule(c, log), ConfigError);
}

TEST(Schedule, StepCapIsAnAnomaly) {
  RunConfig c;
  c.sched_alpha = 1.0;
  c.sched_mean_phi = 1.0;
  c.sched_C = 1.0;
  c.max_steps = 500;
  c.out_dir = scratch("schedule_cap");
  std::ostringstream log;
  EXPECT_EQ(cmd_schedule(c, log), kExitAnomaly);
}

TEST(Simulate, FreeDemoPassesAndWritesArtifacts) {
  RunConfig c;
  c.phi.integral = 0.0;
  c.kappa = 0.5;
  c.r_max = 4.5;
  c.out_dir = scratch("simulate_free");
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(c, log), kExitOk);
  EXPECT_EQ(first_line(c.out_dir / "snapshots.csv"), "t,particle_id,x");
  EXPECT_EQ(first_line(c.out_dir / "moments.csv"), "t,n,bin_lo,bin_hi,k_hat,stderr");
  EXPECT_EQ(first_line(c.out_dir / "bounds.csv"), "t,n,bound,worst_value,margin,pass");
  const auto m = json::parse(std::ifstream(c.out_dir / "manifest.json"));
  EXPECT_EQ(m["seed"], c.seed);
  EXPECT_DOUBLE_EQ(m["acceptance_ratio"].get<double>(), 1.0);
  EXPECT_TRUE(m["particle_number_conserved"].get<bool>());
  EXPECT_EQ(m["sub_poissonian_checks"].size(), 2u * 5u);
}

TEST(Simulate, RepulsionDepletesClosePairs) {
  RunConfig c;
  c.t_end = 4.0;
  c.snapshot_dt = 4.0;
  c.replicas = 200;
  c.r_max = 0.3;
  c.bins = 1;
  c.out_dir = scratch("simulate_repulsive");
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(c, log), kExitOk);
  std::ifstream in(c.out_dir / "moments.csv");
  std::string line, last;
  while (std::getline(in, line)) last = line;
  // t,n,lo,hi,k_hat,stderr for the close-pair bin at the final time
  std::stringstream ss(last);
  std::string cell;
  std::vector<double> cells;
  while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[1], 2.0);
  EXPECT_LT(cells[4] + 3.0 * cells[5], 0.09);
}

TEST(Simulate, CustomFieldIsRejected) {
  RunConfig c;
  c.initial_kind = "custom-field";
  c.out_dir = scratch("simulate_custom");
  std::ostringstream log;
  EXPECT_THROW((void)cmd_simulate(c, log), ConfigError);
}

TEST(Hierarchy, FreeDemoIsConstant) {
  RunConfig c;
  c.phi.integral = 0.0;
  c.kappa = 0.5;
  c.out_dir = scratch("hierarchy_free");
  std::ostringstream log;
  EXPECT_EQ(cmd_hierarchy(c, log), kExitOk);
  std::ifstream in(c.out_dir / "trajectory.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,n,sep_index,value");
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    const auto n = line.substr(line.find(',') + 1, 1);
    const double v = std::stod(line.substr(last_comma + 1));
    const double expect = n == "0" ? 1.0 : (n == "1" ? 0.5 : 0.25);
    EXPECT_NEAR(v, expect, 1e-12) << line;
  }
  EXPECT_EQ(first_line(c.out_dir / "diagnostics.csv"), "t,last_taylor_term,closure_tail_bound,norm_theta");
}

TEST(Hierarchy, TaylorAgreesWithRk4OnTheInteractingDemo) {
  RunConfig c;
  c.integrator = "both";
  c.rk4_dt = 0.005;
  c.out_dir = scratch("hierarchy_both");
  std::ostringstream log;
  EXPECT_EQ(cmd_hierarchy(c, log), kExitOk);
  const auto m = json::parse(std::ifstream(c.out_dir / "manifest.json"));
  EXPECT_LE(m["taylor_vs_rk4_relative_difference"].get<double>(), 1e-6);
  EXPECT_TRUE(m["k0_exactly_one"].get<bool>());
  for (const auto& cert : m["certificates"]) EXPECT_TRUE(cert["valid"].get<bool>());
}

TEST(Hierarchy, OversizedFixedStepIsRefused) {
  RunConfig c;
  c.taylor_dt = 1.0;
  c.output_dt = 1.0;
  c.out_dir = scratch("hierarchy_refused");
  std::ostringstream log;
  EXPECT_EQ(cmd_hierarchy(c, log), kExitCheckFailed);
  const auto m = json::parse(std::ifstream(c.out_dir / "manifest.json"));
  ASSERT_TRUE(m.contains("refused_step"));
  EXPECT_FALSE(m["refused_step"]["valid"].get<bool>());
  EXPECT_GE(m["refused_step"]["ratio"].get<double>(), 1.0);
}

TEST(Validate, DefaultsPassAndReportEverySuite) {
  RunConfig c;
  c.out_dir = scratch("validate");
  std::ostringstream log;
  EXPECT_EQ(cmd_validate(c, log), kExitOk);
  EXPECT_EQ(first_line(c.out_dir / "validate.csv"), "suite,pass,measured,threshold");
  const auto doc = json::parse(std::ifstream(c.out_dir / "validate.json"));
  EXPECT_EQ(doc.size(), 12u);
}

TEST(Validate, SelfTermExclusionKeepsDetailedBalance) {
  RunConfig c;
  c.exclude_self_term = true;
  const SuiteResult r = detailed_balance_suite(c.kernels(), c.domain(), c.seed);
  EXPECT_TRUE(r.pass);
}

TEST(Validate, BrokenKernelSymmetryFails) {
  RunConfig c;
  const KernelSpec k = c.kernels();
  auto lopsided = [&](const Point& v) { return v[0] > 0.0 ? k.jump(v) : 0.5 * k.jump(v); };
  auto phi = [&](const Point& v) { return k.potential(v); };
  TorusDomain small(1, 4.0);
  const SuiteResult r = kernel_symmetry_suite(lopsided, phi, small, 2000, 1);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.measured, 0.0);
}
