#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <kawasaki/kernels.hpp>
#include <kawasaki/torus.hpp>

#include "run_config.hpp"

namespace kawasaki::cli {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

using KernelFn = std::function<double(const Point&)>;

/// max |f(min_image(p, q)) - f(min_image(q, p))| over random pairs, for both functions.
SuiteResult kernel_symmetry_suite(const KernelFn& a, const KernelFn& phi, const TorusDomain& domain, int trials,
                                  std::uint64_t seed);
SuiteResult repulsion_integral_suite(const KernelSpec& kernels);
SuiteResult detailed_balance_suite(const KernelSpec& kernels, const TorusDomain& domain, std::uint64_t seed);
SuiteResult cell_list_suite(const KernelSpec& kernels, const TorusDomain& domain, double kappa, std::uint64_t seed);
SuiteResult poisson_invariance_suite(const RunConfig& cfg);
SuiteResult oracle_equivalence_suite(const RunConfig& cfg);
SuiteResult stationary_gibbs_suite(const RunConfig& cfg);
SuiteResult probability_conservation_suite(const RunConfig& cfg, std::uint64_t seed);
SuiteResult lambert_residual_suite(std::uint64_t seed);
SuiteResult horizon_argmax_suite(std::uint64_t seed);
SuiteResult ladder_suite(const RunConfig& cfg);
SuiteResult composition_suite(const RunConfig& cfg);

/// Every suite above on the configured model.
std::vector<SuiteResult> run_all_suites(const RunConfig& cfg);

}  // namespace kawasaki::cli
