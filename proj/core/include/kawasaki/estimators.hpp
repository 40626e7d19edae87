#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kawasaki/configuration.hpp"
#include "kawasaki/correlation_field.hpp"
#include "kawasaki/torus.hpp"

namespace kawasaki {

/// Replica-averaged correlation estimate at one time. For order 1 there is a
/// single value (or one per cell for the gridded variant); for order 2 one
/// value per radial bin, or per ordered pair of cells for the gridded variant.
struct MomentEstimate {
  int order = 1;
  double time = 0.0;
  std::size_t sample_count = 0;
  std::vector<double> bin_edges;  // radial estimates only
  std::vector<double> values;
  std::vector<double> stderrs;
};

struct PairHistogram {
  std::vector<double> edges;
  std::vector<double> counts;  // ordered pairs per bin
  std::vector<double> shell_volumes;
};

/// Volume of {lo <= |x| < hi} in R^d.
[[nodiscard]] double shell_volume(int dimension, double lo, double hi);
/// `bins` equal bins on [0, r_max].
[[nodiscard]] std::vector<double> uniform_bin_edges(double r_max, int bins);
/// Ordered-pair distance histogram of one configuration. Throws if the edges
/// are not strictly increasing or reach past L/2.
[[nodiscard]] PairHistogram pair_histogram(const Configuration& config, const TorusDomain& domain,
                                           std::span<const double> edges);

/// k1 = mean(N) / |Lambda| with the replica standard error (0 for a single replica).
[[nodiscard]] MomentEstimate density_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain,
                                              double time = 0.0);
/// k2(r) = mean ordered-pair count in the bin / (|Lambda| shell volume).
[[nodiscard]] MomentEstimate pair_correlation_estimate(std::span<const Configuration> snapshots,
                                                       const TorusDomain& domain, std::span<const double> edges,
                                                       double time = 0.0);

/// Gridded variants for data without translation invariance: the torus is cut
/// into cells_per_axis^d cells; k1 per cell and k2 per ordered cell pair
/// (index a + cells * b).
[[nodiscard]] MomentEstimate density_profile_estimate(std::span<const Configuration> snapshots,
                                                      const TorusDomain& domain, int cells_per_axis,
                                                      double time = 0.0);
[[nodiscard]] MomentEstimate pair_grid_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain,
                                                int cells_per_axis, double time = 0.0);

struct BoundCheck {
  double t = 0.0;
  int n = 1;
  double bound = 0.0;        // C^n e^{n t alpha}
  double worst_value = 0.0;  // entry closest to (or furthest past) the bound
  double margin = 0.0;       // bound - worst_value
  bool pass = true;
};

/// 0 <= k <= C^n e^{n t alpha} for every entry, each with 3 standard errors of slack.
[[nodiscard]] BoundCheck sub_poissonian_check(const MomentEstimate& estimate, double C, double alpha, double t);
/// Same bound for orders 1..n_max of a deterministic field, absolute slack 1e-8.
[[nodiscard]] std::vector<BoundCheck> sub_poissonian_check(const CorrelationField& field, double C, double alpha,
                                                           double t);

struct VarianceCheck {
  double window_side = 0.0;
  double value = 0.0;  // Var(N) in the window implied by k1 and k2
  double std_error = 0.0;
  bool pass = true;
};

/// Var(N) = int int k2 + int k1 - (int k1)^2 over a cube of side w anchored
/// at the origin. The radial k2 is taken piecewise constant on its bins and
/// must cover every distance inside the window. Passes iff value >= -3 stderr.
[[nodiscard]] VarianceCheck variance_positivity_check(const MomentEstimate& k1, const MomentEstimate& k2,
                                                      double window_side, int dimension);
/// Deterministic form with exact k1 and radial k2; passes iff value >= -1e-8.
[[nodiscard]] VarianceCheck variance_positivity_check(double k1, const std::function<double(double)>& k2,
                                                      double window_side, int dimension);

}  // namespace kawasaki
