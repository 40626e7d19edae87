#include "kawasaki/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kawasaki {
namespace {

constexpr double kSigmas = 3.0;
constexpr double kDeterministicSlack = 1e-8;

void validate_edges(std::span<const double> edges, double half_side) {
  if (edges.size() < 2) throw std::invalid_argument("need at least one bin");
  if (edges.front() < 0.0) throw std::invalid_argument("bin edges must be non-negative");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("bin edges must be strictly increasing");
  }
  if (edges.back() > half_side * (1.0 + 1e-12)) {
    throw std::invalid_argument("bins reach past half the box side, where min-image distances are ambiguous");
  }
}

// Bin holding r, or npos. The last bin includes its upper edge.
std::size_t bin_of(std::span<const double> edges, double r) {
  if (r < edges.front() || r > edges.back()) return std::numeric_limits<std::size_t>::max();
  const auto it = std::upper_bound(edges.begin(), edges.end(), r);
  const auto b = static_cast<std::size_t>(it - edges.begin());
  return std::min(b, edges.size() - 1) - 1;
}

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::size_t samples = 0;

  explicit Accumulator(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
  void add(const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[i] += x[i];
      sum_sq[i] += x[i] * x[i];
    }
    ++samples;
  }
  void finish(MomentEstimate& e) const {
    const double r = static_cast<double>(samples);
    e.sample_count = samples;
    e.values.resize(sum.size());
    e.stderrs.assign(sum.size(), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      const double mean = sum[i] / r;
      e.values[i] = mean;
      if (samples > 1) {
        const double var = std::max(0.0, (sum_sq[i] - r * mean * mean) / (r - 1.0));
        e.stderrs[i] = std::sqrt(var / r);
      }
    }
  }
};

int cell_index(const Point& p, const TorusDomain& domain, int m) {
  const double side = domain.side_length() / m;
  int idx = 0;
  int mult = 1;
  for (int c = 0; c < domain.dimension(); ++c) {
    const int k = std::min(static_cast<int>(p[c] / side), m - 1);
    idx += mult * k;
    mult *= m;
  }
  return idx;
}

std::size_t cell_total(const TorusDomain& domain, int m, std::size_t cap) {
  if (m < 1) throw std::invalid_argument("cells per axis must be positive");
  std::size_t total = 1;
  for (int c = 0; c < domain.dimension(); ++c) {
    total *= static_cast<std::size_t>(m);
    if (total > cap) throw std::invalid_argument("too many cells for the gridded estimator");
  }
  return total;
}

// Calls fn(r, weight) over the distance distribution of two independent
// uniform points in the cube [0, w]^d, discretized on a midpoint grid by
// difference vectors; the weights sum to 1.
template <typename Fn>
void window_distance_weights(double w, int d, Fn&& fn) {
  const int g = d == 1 ? 4096 : (d == 2 ? 256 : 48);
  const double step = w / g;
  const double norm = std::pow(static_cast<double>(g), 2 * d);
  std::array<int, 3> k{0, 0, 0};
  const int lo = -(g - 1);
  const int hi = g - 1;
  const int kz_lo = d > 2 ? lo : 0;
  const int kz_hi = d > 2 ? hi : 0;
  const int ky_lo = d > 1 ? lo : 0;
  const int ky_hi = d > 1 ? hi : 0;
  for (k[2] = kz_lo; k[2] <= kz_hi; ++k[2]) {
    for (k[1] = ky_lo; k[1] <= ky_hi; ++k[1]) {
      for (k[0] = lo; k[0] <= hi; ++k[0]) {
        double mult = 1.0;
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
          mult *= g - std::abs(k[c]);
          r2 += (k[c] * step) * (k[c] * step);
        }
        fn(std::sqrt(r2), mult / norm);
      }
    }
  }
}

}  // namespace

double shell_volume(int dimension, double lo, double hi) {
  if (!(hi > lo) || lo < 0.0) throw std::invalid_argument("shell needs 0 <= lo < hi");
  return ball_volume(dimension, hi) - ball_volume(dimension, lo);
}

std::vector<double> uniform_bin_edges(double r_max, int bins) {
  if (!(r_max > 0.0) || bins < 1) throw std::invalid_argument("need r_max > 0 and at least one bin");
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[static_cast<std::size_t>(i)] = r_max * i / bins;
  e.back() = r_max;
  return e;
}

PairHistogram pair_histogram(const Configuration& config, const TorusDomain& domain, std::span<const double> edges) {
  validate_edges(edges, 0.5 * domain.side_length());
  PairHistogram h;
  h.edges.assign(edges.begin(), edges.end());
  const std::size_t nb = edges.size() - 1;
  h.counts.assign(nb, 0.0);
  h.shell_volumes.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) h.shell_volumes[b] = shell_volume(domain.dimension(), edges[b], edges[b + 1]);
  for (std::size_t i = 0; i < config.size(); ++i) {
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      const double r = torus_distance(config[i].position, config[j].position, domain);
      const std::size_t b = bin_of(edges, r);
      if (b < nb) h.counts[b] += 2.0;
    }
  }
  return h;
}

MomentEstimate density_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain, double time) {
  if (snapshots.empty()) throw std::invalid_argument("density estimate needs at least one snapshot");
  Accumulator acc(1);
  const double v = domain.volume();
  for (const auto& s : snapshots) acc.add({static_cast<double>(s.size()) / v});
  MomentEstimate e;
  e.order = 1;
  e.time = time;
  acc.finish(e);
  return e;
}

MomentEstimate pair_correlation_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain,
                                         std::span<const double> edges, double time) {
  if (snapshots.empty()) throw std::invalid_argument("pair estimate needs at least one snapshot");
  validate_edges(edges, 0.5 * domain.side_length());
  const std::size_t nb = edges.size() - 1;
  Accumulator acc(nb);
  const double v = domain.volume();
  for (const auto& s : snapshots) {
    const PairHistogram h = pair_histogram(s, domain, edges);
    std::vector<double> k(nb);
    for (std::size_t b = 0; b < nb; ++b) k[b] = h.counts[b] / (v * h.shell_volumes[b]);
    acc.add(k);
  }
  MomentEstimate e;
  e.order = 2;
  e.time = time;
  e.bin_edges.assign(edges.begin(), edges.end());
  acc.finish(e);
  return e;
}

MomentEstimate density_profile_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain,
                                        int cells_per_axis, double time) {
  if (snapshots.empty()) throw std::invalid_argument("density profile needs at least one snapshot");
  const std::size_t cells = cell_total(domain, cells_per_axis, std::size_t{1} << 20);
  const double cell_vol = domain.volume() / static_cast<double>(cells);
  Accumulator acc(cells);
  std::vector<double> k(cells);
  for (const auto& s : snapshots) {
    std::fill(k.begin(), k.end(), 0.0);
    for (const auto& p : s.particles()) k[static_cast<std::size_t>(cell_index(p.position, domain, cells_per_axis))] += 1.0 / cell_vol;
    acc.add(k);
  }
  MomentEstimate e;
  e.order = 1;
  e.time = time;
  acc.finish(e);
  return e;
}

MomentEstimate pair_grid_estimate(std::span<const Configuration> snapshots, const TorusDomain& domain,
                                  int cells_per_axis, double time) {
  if (snapshots.empty()) throw std::invalid_argument("pair grid needs at least one snapshot");
  const std::size_t cells = cell_total(domain, cells_per_axis, 1024);
  const double cell_vol = domain.volume() / static_cast<double>(cells);
  const double w = 1.0 / (cell_vol * cell_vol);
  Accumulator acc(cells * cells);
  std::vector<double> k(cells * cells);
  std::vector<std::size_t> idx;
  for (const auto& s : snapshots) {
    std::fill(k.begin(), k.end(), 0.0);
    idx.clear();
    for (const auto& p : s.particles()) idx.push_back(static_cast<std::size_t>(cell_index(p.position, domain, cells_per_axis)));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (i != j) k[idx[i] + cells * idx[j]] += w;
      }
    }
    acc.add(k);
  }
  MomentEstimate e;
  e.order = 2;
  e.time = time;
  acc.finish(e);
  return e;
}

BoundCheck sub_poissonian_check(const MomentEstimate& estimate, double C, double alpha, double t) {
  BoundCheck c;
  c.t = t;
  c.n = estimate.order;
  c.bound = std::pow(C, estimate.order) * std::exp(estimate.order * t * alpha);
  c.margin = std::numeric_limits<double>::infinity();
  c.worst_value = 0.0;
  for (std::size_t i = 0; i < estimate.values.size(); ++i) {
    const double v = estimate.values[i];
    const double slack = kSigmas * (i < estimate.stderrs.size() ? estimate.stderrs[i] : 0.0);
    if (c.bound - v < c.margin) {
      c.margin = c.bound - v;
      c.worst_value = v;
    }
    if (!(v <= c.bound + slack) || !(v >= -slack)) c.pass = false;
  }
  if (estimate.values.empty()) c.margin = c.bound;
  return c;
}

std::vector<BoundCheck> sub_poissonian_check(const CorrelationField& field, double C, double alpha, double t) {
  std::vector<BoundCheck> out;
  for (int n = 1; n <= field.n_max(); ++n) {
    BoundCheck c;
    c.t = t;
    c.n = n;
    c.bound = std::pow(C, n) * std::exp(n * t * alpha);
    c.margin = std::numeric_limits<double>::infinity();
    for (double v : field.order(n)) {
      if (c.bound - v < c.margin) {
        c.margin = c.bound - v;
        c.worst_value = v;
      }
      if (!(v <= c.bound + kDeterministicSlack) || !(v >= -kDeterministicSlack)) c.pass = false;
    }
    out.push_back(c);
  }
  return out;
}

VarianceCheck variance_positivity_check(const MomentEstimate& k1, const MomentEstimate& k2, double window_side,
                                        int dimension) {
  if (k1.order != 1 || k1.values.size() != 1) throw std::invalid_argument("k1 must be a scalar density estimate");
  if (k2.order != 2 || k2.bin_edges.size() != k2.values.size() + 1) {
    throw std::invalid_argument("k2 must be a radial pair estimate");
  }
  if (!(window_side >= 0.0)) throw std::invalid_argument("window side must be non-negative");
  VarianceCheck r;
  r.window_side = window_side;
  if (window_side == 0.0) return r;
  if (window_side * std::sqrt(static_cast<double>(dimension)) > k2.bin_edges.back() * (1.0 + 1e-12)) {
    throw std::invalid_argument("window diameter exceeds the binned range of k2");
  }
  const double vol = std::pow(window_side, dimension);
  const std::size_t nb = k2.values.size();
  std::vector<double> frac(nb, 0.0);
  window_distance_weights(window_side, dimension, [&](double r, double wgt) {
    const std::size_t b = bin_of(k2.bin_edges, r);
    if (b < nb) frac[b] += wgt;
  });
  const double m1 = k1.values[0] * vol;
  double pair_term = 0.0;
  double var = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    pair_term += vol * vol * frac[b] * k2.values[b];
    const double s = vol * vol * frac[b] * (b < k2.stderrs.size() ? k2.stderrs[b] : 0.0);
    var += s * s;
  }
  const double d1 = (1.0 - 2.0 * m1) * vol * (k1.stderrs.empty() ? 0.0 : k1.stderrs[0]);
  var += d1 * d1;
  r.value = pair_term + m1 - m1 * m1;
  r.std_error = std::sqrt(var);
  r.pass = r.value >= -kSigmas * r.std_error;
  return r;
}

VarianceCheck variance_positivity_check(double k1, const std::function<double(double)>& k2, double window_side,
                                        int dimension) {
  if (!(window_side >= 0.0)) throw std::invalid_argument("window side must be non-negative");
  VarianceCheck r;
  r.window_side = window_side;
  if (window_side == 0.0) return r;
  const double vol = std::pow(window_side, dimension);
  double pair = 0.0;
  window_distance_weights(window_side, dimension, [&](double dist, double wgt) { pair += wgt * k2(dist); });
  const double m1 = k1 * vol;
  r.value = vol * vol * pair + m1 - m1 * m1;
  r.pass = r.value >= -kDeterministicSlack;
  return r;
}

}  // namespace kawasaki
