#include "kawasaki/master_equation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace kawasaki {
namespace {

double count_states(std::size_t sites, int n, Sector sector) {
  // C(sites, n) or C(sites + n - 1, n)
  const double top = sector == Sector::Exclusion ? static_cast<double>(sites) : static_cast<double>(sites + n - 1);
  double c = 1.0;
  for (int k = 0; k < n; ++k) c = c * (top - k) / (k + 1);
  return c;
}

void enumerate(std::vector<std::vector<Site>>& out, std::vector<Site>& cur, Site first, std::size_t sites, int left,
               Sector sector) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (Site s = first; s < sites; ++s) {
    cur.push_back(s);
    enumerate(out, cur, sector == Sector::Exclusion ? s + 1 : s, sites, left - 1, sector);
    cur.pop_back();
  }
}

double log_factorial_product(const std::vector<Site>& sites) {
  double lf = 0.0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sites.size(); ++i) {
    if (i < sites.size() && sites[i] == sites[i - 1]) {
      ++run;
    } else {
      lf += std::lgamma(static_cast<double>(run) + 1.0);
      run = 1;
    }
  }
  return lf;
}

}  // namespace

Sector parse_sector(std::string_view name) {
  if (name == "exclusion") return Sector::Exclusion;
  if (name == "multiset") return Sector::Multiset;
  throw std::invalid_argument("unknown master-equation sector '" + std::string(name) + "'");
}

std::string_view to_string(Sector s) noexcept { return s == Sector::Exclusion ? "exclusion" : "multiset"; }

MasterEquation::MasterEquation(const Lattice& lattice, const KernelSpec& kernels, int particles, Sector sector)
    : lattice_(lattice), tab_(lattice, kernels), exclude_self_(kernels.exclude_self_term), n_(particles),
      sector_(sector) {
  if (particles < 1) throw std::invalid_argument("master equation needs at least one particle");
  const std::size_t sites = lattice_.site_count();
  if (sector_ == Sector::Exclusion && static_cast<std::size_t>(particles) > sites) {
    throw std::invalid_argument("more particles than sites in the exclusion sector");
  }
  if (count_states(sites, particles, sector_) > static_cast<double>(kMaxStates)) {
    throw std::invalid_argument("master-equation sector too large (more than 100000 states)");
  }
  std::vector<Site> cur;
  enumerate(states_, cur, 0, sites, particles, sector_);

  std::map<std::vector<Site>, std::size_t> lookup;
  for (std::size_t i = 0; i < states_.size(); ++i) lookup.emplace(states_[i], i);

  const double w = lattice_.cell_volume();
  out_.resize(states_.size());
  exit_rate_.assign(states_.size(), 0.0);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& st = states_[i];
    std::map<std::size_t, double> merged;
    for (std::size_t j = 0; j < st.size(); ++j) {
      const Site x = st[j];
      for (Site s : tab_.a_support) {
        if (s == 0) continue;
        const Site y = lattice_.shift(x, s);
        if (sector_ == Sector::Exclusion && std::binary_search(st.begin(), st.end(), y)) continue;
        double expo = 0.0;
        for (std::size_t l = 0; l < st.size(); ++l) {
          if (l == j && exclude_self_) continue;
          expo += tab_.phi[lattice_.separation(y, st[l])];
        }
        const double rate = w * tab_.a[s] * std::exp(-expo);
        if (rate == 0.0) continue;
        std::vector<Site> next = st;
        next[j] = y;
        std::sort(next.begin(), next.end());
        merged[lookup.at(next)] += rate;
      }
    }
    for (const auto& [to, rate] : merged) {
      out_[i].push_back({to, rate});
      exit_rate_[i] += rate;
    }
  }
}

std::size_t MasterEquation::index_of(std::vector<Site> sites) const {
  std::sort(sites.begin(), sites.end());
  const auto it = std::lower_bound(states_.begin(), states_.end(), sites);
  if (it == states_.end() || *it != sites) throw std::invalid_argument("configuration is not in this sector");
  return static_cast<std::size_t>(it - states_.begin());
}

std::vector<double> MasterEquation::rhs(const std::vector<double>& prob) const {
  if (prob.size() != states_.size()) throw std::invalid_argument("probability vector has the wrong size");
  std::vector<double> d(prob.size(), 0.0);
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] == 0.0) continue;
    d[i] -= exit_rate_[i] * prob[i];
    for (const auto& tr : out_[i]) d[tr.to] += tr.rate * prob[i];
  }
  return d;
}

double MasterEquation::energy(std::size_t i) const {
  const auto& st = states_.at(i);
  double e = 0.0;
  for (std::size_t a = 0; a < st.size(); ++a) {
    for (std::size_t b = a + 1; b < st.size(); ++b) e += tab_.phi[lattice_.separation(st[a], st[b])];
  }
  return e;
}

std::vector<double> MasterEquation::gibbs() const {
  std::vector<double> g(states_.size());
  double z = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double logw = -energy(i);
    if (sector_ == Sector::Multiset) logw -= log_factorial_product(states_[i]);
    g[i] = std::exp(logw);
    z += g[i];
  }
  for (double& v : g) v /= z;
  return g;
}

std::vector<double> MasterEquation::stationary() const {
  const auto n = static_cast<Eigen::Index>(states_.size());
  if (n > 5000) throw std::invalid_argument("stationary solve limited to 5000 states");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i, i) -= exit_rate_[static_cast<std::size_t>(i)];
    for (const auto& tr : out_[static_cast<std::size_t>(i)]) q(static_cast<Eigen::Index>(tr.to), i) += tr.rate;
  }
  q.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::VectorXd pi = q.fullPivLu().solve(b);
  std::vector<double> out(pi.data(), pi.data() + n);
  double z = 0.0;
  for (double v : out) z += v;
  for (double& v : out) v /= z;
  return out;
}

std::vector<double> MasterEquation::rk4_step(const std::vector<double>& p, double dt) const {
  auto axpy = [](const std::vector<double>& x, double a, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
    return r;
  };
  const auto k1 = rhs(p);
  const auto k2 = rhs(axpy(p, 0.5 * dt, k1));
  const auto k3 = rhs(axpy(p, 0.5 * dt, k2));
  const auto k4 = rhs(axpy(p, dt, k3));
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

std::vector<double> MasterEquation::evolve(std::vector<double> prob, double t_end, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("end time must be non-negative");
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  if (steps == 0) return prob;
  const double h = t_end / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) prob = rk4_step(prob, h);
  return prob;
}

std::vector<double> MasterEquation::delta_state(const std::vector<Site>& sites) const {
  if (sites.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("wrong particle count");
  std::vector<double> p(states_.size(), 0.0);
  p[index_of(sites)] = 1.0;
  return p;
}

std::vector<double> MasterEquation::uniform_placement() const {
  std::vector<double> p(states_.size());
  if (sector_ == Sector::Exclusion) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(states_.size()));
    return p;
  }
  const double log_sites = std::log(static_cast<double>(lattice_.site_count()));
  const double log_nfact = std::lgamma(n_ + 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_nfact - log_factorial_product(states_[i]) - n_ * log_sites);
  }
  return p;
}

std::vector<double> MasterEquation::site_density(const std::vector<double>& prob) const {
  if (prob.size() != states_.size()) throw std::invalid_argument("probability vector has the wrong size");
  std::vector<double> rho(lattice_.site_count(), 0.0);
  for (std::size_t i = 0; i < prob.size(); ++i) {
    for (Site s : states_[i]) rho[s] += prob[i];
  }
  for (double& v : rho) v /= lattice_.cell_volume();
  return rho;
}

CorrelationField MasterEquation::correlations(const std::vector<double>& prob, FieldMode mode, ClosureRule closure,
                                              int qy_order) const {
  if (prob.size() != states_.size()) throw std::invalid_argument("probability vector has the wrong size");
  CorrelationField f(lattice_, mode, closure, qy_order);
  const double translations =
      mode == FieldMode::TranslationInvariant ? static_cast<double>(lattice_.site_count()) : 1.0;
  const double w = lattice_.cell_volume();
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double p = prob[i];
    if (p == 0.0) continue;
    const auto& st = states_[i];
    const std::size_t m = st.size();
    for (std::size_t a = 0; a < m; ++a) {
      const std::array<Site, 1> t1{st[a]};
      f.order(1)[f.index_of(t1)] += p / (translations * w);
      for (std::size_t b = 0; b < m; ++b) {
        if (b == a) continue;
        const std::array<Site, 2> t2{st[a], st[b]};
        f.order(2)[f.index_of(t2)] += p / (translations * w * w);
        if (closure.n_max < 3) continue;
        for (std::size_t c = 0; c < m; ++c) {
          if (c == a || c == b) continue;
          const std::array<Site, 3> t3{st[a], st[b], st[c]};
          f.order(3)[f.index_of(t3)] += p / (translations * w * w * w);
        }
      }
    }
  }
  f.k0 = 1.0;
  f.freeze_closure_density();
  return f;
}

}  // namespace kawasaki
