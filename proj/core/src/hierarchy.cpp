#include "kawasaki/hierarchy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace kawasaki {
namespace {

// Tuples never exceed n_max + 2 = 5 sites.
using Tuple = std::array<Site, 8>;

std::span<const Site> view(const Tuple& t, std::size_t n) { return {t.data(), n}; }

}  // namespace

std::string_view to_string(Operator op) noexcept { return op == Operator::Ldelta ? "Ldelta" : "Lbar"; }

Hierarchy::Hierarchy(const Lattice& lattice, const KernelSpec& kernels) : lattice_(lattice), tab_(lattice, kernels) {}

ScaleParams Hierarchy::scale_params(double C, double epsilon) const {
  ScaleParams p;
  p.alpha = tab_.alpha;
  p.mean_phi = tab_.mean_phi;
  p.C = C;
  p.epsilon = epsilon;
  return p;
}

void Hierarchy::check_field(const CorrelationField& k) const {
  if (!(k.lattice() == lattice_)) throw std::invalid_argument("field lives on a different lattice");
}

double Hierarchy::apply_Qy(const CorrelationField& k, Site y, std::span<const Site> eta) const {
  if (eta.size() > static_cast<std::size_t>(k.n_max())) {
    throw std::invalid_argument("Q_y argument larger than the stored orders");
  }
  const std::size_t n = eta.size();
  Tuple buf{};
  std::copy(eta.begin(), eta.end(), buf.begin());
  double q = k.value(view(buf, n));
  if (k.qy_order() == 0 || tab_.t_support.empty()) return q;

  const double w = lattice_.cell_volume();
  double m1 = 0.0;
  for (Site u : tab_.t_support) {
    buf[n] = lattice_.shift(y, u);
    m1 += tab_.t[u] * k.value(view(buf, n + 1));
  }
  q += w * m1;
  if (k.qy_order() == 1) return q;

  double m2 = 0.0;
  for (Site u1 : tab_.t_support) {
    buf[n] = lattice_.shift(y, u1);
    double inner = 0.0;
    for (Site u2 : tab_.t_support) {
      buf[n + 1] = lattice_.shift(y, u2);
      inner += tab_.t[u2] * k.value(view(buf, n + 2));
    }
    m2 += tab_.t[u1] * inner;
  }
  return q + 0.5 * w * w * m2;
}

double Hierarchy::ldelta_at(const CorrelationField& k, std::span<const Site> eta) const {
  const std::size_t n = eta.size();
  const double w = lattice_.cell_volume();
  Tuple zeta{};
  double gain = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // gain: a particle at x = eta_i + s jumps onto y = eta_i
    const Site y = eta[i];
    double others = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others *= tab_.tau[lattice_.separation(eta[j], y)];
    }
    std::copy(eta.begin(), eta.end(), zeta.begin());
    for (Site s : tab_.a_support) {
      const Site x = lattice_.shift(y, s);
      zeta[i] = x;
      const double e = others * tab_.tau[s];
      if (e == 0.0) continue;
      gain += tab_.a[s] * e * apply_Qy(k, y, view(zeta, n));
    }
    // loss: the particle at x = eta_i jumps to y = x + s
    const Site x = eta[i];
    for (Site s : tab_.a_support) {
      const Site target = lattice_.shift(x, s);
      double e = 1.0;
      for (std::size_t j = 0; j < n; ++j) e *= tab_.tau[lattice_.separation(eta[j], target)];
      if (e == 0.0) continue;
      loss += tab_.a[s] * e * apply_Qy(k, target, eta);
    }
  }
  return w * (gain - loss);
}

double Hierarchy::lbar_at(const CorrelationField& k, std::span<const Site> eta) const {
  const std::size_t n = eta.size();
  Tuple zeta{};
  double gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(eta.begin(), eta.end(), zeta.begin());
    for (Site s : tab_.a_support) {
      zeta[i] = lattice_.shift(eta[i], s);
      gain += tab_.a[s] * k.value(view(zeta, n));
    }
  }
  return lattice_.cell_volume() * gain;
}

CorrelationField Hierarchy::apply_Ldelta(const CorrelationField& k) const {
  check_field(k);
  CorrelationField out = k.zero_like();
  for (int n = 1; n <= k.n_max(); ++n) {
    auto& dst = out.order(n);
    for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] = ldelta_at(k, k.representative(n, idx));
  }
  out.symmetrize();
  return out;
}

CorrelationField Hierarchy::apply_Lbar(const CorrelationField& k) const {
  check_field(k);
  CorrelationField out = k.zero_like();
  for (int n = 1; n <= k.n_max(); ++n) {
    auto& dst = out.order(n);
    for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] = lbar_at(k, k.representative(n, idx));
  }
  out.symmetrize();
  return out;
}

CorrelationField Hierarchy::apply(Operator op, const CorrelationField& k) const {
  return op == Operator::Ldelta ? apply_Ldelta(k) : apply_Lbar(k);
}

double Hierarchy::qy_tail_bound(const CorrelationField& k, double theta) const {
  const double x = std::exp(theta) * tab_.abs_t_mass;
  double partial = 0.0;
  double term = 1.0;
  for (int m = 0; m <= k.qy_order(); ++m) {
    partial += term;
    term *= x / (m + 1);
  }
  const double tail = std::max(0.0, std::exp(x) - partial);
  return scale_norm(k, theta).norm_value * std::exp(theta * k.n_max()) * tail;
}

ScaleNormReport scale_norm(const CorrelationField& k, double theta) {
  ScaleNormReport r;
  r.theta = theta;
  for (int n = 1; n <= k.n_max(); ++n) {
    const double weight = std::exp(-theta * n);
    for (double v : k.order(n)) r.norm_value = std::max(r.norm_value, std::abs(v) * weight);
  }
  return r;
}

double free_solution(double C, double alpha, double t, int n) {
  if (n == 0) return 1.0;
  return std::pow(C, n) * std::exp(t * alpha * n);
}

HorizonExceeded::HorizonExceeded(Certificate certificate)
    : std::runtime_error("series step t = " + std::to_string(certificate.t) + " is not below the horizon " +
                         std::to_string(certificate.horizon) + " between scales " +
                         std::to_string(certificate.theta_low) + " and " + std::to_string(certificate.theta_high)),
      certificate_(std::move(certificate)) {}

OverflowGuardTripped::OverflowGuardTripped(double time, double value)
    : std::runtime_error("correlation value " + std::to_string(value) + " left the overflow guard at t = " +
                         std::to_string(time)),
      time_(time),
      value_(value) {}

TaylorResult taylor_semigroup_step(const Hierarchy& h, const CorrelationField& k, double t, int order, Operator op,
                                   ScalePair scales) {
  if (order < 1) throw std::invalid_argument("series order must be at least 1");
  if (!(t >= 0.0)) throw std::invalid_argument("series time must be non-negative");
  ScaleParams p = h.scale_params(1.0);
  Certificate cert = op == Operator::Ldelta ? norm_certificate(scales.theta_low, scales.theta_high, t, p, order)
                                            : free_norm_certificate(scales.theta_low, scales.theta_high, t, p, order);
  if (!cert.valid) throw HorizonExceeded(cert);

  CorrelationField sum = k;
  CorrelationField term = k;
  for (int n = 1; n <= order; ++n) {
    term = h.apply(op, term);
    term.scale(t / n);
    sum.axpy(1.0, term);
  }
  if (sum.k0 != k.k0) throw std::logic_error("k(empty set) drifted in the series step");
  TaylorResult r{std::move(sum), term.max_abs(), scale_norm(term, scales.theta_high).norm_value, std::move(cert)};
  return r;
}

CorrelationField rk4_step(const Hierarchy& h, const CorrelationField& k, double dt, Operator op) {
  const CorrelationField k1 = h.apply(op, k);
  CorrelationField tmp = k;
  tmp.axpy(0.5 * dt, k1);
  const CorrelationField k2 = h.apply(op, tmp);
  tmp = k;
  tmp.axpy(0.5 * dt, k2);
  const CorrelationField k3 = h.apply(op, tmp);
  tmp = k;
  tmp.axpy(dt, k3);
  const CorrelationField k4 = h.apply(op, tmp);
  CorrelationField out = k;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  return out;
}

CorrelationField integrate(const Hierarchy& h, const CorrelationField& k, double t_end, double dt, Operator op,
                           double overflow_guard, const FieldObserver& observer) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("end time must be non-negative");
  if (!(overflow_guard > 0.0)) throw std::invalid_argument("overflow guard must be positive");
  CorrelationField cur = k;
  if (observer) observer(0.0, cur);
  double t = 0.0;
  std::size_t step = 0;
  while (t < t_end) {
    ++step;
    const double target = std::min(t_end, static_cast<double>(step) * dt);
    cur = rk4_step(h, cur, target - t, op);
    t = target;
    if (cur.k0 != k.k0) throw std::logic_error("k(empty set) drifted during integration");
    const double m = cur.max_abs();
    if (!cur.all_finite() || m > overflow_guard) throw OverflowGuardTripped(t, m);
    if (observer) observer(t, cur);
  }
  return cur;
}

}  // namespace kawasaki
