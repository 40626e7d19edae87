#include "kawasaki/correlation_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kawasaki {
namespace {

constexpr std::size_t kMaxEntries = std::size_t{1} << 22;

}  // namespace

ClosureKind parse_closure_kind(std::string_view name) {
  if (name == "poisson-tail") return ClosureKind::PoissonTail;
  if (name == "zero-tail") return ClosureKind::ZeroTail;
  throw std::invalid_argument("unknown closure '" + std::string(name) + "'");
}

std::string_view to_string(ClosureKind kind) noexcept {
  return kind == ClosureKind::PoissonTail ? "poisson-tail" : "zero-tail";
}

FieldMode parse_field_mode(std::string_view name) {
  if (name == "translation-invariant") return FieldMode::TranslationInvariant;
  if (name == "full-grid") return FieldMode::FullGrid;
  throw std::invalid_argument("unknown field mode '" + std::string(name) + "'");
}

std::string_view to_string(FieldMode mode) noexcept {
  return mode == FieldMode::TranslationInvariant ? "translation-invariant" : "full-grid";
}

CorrelationField::CorrelationField(Lattice lattice, FieldMode mode, ClosureRule closure, int qy_order)
    : lattice_(lattice), mode_(mode), closure_(closure), qy_order_(qy_order) {
  if (closure_.n_max < 2 || closure_.n_max > 3) throw std::invalid_argument("n_max must be 2 or 3");
  if (qy_order_ < 0 || qy_order_ > 2) throw std::invalid_argument("Q_y truncation order must be 0, 1 or 2");
  const std::size_t s = lattice_.site_count();
  orders_.resize(static_cast<std::size_t>(closure_.n_max));
  for (int n = 1; n <= closure_.n_max; ++n) {
    std::size_t count = 1;
    const int free_slots = mode_ == FieldMode::TranslationInvariant ? n - 1 : n;
    for (int k = 0; k < free_slots; ++k) {
      count *= s;
      if (count > kMaxEntries) throw std::invalid_argument("correlation field too large for this lattice and order");
    }
    orders_[static_cast<std::size_t>(n - 1)].assign(count, 0.0);
  }
  kappa_c_.assign(mode_ == FieldMode::TranslationInvariant ? 1 : s, 0.0);
}

CorrelationField CorrelationField::constant(const Lattice& lattice, FieldMode mode, ClosureRule closure, int qy_order,
                                            double c) {
  CorrelationField f(lattice, mode, closure, qy_order);
  double cn = 1.0;
  for (int n = 1; n <= f.n_max(); ++n) {
    cn *= c;
    std::fill(f.order(n).begin(), f.order(n).end(), cn);
  }
  f.freeze_closure_density();
  return f;
}

std::vector<double>& CorrelationField::order(int n) {
  if (n < 1 || n > closure_.n_max) throw std::out_of_range("correlation order out of range");
  return orders_[static_cast<std::size_t>(n - 1)];
}

const std::vector<double>& CorrelationField::order(int n) const {
  if (n < 1 || n > closure_.n_max) throw std::out_of_range("correlation order out of range");
  return orders_[static_cast<std::size_t>(n - 1)];
}

std::size_t CorrelationField::entry_count(int n) const { return order(n).size(); }

std::size_t CorrelationField::index_of(std::span<const Site> tuple) const {
  const std::size_t n = tuple.size();
  if (n == 0 || n > static_cast<std::size_t>(closure_.n_max)) throw std::out_of_range("tuple size outside stored orders");
  const std::size_t s = lattice_.site_count();
  std::size_t idx = 0;
  std::size_t mult = 1;
  if (mode_ == FieldMode::TranslationInvariant) {
    for (std::size_t k = 1; k < n; ++k) {
      idx += mult * lattice_.separation(tuple[k], tuple[0]);
      mult *= s;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      idx += mult * tuple[k];
      mult *= s;
    }
  }
  return idx;
}

std::vector<Site> CorrelationField::representative(int n, std::size_t index) const {
  const std::size_t s = lattice_.site_count();
  std::vector<Site> t(static_cast<std::size_t>(n), 0);
  if (mode_ == FieldMode::TranslationInvariant) {
    for (int k = 1; k < n; ++k) {
      t[static_cast<std::size_t>(k)] = static_cast<Site>(index % s);
      index /= s;
    }
  } else {
    for (int k = 0; k < n; ++k) {
      t[static_cast<std::size_t>(k)] = static_cast<Site>(index % s);
      index /= s;
    }
  }
  return t;
}

double CorrelationField::value(std::span<const Site> tuple) const {
  const std::size_t n = tuple.size();
  if (n == 0) return k0;
  const auto nm = static_cast<std::size_t>(closure_.n_max);
  if (n <= nm) return orders_[n - 1][index_of(tuple)];
  if (closure_.kind == ClosureKind::ZeroTail) return 0.0;
  double v = orders_[nm - 1][index_of(tuple.first(nm))];
  for (std::size_t k = nm; k < n; ++k) {
    v *= mode_ == FieldMode::TranslationInvariant ? kappa_c_[0] : kappa_c_[tuple[k]];
  }
  return v;
}

void CorrelationField::set_closure_density(std::vector<double> kappa) {
  if (kappa.size() != kappa_c_.size()) throw std::invalid_argument("closure density has the wrong size");
  kappa_c_ = std::move(kappa);
}

void CorrelationField::freeze_closure_density() { kappa_c_ = orders_[0]; }

void CorrelationField::symmetrize() {
  for (int n = 2; n <= closure_.n_max; ++n) {
    const std::vector<double> src = order(n);
    std::vector<double>& dst = order(n);
    for (std::size_t idx = 0; idx < src.size(); ++idx) {
      std::vector<Site> t = representative(n, idx);
      std::sort(t.begin(), t.end());
      double sum = 0.0;
      int count = 0;
      do {
        sum += src[index_of(t)];
        ++count;
      } while (std::next_permutation(t.begin(), t.end()));
      // next_permutation walks distinct orderings only; each stands for the
      // same number of raw permutations, so the plain mean is the orbit mean.
      dst[idx] = sum / count;
    }
  }
}

bool CorrelationField::same_shape(const CorrelationField& other) const {
  return lattice_ == other.lattice_ && mode_ == other.mode_ && closure_.n_max == other.closure_.n_max;
}

void CorrelationField::axpy(double a, const CorrelationField& other) {
  if (!same_shape(other)) throw std::invalid_argument("axpy on fields of different shape");
  k0 += a * other.k0;
  for (std::size_t n = 0; n < orders_.size(); ++n) {
    auto& d = orders_[n];
    const auto& s = other.orders_[n];
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += a * s[i];
  }
}

void CorrelationField::scale(double a) {
  k0 *= a;
  for (auto& o : orders_) {
    for (double& v : o) v *= a;
  }
}

CorrelationField CorrelationField::zero_like() const {
  CorrelationField z = *this;
  z.k0 = 0.0;
  for (auto& o : z.orders_) std::fill(o.begin(), o.end(), 0.0);
  return z;
}

double CorrelationField::max_abs() const {
  double m = 0.0;
  for (const auto& o : orders_) {
    for (double v : o) m = std::max(m, std::abs(v));
  }
  return m;
}

bool CorrelationField::all_finite() const {
  if (!std::isfinite(k0)) return false;
  for (const auto& o : orders_) {
    for (double v : o) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

double max_abs_difference(const CorrelationField& a, const CorrelationField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("comparing fields of different shape");
  double m = 0.0;
  for (int n = 1; n <= a.n_max(); ++n) {
    const auto& x = a.order(n);
    const auto& y = b.order(n);
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

}  // namespace kawasaki
