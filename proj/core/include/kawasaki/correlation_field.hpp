#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kawasaki/lattice.hpp"

namespace kawasaki {

enum class ClosureKind { PoissonTail, ZeroTail };
[[nodiscard]] ClosureKind parse_closure_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(ClosureKind kind) noexcept;

/// How correlation orders above n_max are supplied when an operator asks for
/// them. PoissonTail factorizes the excess points through a frozen closure
/// density kappa_c, so every operator built on the field stays linear;
/// ZeroTail sets them to 0.
struct ClosureRule {
  ClosureKind kind = ClosureKind::PoissonTail;
  int n_max = 2;
};

enum class FieldMode { TranslationInvariant, FullGrid };
[[nodiscard]] FieldMode parse_field_mode(std::string_view name);
[[nodiscard]] std::string_view to_string(FieldMode mode) noexcept;

/// Correlation functions k^(0..n_max) on a periodic lattice.
///
/// In translation-invariant mode k^(1) is one number, k^(2) is stored by the
/// separation t1 - t0 and k^(3) by the pair (t1 - t0, t2 - t0). In full-grid
/// mode order n holds one value per ordered n-tuple of sites. Tuples may
/// repeat a site.
class CorrelationField {
 public:
  CorrelationField(Lattice lattice, FieldMode mode, ClosureRule closure, int qy_order);

  /// k^(n) = c^n for n = 1..n_max, k0 = 1, closure density c.
  static CorrelationField constant(const Lattice& lattice, FieldMode mode, ClosureRule closure, int qy_order, double c);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] FieldMode mode() const noexcept { return mode_; }
  [[nodiscard]] const ClosureRule& closure() const noexcept { return closure_; }
  [[nodiscard]] int n_max() const noexcept { return closure_.n_max; }
  [[nodiscard]] int qy_order() const noexcept { return qy_order_; }

  double k0 = 1.0;
  [[nodiscard]] std::vector<double>& order(int n);
  [[nodiscard]] const std::vector<double>& order(int n) const;
  [[nodiscard]] std::size_t entry_count(int n) const;

  /// Storage slot of an ordered tuple with 1 <= size <= n_max.
  [[nodiscard]] std::size_t index_of(std::span<const Site> tuple) const;
  /// A tuple stored at slot `index` of order n (first site 0 in translation-invariant mode).
  [[nodiscard]] std::vector<Site> representative(int n, std::size_t index) const;
  /// k(tuple) for any size; sizes above n_max go through the closure.
  [[nodiscard]] double value(std::span<const Site> tuple) const;

  /// kappa_c: one value in translation-invariant mode, one per site otherwise.
  [[nodiscard]] const std::vector<double>& closure_density() const noexcept { return kappa_c_; }
  void set_closure_density(std::vector<double> kappa);
  /// kappa_c := current k^(1).
  void freeze_closure_density();

  /// Replaces every stored value of order >= 2 by its average over permutations of the tuple.
  void symmetrize();
  /// this += a * other (including k0). Shapes and closure metadata must match.
  void axpy(double a, const CorrelationField& other);
  void scale(double a);
  /// Same shape and closure metadata with every value (k0 included) set to zero.
  [[nodiscard]] CorrelationField zero_like() const;
  /// Largest |k^(n)| over stored entries with n >= 1.
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] bool same_shape(const CorrelationField& other) const;

 private:
  Lattice lattice_;
  FieldMode mode_;
  ClosureRule closure_;
  int qy_order_;
  std::vector<std::vector<double>> orders_;  // orders_[n - 1]
  std::vector<double> kappa_c_;
};

/// Largest |a[i] - b[i]| over all stored entries of orders 1..n_max.
[[nodiscard]] double max_abs_difference(const CorrelationField& a, const CorrelationField& b);

}  // namespace kawasaki
