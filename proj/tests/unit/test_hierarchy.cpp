#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include <kawasaki/estimators.hpp>
#include <kawasaki/hierarchy.hpp>
#include <kawasaki/rng.hpp>

using namespace kawasaki;

namespace {

KernelSpec small_kernels(double phi_height = 0.9) {
  return KernelSpec(RadialProfile(KernelFamily::TopHat, 0.8, 0.6, 1),
                    RadialProfile(KernelFamily::TopHat, phi_height, 0.3, 1));
}

KernelSpec demo_kernels(double phi_integral = 0.5) {
  return KernelSpec(RadialProfile(KernelFamily::TopHat, 1.0 / 2.25, 1.125, 1),
                    RadialProfile(KernelFamily::TopHat, phi_integral / 0.75, 0.375, 1));
}

// Direct evaluation of the lattice generator for a field given as plain
// arrays, written from the defining sums and sharing no code with Hierarchy.
struct BruteForce {
  Lattice lat;
  KernelSpec kern;
  int m;
  std::vector<double> k1;               // k1[x]
  std::vector<std::vector<double>> k2;  // k2[x][y], symmetric

  double a(Site from, Site to) const { return kern.jump(lat.displacement(lat.separation(from, to))); }
  double tau(Site u, Site v) const { return std::exp(-kern.potential(lat.displacement(lat.separation(u, v)))); }

  double k(const std::vector<Site>& eta) const {
    if (eta.empty()) return 1.0;
    if (eta.size() == 1) return k1[eta[0]];
    if (eta.size() == 2) return k2[eta[0]][eta[1]];
    return 0.0;  // zero tail
  }

  double Q(Site y, const std::vector<Site>& xi) const {
    const double h = lat.spacing();
    double extra = 0.0;
    for (Site u = 0; u < static_cast<Site>(m); ++u) {
      std::vector<Site> grown = xi;
      grown.push_back(u);
      extra += (tau(u, y) - 1.0) * k(grown);
    }
    return k(xi) + h * extra;
  }

  double L(const std::vector<Site>& eta) const {
    const double h = lat.spacing();
    double total = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const Site y = eta[i];
      for (Site x = 0; x < static_cast<Site>(m); ++x) {
        // gain: particle at x lands on y
        double e = tau(x, y);
        for (std::size_t j = 0; j < eta.size(); ++j) {
          if (j != i) e *= tau(eta[j], y);
        }
        std::vector<Site> moved = eta;
        moved[i] = x;
        total += a(x, y) * e * Q(y, moved);
        // loss: particle at y leaves for x
        double e_loss = 1.0;
        for (Site z : eta) e_loss *= tau(z, x);
        total -= a(y, x) * e_loss * Q(x, eta);
      }
    }
    return h * total;
  }
};

CorrelationField random_field(const Lattice& lat, FieldMode mode, ClosureRule cl, int qy, double theta, CounterRng& rng,
                              bool signed_values = true) {
  CorrelationField f(lat, mode, cl, qy);
  for (int n = 1; n <= cl.n_max; ++n) {
    const double scale = std::exp(theta * n);
    for (double& v : f.order(n)) v = scale * (signed_values ? 2.0 * rng.uniform() - 1.0 : rng.uniform());
  }
  f.symmetrize();
  f.freeze_closure_density();
  return f;
}

}  // namespace

TEST(CorrelationField, IndexRoundTripAndShapes) {
  const Lattice lat(2, 4, 0.5);
  for (auto mode : {FieldMode::TranslationInvariant, FieldMode::FullGrid}) {
    const CorrelationField f(lat, mode, ClosureRule{ClosureKind::ZeroTail, 3}, 1);
    for (int n = 1; n <= 3; ++n) {
      for (std::size_t idx = 0; idx < f.entry_count(n); ++idx) {
        ASSERT_EQ(f.index_of(f.representative(n, idx)), idx);
      }
    }
  }
  const CorrelationField ti(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::ZeroTail, 2}, 1);
  EXPECT_EQ(ti.entry_count(1), 1u);
  EXPECT_EQ(ti.entry_count(2), 16u);
  EXPECT_THROW(CorrelationField(lat, FieldMode::FullGrid, ClosureRule{ClosureKind::ZeroTail, 4}, 1),
               std::invalid_argument);
}

TEST(CorrelationField, ClosuresBeyondTheLastOrder) {
  const Lattice lat(1, 8, 0.25);
  CorrelationField p = CorrelationField::constant(lat, FieldMode::FullGrid, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.4);
  const std::vector<Site> three{1, 2, 5};
  EXPECT_NEAR(p.value(three), 0.4 * 0.4 * 0.4, 1e-16);
  CorrelationField z = CorrelationField::constant(lat, FieldMode::FullGrid, ClosureRule{ClosureKind::ZeroTail, 2}, 1, 0.4);
  EXPECT_EQ(z.value(three), 0.0);
  EXPECT_EQ(z.value(std::vector<Site>{}), 1.0);
}

TEST(Hierarchy, QyIdentities) {
  const Lattice lat(1, 16, 0.25);
  const CorrelationField k =
      CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.3);
  const std::vector<Site> eta{3};

  const Hierarchy free(lat, demo_kernels(0.0));
  EXPECT_EQ(free.apply_Qy(k, 5, eta), k.value(eta));

  const Hierarchy h(lat, demo_kernels());
  const CorrelationField k0 =
      CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 0, 0.3);
  EXPECT_EQ(h.apply_Qy(k0, 5, eta), 0.3);

  double tsum = 0.0;
  for (Site s : h.tables().t_support) tsum += h.tables().t[s];
  const double expected = 0.3 * (1.0 + 0.3 * lat.cell_volume() * tsum);
  EXPECT_NEAR(h.apply_Qy(k, 5, eta), expected, 1e-15);
  const double deficit = repulsion_deficit_integral(demo_kernels().phi);
  EXPECT_NEAR(h.apply_Qy(k, 5, eta), 0.3 * (1.0 - 0.3 * deficit), 1e-3);
}

TEST(Hierarchy, MatchesBruteForceOnEightSites) {
  const Lattice lat(1, 8, 0.25);
  const KernelSpec kern = small_kernels();
  const Hierarchy h(lat, kern);
  CounterRng rng(2024);
  const ClosureRule zero{ClosureKind::ZeroTail, 2};

  for (auto mode : {FieldMode::TranslationInvariant, FieldMode::FullGrid}) {
    const CorrelationField f = random_field(lat, mode, zero, 1, 0.0, rng);
    BruteForce bf{lat, kern, 8, std::vector<double>(8), std::vector<std::vector<double>>(8, std::vector<double>(8))};
    for (Site x = 0; x < 8; ++x) {
      bf.k1[x] = f.value(std::vector<Site>{x});
      for (Site y = 0; y < 8; ++y) bf.k2[x][y] = f.value(std::vector<Site>{x, y});
    }
    const CorrelationField out = h.apply_Ldelta(f);
    for (Site x = 0; x < 8; ++x) {
      EXPECT_NEAR(out.value(std::vector<Site>{x}), bf.L({x}), 1e-12);
      for (Site y = 0; y < 8; ++y) {
        const double sym = 0.5 * (bf.L({x, y}) + bf.L({y, x}));
        EXPECT_NEAR(out.value(std::vector<Site>{x, y}), sym, 1e-12);
      }
    }
    EXPECT_EQ(out.k0, 0.0);
  }
}

TEST(Hierarchy, PoissonFieldIsInvariantWithoutRepulsion) {
  for (auto mode : {FieldMode::TranslationInvariant, FieldMode::FullGrid}) {
    const Lattice lat(1, 32, 0.25);
    const Hierarchy h(lat, demo_kernels(0.0));
    const CorrelationField k = CorrelationField::constant(lat, mode, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.5);
    EXPECT_LE(h.apply_Ldelta(k).max_abs(), 1e-12);
  }
}

TEST(Hierarchy, FreeOperatorOnConstantsAndDeltas) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const ClosureRule cl{ClosureKind::PoissonTail, 2};
  const double C = 0.7;
  const CorrelationField k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, cl, 1, C);
  const CorrelationField d = h.apply_Lbar(k);
  for (double v : d.order(1)) EXPECT_NEAR(v, h.alpha() * C, 1e-14);
  for (double v : d.order(2)) EXPECT_NEAR(v, 2.0 * h.alpha() * C * C, 1e-14);

  CorrelationField zero = k.zero_like();
  EXPECT_EQ(h.apply_Lbar(zero).max_abs(), 0.0);

  CorrelationField delta(lat, FieldMode::FullGrid, cl, 1);
  delta.order(1)[7] = 1.0;
  const CorrelationField spread = h.apply_Lbar(delta);
  double mass = 0.0;
  int support = 0;
  for (double v : spread.order(1)) {
    mass += v;
    if (v != 0.0) ++support;
  }
  EXPECT_NEAR(mass, h.alpha(), 1e-14);
  EXPECT_EQ(support, static_cast<int>(h.tables().a_support.size()));
}

TEST(Hierarchy, RepulsionLowersTheDerivativeOfAPoissonField) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const CorrelationField k =
      CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.3);
  const CorrelationField d = h.apply_Ldelta(k);
  EXPECT_NEAR(d.order(1)[0], 0.0, 1e-15);
  EXPECT_LT(d.order(2)[0], 0.0);  // coincident pairs get depleted
}

TEST(ScaleNorm, Examples) {
  const Lattice lat(1, 8, 0.25);
  const ClosureRule cl{ClosureKind::PoissonTail, 2};
  const auto pois = CorrelationField::constant(lat, FieldMode::FullGrid, cl, 1, 0.4);
  EXPECT_NEAR(scale_norm(pois, std::log(0.4)).norm_value, 1.0, 1e-15);
  EXPECT_EQ(scale_norm(pois.zero_like(), 0.0).norm_value, 0.0);
  const double C = 0.3, alpha = 1.0, t = 0.7;
  const auto grown = CorrelationField::constant(lat, FieldMode::FullGrid, cl, 1, C * std::exp(alpha * t));
  EXPECT_NEAR(scale_norm(grown, std::log(C) + alpha * t).norm_value, 1.0, 1e-14);
}

TEST(FreeSolution, ClosedForm) {
  EXPECT_EQ(free_solution(0.5, 1.0, 3.0, 0), 1.0);
  EXPECT_NEAR(free_solution(1.0, 1.0, 1.0, 2), 7.3890561, 1e-7);
  EXPECT_NEAR(free_solution(2.0, 0.5, 2.0, 3), 160.684, 1e-3);
}

TEST(Taylor, ZeroTimeIsIdentityAndFreePoissonIsFixed) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels(0.0));
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.5);
  const ScalePair sc{std::log(0.5), std::log(0.5) + 1.0};
  const auto id = taylor_semigroup_step(h, k, 0.0, 10, Operator::Ldelta, sc);
  EXPECT_EQ(max_abs_difference(id.field, k), 0.0);
  const auto fixed = taylor_semigroup_step(h, k, 0.2, 30, Operator::Ldelta, sc);
  EXPECT_LE(max_abs_difference(fixed.field, k), 1e-12);
  EXPECT_EQ(fixed.field.k0, 1.0);
}

TEST(Taylor, FreeOperatorReproducesClosedForm) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const double C = 0.5, t = 0.1;
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, C);
  const ScalePair sc{std::log(C), std::log(C) + 1.0};
  const auto r = taylor_semigroup_step(h, k, t, 25, Operator::Lbar, sc);
  EXPECT_TRUE(r.certificate.free_operator);
  for (int n = 1; n <= 2; ++n) {
    for (double v : r.field.order(n)) {
      EXPECT_NEAR(v, free_solution(C, h.alpha(), t, n), r.last_term + 1e-14);
    }
  }
}

TEST(Taylor, RefusesStepsPastTheHorizon) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.3);
  const ScaleParams p = h.scale_params(0.3);
  const double lo = std::log(0.3);
  const double hi = lo + delta_theta(lo, p);
  const double T = horizon_T(hi, lo, p);
  try {
    (void)taylor_semigroup_step(h, k, T, 20, Operator::Ldelta, ScalePair{lo, hi});
    FAIL() << "step at the horizon was accepted";
  } catch (const HorizonExceeded& e) {
    EXPECT_FALSE(e.certificate().valid);
    EXPECT_DOUBLE_EQ(e.certificate().horizon, T);
  }
}

TEST(Taylor, AgreesWithRungeKuttaAtHalfTheHorizon) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.3);
  const ScaleParams p = h.scale_params(0.3);
  const double lo = std::log(0.3);
  const double hi = lo + delta_theta(lo, p);
  const double t = 0.5 * horizon_T(hi, lo, p);
  const auto series = taylor_semigroup_step(h, k, t, 60, Operator::Ldelta, ScalePair{lo, hi});
  const auto rk = integrate(h, k, t, t / 200.0, Operator::Ldelta);
  EXPECT_LE(max_abs_difference(series.field, rk) / rk.max_abs(), 1e-6);
  EXPECT_LT(series.last_term, 1e-12);
}

TEST(Taylor, AmplificationStaysUnderTheCertificate) {
  const Lattice lat(1, 16, 0.25);
  const Hierarchy h(lat, demo_kernels());
  CounterRng rng(8);
  const ScaleParams p = h.scale_params(1.0);
  const double lo = -0.5;
  const double hi = lo + delta_theta(lo, p);
  const double t = 0.6 * horizon_T(hi, lo, p);
  for (int i = 0; i < 10; ++i) {
    const auto k = random_field(lat, FieldMode::FullGrid, ClosureRule{ClosureKind::ZeroTail, 2}, 1, lo, rng);
    const auto r = taylor_semigroup_step(h, k, t, 60, Operator::Ldelta, ScalePair{lo, hi});
    const double ratio = scale_norm(r.field, hi).norm_value / scale_norm(k, lo).norm_value;
    EXPECT_LE(ratio, r.certificate.norm_bound + 1e-8);
  }
}

TEST(Integrate, OverflowGuardTrips) {
  const Lattice lat(1, 16, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 3.0);
  EXPECT_THROW((void)integrate(h, k, 5.0, 0.01, Operator::Lbar, 100.0), OverflowGuardTripped);
}

TEST(Integrate, KeepsEmptySetValueAndFreePoissonConstant) {
  const Lattice lat(1, 16, 0.25);
  const Hierarchy h(lat, demo_kernels(0.0));
  const auto k = CorrelationField::constant(lat, FieldMode::FullGrid, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.5);
  int calls = 0;
  const auto out = integrate(h, k, 1.0, 0.1, Operator::Ldelta, 1e12, [&](double, const CorrelationField& f) {
    ++calls;
    EXPECT_EQ(f.k0, 1.0);
  });
  EXPECT_EQ(calls, 11);
  EXPECT_LE(max_abs_difference(out, k), 1e-12);
}

TEST(Integrate, InteractingFieldStaysSubPoissonian) {
  const Lattice lat(1, 32, 0.25);
  const Hierarchy h(lat, demo_kernels());
  const auto k = CorrelationField::constant(lat, FieldMode::TranslationInvariant, ClosureRule{ClosureKind::PoissonTail, 2}, 1, 0.3);
  (void)integrate(h, k, 2.0, 0.01, Operator::Ldelta, 1e12, [&](double t, const CorrelationField& f) {
    for (const auto& b : sub_poissonian_check(f, 0.3, h.alpha(), t)) EXPECT_TRUE(b.pass) << "t=" << t;
  });
}
