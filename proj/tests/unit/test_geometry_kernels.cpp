#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include <kawasaki/configuration.hpp>
#include <kawasaki/functionals.hpp>
#include <kawasaki/kernels.hpp>
#include <kawasaki/rng.hpp>
#include <kawasaki/torus.hpp>

using namespace kawasaki;

namespace {

KernelSpec top_hat_pair(int d, double a_range, double a_height, double phi_range, double phi_height,
                        bool exclude_self = false) {
  return KernelSpec(RadialProfile(KernelFamily::TopHat, a_height, a_range, d),
                    RadialProfile(KernelFamily::TopHat, phi_height, phi_range, d), exclude_self);
}

}  // namespace

TEST(Torus, MinImageWrapsAcrossTheBoundary) {
  const TorusDomain dom(1, 10.0);
  EXPECT_DOUBLE_EQ(min_image({9.5, 0, 0}, {0.5, 0, 0}, dom)[0], -1.0);
  const Point same = min_image({3.3, 0, 0}, {3.3, 0, 0}, dom);
  EXPECT_EQ(same[0], 0.0);
}

TEST(Torus, MinImageInTwoDimensions) {
  const TorusDomain dom(2, 4.0);
  const Point v = min_image({3.9, 0.1, 0}, {0.1, 3.9, 0}, dom);
  EXPECT_NEAR(v[0], -0.2, 1e-12);
  EXPECT_NEAR(v[1], 0.2, 1e-12);
  EXPECT_EQ(v[2], 0.0);
}

TEST(Torus, MinImageStaysInHalfOpenRange) {
  const TorusDomain dom(3, 7.0);
  CounterRng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Point p{7 * rng.uniform(), 7 * rng.uniform(), 7 * rng.uniform()};
    const Point q{7 * rng.uniform(), 7 * rng.uniform(), 7 * rng.uniform()};
    const Point v = min_image(p, q, dom);
    for (int c = 0; c < 3; ++c) {
      EXPECT_GE(v[c], -3.5);
      EXPECT_LT(v[c], 3.5);
    }
  }
}

TEST(Torus, RejectsBadGeometry) {
  EXPECT_THROW(TorusDomain(0, 1.0), std::invalid_argument);
  EXPECT_THROW(TorusDomain(4, 1.0), std::invalid_argument);
  EXPECT_THROW(TorusDomain(1, 0.0), std::invalid_argument);
}

TEST(Kernels, TopHatIntegralsInEachDimension) {
  for (int d = 1; d <= 3; ++d) {
    const RadialProfile p(KernelFamily::TopHat, 2.0, 0.7, d);
    EXPECT_NEAR(p.integral(), 2.0 * ball_volume(d, 0.7), 1e-14);
    EXPECT_EQ(p.cutoff(), 0.7);
    EXPECT_EQ(p.tail_fraction(), 0.0);
  }
}

TEST(Kernels, TruncatedTailsStayBelowTolerance) {
  for (auto fam : {KernelFamily::TruncatedGaussian, KernelFamily::TruncatedExponential}) {
    for (int d = 1; d <= 3; ++d) {
      const RadialProfile p(fam, 1.0, 0.5, d);
      EXPECT_LT(p.tail_fraction(), kKernelTailTolerance);
      EXPECT_GT(p.cutoff(), 0.5);
      EXPECT_EQ(p(p.cutoff() * 1.0001), 0.0);
      EXPECT_GT(p(0.0), 0.0);
    }
  }
}

TEST(Kernels, GaussianIntegralMatchesClosedForm) {
  const RadialProfile g(KernelFamily::TruncatedGaussian, 1.0, 0.5, 2);
  // untruncated: 2 pi sigma^2 times the peak
  EXPECT_NEAR(g.integral(), 2.0 * M_PI * 0.25, 1e-10);
}

TEST(Kernels, RadiusSamplerMatchesMassFunction) {
  const RadialProfile p(KernelFamily::TruncatedExponential, 1.0, 0.3, 2);
  for (double u : {0.1, 0.25, 0.5, 0.9}) {
    const double r = p.sample_radius(u);
    EXPECT_NEAR(p.mass_within(r) / p.integral(), u, 1e-9);
  }
}

TEST(Kernels, DerivedConstants) {
  const KernelSpec k = top_hat_pair(1, 1.125, 1.0 / 2.25, 0.375, 0.5 / 0.75);
  EXPECT_NEAR(k.alpha, 1.0, 1e-14);
  EXPECT_NEAR(k.mean_phi, 0.5, 1e-14);
  EXPECT_NEAR(k.sup_phi, 0.5 / 0.75, 1e-14);
  EXPECT_EQ(k.cutoff_radius, 1.125);
}

TEST(Kernels, RepulsionDeficitNeverExceedsMeanPhi) {
  for (double height : {0.0, 0.1, 1.0, 5.0}) {
    const KernelSpec k = top_hat_pair(2, 1.0, 1.0, 0.4, height);
    const double deficit = repulsion_deficit_integral(k.phi);
    EXPECT_LE(deficit, k.mean_phi + 1e-12);
    EXPECT_NEAR(deficit, (1.0 - std::exp(-height)) * ball_volume(2, 0.4), 1e-12);
  }
}

TEST(Kernels, RejectsNegativeOrDegenerateParameters) {
  EXPECT_THROW(RadialProfile(KernelFamily::TopHat, -1.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(RadialProfile(KernelFamily::TopHat, 1.0, 0.0, 1), std::invalid_argument);
  EXPECT_THROW((void)parse_kernel_family("cosine"), std::invalid_argument);
}

TEST(Functionals, RateWithoutRepulsionIsTheJumpKernel) {
  const TorusDomain dom(1, 20.0);
  const KernelSpec k = top_hat_pair(1, 1.0, 0.5, 0.4, 0.0);
  const Configuration g = Configuration::from_positions(std::vector<Point>{{1, 0, 0}, {1.2, 0, 0}, {5, 0, 0}});
  EXPECT_EQ(jump_rate_c(0, {1.5, 0, 0}, g, k, dom), 0.5);
}

TEST(Functionals, LoneParticleFeelsItsSelfTerm) {
  const TorusDomain dom(1, 20.0);
  const KernelSpec k = top_hat_pair(1, 1.0, 0.5, 0.4, 0.8);
  const Configuration g = Configuration::from_positions(std::vector<Point>{{3, 0, 0}});
  EXPECT_NEAR(jump_rate_c(0, {3.3, 0, 0}, g, k, dom), 0.5 * std::exp(-0.8), 1e-15);
  // landing beyond the potential range
  EXPECT_EQ(jump_rate_c(0, {3.9, 0, 0}, g, k, dom), 0.5);
  const KernelSpec excl = top_hat_pair(1, 1.0, 0.5, 0.4, 0.8, true);
  EXPECT_EQ(jump_rate_c(0, {3.3, 0, 0}, g, excl, dom), 0.5);
}

TEST(Functionals, RateRejectsUnknownParticle) {
  const TorusDomain dom(1, 20.0);
  const KernelSpec k = top_hat_pair(1, 1.0, 0.5, 0.4, 0.8);
  const Configuration g = Configuration::from_positions(std::vector<Point>{{3, 0, 0}});
  EXPECT_THROW((void)jump_rate_c(7, {3.3, 0, 0}, g, k, dom), std::invalid_argument);
}

TEST(Functionals, TotalEnergy) {
  const TorusDomain dom(1, 20.0);
  const KernelSpec k = top_hat_pair(1, 1.0, 0.5, 0.4, 0.8);
  EXPECT_EQ(total_energy(Configuration{}, k, dom), 0.0);
  EXPECT_EQ(total_energy(Configuration::from_positions(std::vector<Point>{{3, 0, 0}}), k, dom), 0.0);
  EXPECT_EQ(total_energy(Configuration::from_positions(std::vector<Point>{{3, 0, 0}, {8, 0, 0}}), k, dom), 0.0);
  EXPECT_EQ(total_energy(Configuration::from_positions(std::vector<Point>{{3, 0, 0}, {3.3, 0, 0}}), k, dom), 0.8);
  // across the periodic boundary
  EXPECT_EQ(total_energy(Configuration::from_positions(std::vector<Point>{{0.1, 0, 0}, {19.9, 0, 0}}), k, dom), 0.8);
}

TEST(Functionals, ProductOverConfiguration) {
  auto f = [](const Point& p) { return 1.0 + p[0]; };
  EXPECT_EQ(e_product(f, std::span<const Point>{}), 1.0);
  const std::vector<Point> eta{{1, 0, 0}, {2, 0, 0}};
  EXPECT_EQ(e_product(f, eta), 6.0);
}

TEST(Functionals, KTransformCountsSubsets) {
  const BoxRegion box{1, {0, 0, 0}, {2, 0, 0}};
  const FiniteSupportFunction singles(box, 0.0, {[](std::span<const Point> e) { return e[0][0]; }});
  const Configuration g =
      Configuration::from_positions(std::vector<Point>{{0.5, 0, 0}, {1.5, 0, 0}, {3.0, 0, 0}});
  EXPECT_DOUBLE_EQ(k_transform(singles, g), 2.0);
  EXPECT_EQ(k_transform(singles, Configuration{}), 0.0);

  const FiniteSupportFunction pairs(box, 0.0, {[](std::span<const Point>) { return 0.0; },
                                               [](std::span<const Point>) { return 1.0; }});
  const Configuration four = Configuration::from_positions(
      std::vector<Point>{{0.1, 0, 0}, {0.4, 0, 0}, {1.1, 0, 0}, {1.9, 0, 0}, {2.5, 0, 0}});
  EXPECT_DOUBLE_EQ(k_transform(pairs, four), 6.0);
}

TEST(Functionals, LebesguePoissonIntegrals) {
  const FiniteSupportFunction only_empty(BoxRegion{1, {0, 0, 0}, {1, 0, 0}}, 1.0, {});
  EXPECT_EQ(lp_integral_truncated(only_empty, 3, QuadratureGrid{BoxRegion{1, {0, 0, 0}, {1, 0, 0}}, 8}), 1.0);

  const BoxRegion two{1, {0, 0, 0}, {2, 0, 0}};
  const FiniteSupportFunction ind1(two, 0.0, {[](std::span<const Point>) { return 1.0; }});
  EXPECT_NEAR(lp_integral_truncated(ind1, 3, QuadratureGrid{two, 16}), 2.0, 1e-14);

  const BoxRegion unit{1, {0, 0, 0}, {1, 0, 0}};
  const FiniteSupportFunction ind2(unit, 0.0, {[](std::span<const Point>) { return 0.0; },
                                               [](std::span<const Point>) { return 1.0; }});
  EXPECT_NEAR(lp_integral_truncated(ind2, 2, QuadratureGrid{unit, 16}), 0.5, 1e-14);
  EXPECT_THROW((void)lp_integral_truncated(ind2, 2, QuadratureGrid{BoxRegion{1, {0, 0, 0}, {0.5, 0, 0}}, 4}),
               std::invalid_argument);
}

TEST(Rng, StreamsAreReproducibleAndSeedSensitive) {
  CounterRng a(42), b(42), c(43);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Rng, CounterSkipsAhead) {
  CounterRng a(9);
  for (int i = 0; i < 17; ++i) (void)a();
  CounterRng b(9, 17);
  EXPECT_EQ(a(), b());
}

TEST(Rng, UniformMomentsAndBounds) {
  CounterRng r(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(7), 7u);
}
