#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <kawasaki/lambert_w.hpp>
#include <kawasaki/rng.hpp>
#include <kawasaki/scheduler.hpp>

using namespace kawasaki;

namespace {

ScaleParams params(double alpha, double mean_phi, double C = 1.0, double eps = 0.1) {
  ScaleParams p;
  p.alpha = alpha;
  p.mean_phi = mean_phi;
  p.C = C;
  p.epsilon = eps;
  return p;
}

}  // namespace

TEST(LambertW, KnownValues) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), 0.5671432904097838, 1e-15);
  EXPECT_THROW((void)lambert_w0(-0.1), std::domain_error);
  EXPECT_THROW((void)lambert_w0(std::nan("")), std::domain_error);
}

TEST(LambertW, ResidualOnRandomInputs) {
  CounterRng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::pow(10.0, -12.0 + 24.0 * rng.uniform());
    const double w = lambert_w0(x);
    ASSERT_LT(std::abs(w * std::exp(w) - x) / x, 1e-14) << x;
  }
}

TEST(LambertW, ExponentialArgumentForm) {
  for (double lx : {-5.0, 0.0, 3.0, 699.0, 701.0, 5000.0, 1e6}) {
    const double w = lambert_w0_exp(lx);
    EXPECT_NEAR(w + std::log(w), lx, 1e-12 * std::max(1.0, std::abs(lx)));
  }
}

TEST(Horizon, ClosedForms) {
  const ScaleParams p = params(1.0, 1.0);
  EXPECT_NEAR(horizon_T(1.0, 0.0, p), 0.5 * std::exp(-std::numbers::e), 1e-15);
  EXPECT_NEAR(horizon_T(1.0, 0.0, p), 0.0329940, 1e-7);
  EXPECT_NEAR(horizon_T(1e-9, 0.0, p), 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(horizon_Tbar(1.0, 0.0, p), 0.5);
  EXPECT_THROW((void)horizon_T(0.0, 0.0, p), std::invalid_argument);
  EXPECT_THROW((void)horizon_Tbar(0.0, 1.0, p), std::invalid_argument);
}

TEST(Delta, KnownValuesAndMonotonicity) {
  const ScaleParams p = params(1.0, 1.0);
  EXPECT_NEAR(delta_theta(0.0, p), 0.5671432904, 1e-10);
  EXPECT_NEAR(delta_theta(-1.0, p), 1.0, 1e-14);
  double prev = delta_theta(-5.0, p);
  for (double th = -4.9; th < 30.0; th += 0.1) {
    const double d = delta_theta(th, p);
    ASSERT_LT(d, prev);
    ASSERT_GT(d, 0.0);
    prev = d;
  }
}

TEST(Tau, MatchesGridSearchMaximum) {
  const ScaleParams p = params(1.0, 1.0);
  const double tau = tau_theta(0.0, p);
  EXPECT_NEAR(tau, 0.0486, 5e-5);
  double best = 0.0;
  for (int k = 1; k <= 500000; ++k) best = std::max(best, horizon_T(1e-5 * k, 0.0, p));
  EXPECT_NEAR(tau, best, 1e-6);
  EXPECT_LT(tau_theta(20.0, p), 1e-8);
}

TEST(Tau, ArgmaxOfHorizon) {
  const ScaleParams p = params(0.7, 1.3);
  for (double th : {-1.0, 0.0, 0.8}) {
    double best = -1.0, arg = th;
    for (int k = 1; k <= 500000; ++k) {
      const double v = horizon_T(th + 1e-5 * k, th, p);
      if (v > best) {
        best = v;
        arg = th + 1e-5 * k;
      }
    }
    EXPECT_NEAR(arg, th + delta_theta(th, p), 1e-4);
  }
}

TEST(ThetaOfT, Examples) {
  EXPECT_EQ(theta_of_t(0.0, params(1.0, 1.0, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(theta_of_t(2.0, params(1.0, 1.0, 1.0)), 2.0);
  EXPECT_DOUBLE_EQ(theta_of_t(2.0, params(0.5, 1.0, std::numbers::e)), 2.0);
}

TEST(Ladder, DemoReachesTarget) {
  const ScaleParams p = params(0.2, 0.5, 0.3, 0.1);
  const ScaleLadder l = build_ladder(p, 10.0);
  ASSERT_TRUE(l.reached());
  EXPECT_EQ(l.size(), 18u);
  EXPECT_GE(l.reached_time(), 10.0);
  for (std::size_t n = 0; n < l.size(); ++n) {
    EXPECT_NEAR(l.theta_star[n + 1], std::log(0.3) + 0.2 * l.cumulative[n], 1e-12);
    if (n > 0) {
      EXPECT_GT(l.cumulative[n], l.cumulative[n - 1]);
    }
    EXPECT_DOUBLE_EQ(l.steps[n], 0.9 * l.taus[n]);
  }
}

TEST(Ladder, LargerEpsilonNeedsMoreSteps) {
  const ScaleLadder a = build_ladder(params(0.2, 0.5, 0.3, 0.1), 10.0);
  const ScaleLadder b = build_ladder(params(0.2, 0.5, 0.3, 0.5), 10.0);
  ASSERT_TRUE(a.reached() && b.reached());
  EXPECT_GT(b.size(), a.size());
  EXPECT_EQ(b.size(), 32u);
}

TEST(Ladder, NearUnitEpsilonStillTerminates) {
  const ScaleLadder l = build_ladder(params(1.0, 1.0, 1.0, 0.99), 1.0);
  EXPECT_TRUE(l.reached());
}

TEST(Ladder, StepCapIsReported) {
  const ScaleLadder l = build_ladder(params(1.0, 1.0, 1.0, 0.1), 10.0, 1000);
  EXPECT_EQ(l.status, LadderStatus::StepCap);
  EXPECT_EQ(l.size(), 1000u);
  EXPECT_LT(l.reached_time(), 10.0);
}

TEST(Ladder, RejectsBadInput) {
  EXPECT_THROW((void)build_ladder(params(1.0, 1.0), 0.0), std::invalid_argument);
  EXPECT_THROW((void)build_ladder(params(1.0, 1.0, 1.0, 1.0), 1.0), std::invalid_argument);
  EXPECT_THROW((void)build_ladder(params(-1.0, 1.0), 1.0), std::invalid_argument);
}

TEST(Certificate, ClosedForms) {
  const ScaleParams p = params(1.0, 1.0);
  const double T = horizon_T(1.0, 0.0, p);
  const Certificate half = norm_certificate(0.0, 1.0, 0.5 * T, p, 3);
  EXPECT_TRUE(half.valid);
  EXPECT_NEAR(half.norm_bound, 2.0, 1e-14);
  EXPECT_NEAR(half.single_application_bound, 2.0, 1e-14);
  ASSERT_EQ(half.per_factor_bounds.size(), 3u);
  EXPECT_NEAR(half.per_factor_bounds[2], 3.0 / (std::numbers::e * T), 1e-12);

  const Certificate zero = norm_certificate(0.0, 1.0, 0.0, p);
  EXPECT_EQ(zero.norm_bound, 1.0);

  const Certificate past = norm_certificate(0.0, 1.0, T, p);
  EXPECT_FALSE(past.valid);
  EXPECT_TRUE(std::isinf(past.norm_bound));

  const Certificate freec = free_norm_certificate(0.0, 1.0, 0.25, p);
  EXPECT_TRUE(freec.valid);
  EXPECT_TRUE(freec.free_operator);
  EXPECT_NEAR(freec.norm_bound, 2.0, 1e-14);
}
