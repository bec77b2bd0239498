#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "codingsim/memory_kernel.hpp"
#include "codingsim/rng.hpp"
#include "oracles.hpp"

namespace codingsim {
namespace {

const MemoryParams kRef{};  // mu=0.3, theta=0.2, lambda=0.005631

TEST(ForgettingFactorTest, Examples) {
  EXPECT_EQ(forgetting_factor(0.0, 0.005631), 1.0);
  EXPECT_NEAR(forgetting_factor(24.0, 0.005631), oracle::kFactor24h, 1e-15);
  EXPECT_LT(forgetting_factor(72.01, 0.005631), 2.0 / 3.0);
  EXPECT_GT(forgetting_factor(72.0, 0.005631), 2.0 / 3.0);
}

TEST(ForgettingFactorTest, RejectsNegativeElapsed) {
  EXPECT_THROW(forgetting_factor(-1e-9, 0.005631), std::domain_error);
  EXPECT_THROW(forgetting_factor(1.0, 0.0), std::domain_error);
}

TEST(ForgettingFactorTest, MonotoneNonIncreasing) {
  SplitMix64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double lambda = rng.uniform(1e-4, 1.0);
    const double t1 = rng.uniform(0.0, 500.0);
    const double t2 = t1 + rng.uniform(0.0, 500.0);
    EXPECT_LE(forgetting_factor(t2, lambda), forgetting_factor(t1, lambda));
  }
}

TEST(DecayedWeightTest, Examples) {
  EXPECT_EQ(decayed_weight(0.3, 5.0, 5.0, kRef), 0.3);
  EXPECT_NEAR(decayed_weight(0.3, 0.0, 24.0, kRef), oracle::kDecayed24h, 1e-15);
  ASSERT_LT(oracle::kDecayed100h, kRef.theta);
  EXPECT_EQ(decayed_weight(0.3, 0.0, 100.0, kRef), 0.0);
}

TEST(DecayedWeightTest, RejectsBackwardsTime) {
  EXPECT_THROW(decayed_weight(0.3, 10.0, 9.0, kRef), std::domain_error);
}

TEST(DecayedWeightTest, ExactlyThetaSurvives) {
  const double below = std::nextafter(kRef.theta, 0.0);
  EXPECT_EQ(decayed_weight(kRef.theta, 0.0, 0.0, kRef), kRef.theta);
  EXPECT_EQ(decayed_weight(below, 0.0, 0.0, kRef), 0.0);
  EXPECT_EQ(reinforce(kRef.theta, 0.0, 0.0, kRef), kRef.mu + kRef.theta * (1.0 - kRef.mu));
  EXPECT_EQ(reinforce(below, 0.0, 0.0, kRef), kRef.mu);
}

TEST(DecayedWeightTest, RangeProperty) {
  SplitMix64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double w = rng.uniform();
    const double dt = rng.uniform(0.0, 200.0);
    const double d = decayed_weight(w, 0.0, dt, kRef);
    EXPECT_TRUE(d == 0.0 || (d >= kRef.theta && d <= w)) << w << " " << dt << " " << d;
  }
}

TEST(DecayedWeightTest, CompositionMatchesDirectDecay) {
  SplitMix64 rng(13);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const double w = rng.uniform(kRef.mu, 1.0);
    const double t1 = rng.uniform(0.0, 40.0);
    const double t2 = t1 + rng.uniform(0.0, 40.0);
    const double mid = decayed_weight(w, 0.0, t1, kRef);
    const double direct = decayed_weight(w, 0.0, t2, kRef);
    if (mid == 0.0 || direct == 0.0) continue;
    EXPECT_NEAR(decayed_weight(mid, t1, t2, kRef), direct, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(DecayedWeightTest, PeakLandsOnThetaAfterLifetime) {
  for (const MemoryParams& p : {kRef, MemoryParams{0.4, 0.1, oracle::kLambdaTenDays, {}},
                                MemoryParams{0.9, 0.05, 0.3, {}}}) {
    const double L = trace_lifetime(p);
    EXPECT_NEAR(p.mu * forgetting_factor(L, p.lambda), p.theta, 1e-9);
  }
}

TEST(ReinforceTest, Examples) {
  EXPECT_EQ(reinforce(0.0, 0.0, 0.0, kRef), 0.3);
  EXPECT_EQ(reinforce(0.0, 0.0, 1234.5, kRef), 0.3);
  EXPECT_NEAR(reinforce(0.3, 0.0, 24.0, kRef), oracle::kReinforced24h, 1e-15);
  EXPECT_EQ(reinforce(0.3, 0.0, 100.0, kRef), 0.3);
}

TEST(ReinforceTest, RejectsBackwardsTime) {
  EXPECT_THROW(reinforce(0.3, 10.0, 9.0, kRef), std::domain_error);
}

TEST(ReinforceTest, RangeAndMonotonicity) {
  SplitMix64 rng(17);
  for (int i = 0; i < 20000; ++i) {
    const double mu = rng.uniform(0.01, 1.0);
    const MemoryParams p{mu, mu * rng.uniform(0.01, 0.99), rng.uniform(1e-4, 0.5), {}};
    const double dt = rng.uniform(0.0, 100.0);
    const double w1 = rng.uniform();
    const double w2 = rng.uniform();
    const double r1 = reinforce(w1, 0.0, dt, p);
    const double r2 = reinforce(w2, 0.0, dt, p);
    EXPECT_GE(r1, p.mu);
    EXPECT_LE(r1, 1.0);
    if (w1 <= w2) EXPECT_LE(r1, r2);
  }
}

TEST(ReinforceTest, FullWeightStaysAtOne) {
  EXPECT_EQ(reinforce(1.0, 3.0, 3.0, kRef), 1.0);
}

TEST(TraceLifetimeTest, ReferenceConstants) {
  EXPECT_NEAR(trace_lifetime(kRef), oracle::kLifetimeDefault, 1e-6 * oracle::kLifetimeDefault);
  EXPECT_NEAR(trace_lifetime(kRef), 72.01, 0.01);
}

TEST(TraceLifetimeTest, TenDayInversion) {
  const double lambda = lambda_for_lifetime(0.4, 0.1, 240.0);
  EXPECT_NEAR(lambda, oracle::kLambdaTenDays, 1e-6 * oracle::kLambdaTenDays);
  EXPECT_NEAR(lambda, 0.005776, 1e-6);
  EXPECT_NEAR(trace_lifetime({0.4, 0.1, lambda, {}}), 240.0, 1e-9);
}

TEST(TraceLifetimeTest, UnitLifetime) {
  EXPECT_NEAR(trace_lifetime({std::exp(1.0) * 0.1, 0.1, 1.0, {}}), 1.0, 1e-15);
}

TEST(TraceLifetimeTest, InvalidParams) {
  EXPECT_THROW(trace_lifetime({0.3, 0.3, 0.1, {}}), ConfigError);
  EXPECT_THROW(lambda_for_lifetime(0.4, 0.1, 0.0), ConfigError);
}

TEST(ClosedFormOracleTest, AgreesWithRecursionOnHandCase) {
  // Three reinforcements 24 h apart, read 10 h after the last.
  const double times[] = {0.0, 24.0, 48.0};
  double w = 0.0, t = 0.0;
  for (double ti : times) {
    w = reinforce(w, t, ti, kRef);
    t = ti;
  }
  EXPECT_NEAR(decayed_weight(w, t, 58.0, kRef),
              oracle::channel_closed_form(times, 58.0, kRef), 1e-14);
}

}  // namespace
}  // namespace codingsim
