#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rkbudget/bounds.hpp"

using namespace rkbudget;

namespace {

const ProblemBounds kClassical{0.5, 3.1, 13.0, 5.0, 1e-3};
const ProblemBounds kOption{15.0, 15.0, 60.0, 0.04, 1e-3};

}  // namespace

TEST(FFactor, EulerLimit) {
  const auto prof = order_profile(1, 5.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(f_factor(10, prof, 0.5, 5.0), 0.25);
}

TEST(FFactor, ClassicalFirstOrderRow) {
  const auto prof = order_profile(1, 5.0, 1.0, 1.0);
  EXPECT_NEAR(f_factor(2.25e7, prof, 0.5, 5.0), 1.111e-7, 1e-10);
}

TEST(FFactor, TwoStages) {
  EXPECT_DOUBLE_EQ(f_factor(1, order_profile(2, 1.0), 1.0, 1.0), 3.0);
}

TEST(FFactor, ZeroAmaxNeedsSingleStage) {
  EXPECT_THROW(f_factor(10, order_profile(2, 1.0, 0.0, 1.0), 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(f_factor(0.5, order_profile(1, 1.0), 1.0, 1.0), std::invalid_argument);
}

TEST(FFactor, SmallAmaxApproachesLimit) {
  // For s = 1 the general form is exactly b L T / N for every a_max > 0.
  for (double a : {1e-3, 1e-8, 1.0, 7.0}) {
    const double general = f_factor(37, order_profile(1, 1.0, a, 0.8), 0.5, 5.0);
    const double limit = f_factor(37, order_profile(1, 1.0, 0.0, 0.8), 0.5, 5.0);
    EXPECT_NEAR(general / limit, 1.0, 1e-10) << a;
  }
}

TEST(Lte, Examples) {
  EXPECT_DOUBLE_EQ(lte_bound(0.1, order_profile(1, 1.0), 1.0, 1.0), 0.01);
  EXPECT_NEAR(lte_bound(1e-3, order_profile(4, 5.0), 3.1, 13.0), 6.0028865e-12, 1e-26);
  const auto p2 = order_profile(2, 5.0);
  EXPECT_NEAR(lte_bound(0.02, p2, 2.0, 3.0) / lte_bound(0.01, p2, 2.0, 3.0), 8.0, 1e-12);
  EXPECT_THROW(lte_bound(0.0, p2, 1.0, 1.0), std::invalid_argument);
}

TEST(GlobalBound, ClassicalFirstOrderNearTarget) {
  const double e = global_error_bound_noiseless(kClassical, order_profile(1, 5.0), 2.25e7);
  EXPECT_NEAR(e / 1e-3, 1.0, 0.02);
  EXPECT_NEAR(e, 1.0016e-3, 2e-6);
}

TEST(GlobalBound, SmallFLimit) {
  // F -> 0: bound ~ N * LTE
  const ProblemBounds pb{1e-9, 1.0, 1.0, 1.0, 1.0};
  const auto prof = order_profile(2, 1.0);
  const double n = 100;
  const double lte = lte_bound(1.0 / n, prof, 1.0, 1.0);
  EXPECT_NEAR(global_error_bound_noiseless(pb, prof, n) / (n * lte), 1.0, 1e-6);
}

TEST(GlobalBound, SingleStep) {
  const auto prof = order_profile(1, 2.0, 0.0, 1.0);
  const ProblemBounds pb{0.7, 1.5, 3.0, 2.0, 1.0};
  EXPECT_NEAR(global_error_bound_noiseless(pb, prof, 1),
              std::pow(2.0, 2) * 2.0 * 1.5 * 3.0, 1e-12);
}

TEST(GlobalBound, NoisyAtZeroIsIdentical) {
  for (int p = 1; p <= 10; ++p) {
    const auto prof = order_profile(p, 5.0);
    for (double n : {1.0, 17.0, 2.5e4, 3.3e7})
      EXPECT_EQ(global_error_bound_noisy(kOption, prof, n, 0.0),
                global_error_bound_noiseless(kOption, prof, n));
  }
}

TEST(GlobalBound, NoisyOptionRowNearTarget) {
  const double delta = 3.4e8 / std::sqrt(7.03e21);
  const double e = global_error_bound_noisy(kOption, order_profile(1, 5.0), 29596, delta);
  EXPECT_NEAR(e / 1e-3, 1.0, 0.01);
}

TEST(GlobalBound, NoisyMonotoneInDelta) {
  const auto prof = order_profile(3, 5.0);
  const double a = global_error_bound_noisy(kOption, prof, 40, 1e-4);
  const double b = global_error_bound_noisy(kOption, prof, 40, 2e-4);
  EXPECT_GT(b, a);
  EXPECT_THROW(global_error_bound_noisy(kOption, prof, 40, -1e-4), std::invalid_argument);
}

TEST(GlobalBound, OverflowIsInfinite) {
  const ProblemBounds pb{1e3, 1.0, 1.0, 100.0, 1.0};
  // (1 + F)^N is about 1e1200 here.
  EXPECT_TRUE(std::isinf(global_error_bound_noiseless(pb, order_profile(4, 5.0), 100)));
}

TEST(GlobalBound, RejectsBadProblem) {
  ProblemBounds pb = kClassical;
  pb.M = 0.0;
  EXPECT_THROW(global_error_bound_noiseless(pb, order_profile(1, 5.0), 10), std::invalid_argument);
}

// Property: the log1p/expm1 evaluation agrees with a naive power evaluation
// where the latter is well conditioned, and the bound is increasing in T, K,
// M, L_ftau and delta. With noise the truncation part can fall below the
// resolution of the sum, so there the check is non-decreasing.
TEST(BoundsProperty, AgreesWithNaiveFormAndIsMonotone) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> L(0.05, 2.0), Lt(0.5, 5.0), M(0.5, 20.0), T(0.1, 3.0),
      K(0.5, 10.0), amax(0.1, 2.0), bmax(0.2, 1.0), delta(0.0, 1e-2);
  std::uniform_int_distribution<int> order(1, 10), steps(1, 500);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = order(rng);
    const auto prof = order_profile(p, K(rng), amax(rng), bmax(rng));
    const ProblemBounds pb{L(rng), Lt(rng), M(rng), T(rng), 1e-3};
    const double n = steps(rng);
    const double d = delta(rng);
    const double fast = global_error_bound_noisy(pb, prof, n, d);
    const double naive = oracle::naive_global_bound(n, p, prof.stages, prof.a_max, prof.b_max,
                                                    prof.K, pb.L_fy, pb.L_ftau, pb.M, pb.T, d);
    ASSERT_NEAR(fast / naive, 1.0, 1e-9) << "trial " << trial;

    const double clean = global_error_bound_noiseless(pb, prof, n);
    auto bumped = [&](auto mutate, double dd) {
      ProblemBounds q = pb;
      auto pr = prof;
      mutate(q, pr);
      return global_error_bound_noisy(q, pr, n, dd);
    };
    const auto bumpT = [](ProblemBounds& q, MethodProfile&) { q.T *= 1.1; };
    const auto bumpK = [](ProblemBounds&, MethodProfile& pr) { pr.K *= 1.1; };
    const auto bumpM = [](ProblemBounds& q, MethodProfile&) { q.M *= 1.1; };
    const auto bumpLt = [](ProblemBounds& q, MethodProfile&) { q.L_ftau *= 1.1; };
    EXPECT_GT(bumped(bumpT, 0.0), clean);
    EXPECT_GT(bumped(bumpK, 0.0), clean);
    EXPECT_GT(bumped(bumpM, 0.0), clean);
    EXPECT_GT(bumped(bumpLt, 0.0), clean);
    EXPECT_GT(bumped(bumpT, d), fast);
    EXPECT_GE(bumped(bumpK, d), fast);
    EXPECT_GE(bumped(bumpM, d), fast);
    EXPECT_GE(bumped(bumpLt, d), fast);
    EXPECT_GT(global_error_bound_noisy(pb, prof, n, d + 1e-3), fast);
  }
}
