#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rkbudget/integrator.hpp"

using namespace rkbudget;

namespace {

VectorField half() {
  return [](double, std::span<const double> y) {
    State d(y.begin(), y.end());
    for (auto& v : d) v *= 0.5;
    return d;
  };
}

ExactSolution exp_half() {
  return [](double tau) { return State{std::exp(0.5 * tau)}; };
}

}  // namespace

TEST(RkStep, EulerHalf) {
  EvaluationOracle f(half());
  const auto y = rk_step(builtin_tableau(MethodId::euler), f, 0.0, State{1.0}, 0.1);
  EXPECT_DOUBLE_EQ(y[0], 1.05);
  EXPECT_EQ(f.evaluations(), 1u);
}

TEST(RkStep, Rk4HandEvaluated) {
  // k1 = 0.5, k2 = 0.625, k3 = 0.65625, k4 = 0.828125
  const double k1 = 0.5, k2 = 0.5 * (1 + 0.5 * k1), k3 = 0.5 * (1 + 0.5 * k2), k4 = 0.5 * (1 + k3);
  EXPECT_EQ(k2, 0.625);
  EXPECT_EQ(k3, 0.65625);
  EXPECT_EQ(k4, 0.828125);
  EvaluationOracle f(half());
  const auto y = rk_step(builtin_tableau(MethodId::rk4), f, 0.0, State{1.0}, 1.0);
  EXPECT_DOUBLE_EQ(y[0], 1.0 + (k1 + 2 * k2 + 2 * k3 + k4) / 6.0);
  EXPECT_DOUBLE_EQ(y[0], 1.6484375);
  EXPECT_NEAR(y[0], std::exp(0.5), 3e-4);
  EXPECT_EQ(f.evaluations(), 4u);
}

TEST(RkStep, ZeroFieldFixedPoint) {
  EvaluationOracle zero([](double, std::span<const double> y) { return State(y.size(), 0.0); });
  const State y0{1.5, -2.0, 3.0};
  for (auto id : builtin_methods())
    EXPECT_EQ(rk_step(builtin_tableau(id), zero, 0.3, y0, 0.7), y0);
}

TEST(RkStep, NonFiniteIsStepFailure) {
  EvaluationOracle bad([](double, std::span<const double>) { return State{NAN}; });
  EXPECT_THROW(rk_step(builtin_tableau(MethodId::euler), bad, 0.0, State{1.0}, 0.1), StepFailure);
  EXPECT_THROW(rk_step(builtin_tableau(MethodId::euler), bad, 0.0, State{1.0}, 0.0),
               std::invalid_argument);
}

TEST(Integrate, EulerCompounding) {
  EvaluationOracle f(half());
  const auto traj = integrate(builtin_tableau(MethodId::euler), f, State{1.0}, 0.0, 5.0, 10);
  EXPECT_NEAR(traj.final_state()[0], std::pow(1.25, 10), 1e-12);
  EXPECT_NEAR(traj.final_state()[0], 9.31323, 1e-5);
}

TEST(Integrate, SingleStepEqualsRkStep) {
  for (auto id : builtin_methods()) {
    const auto t = builtin_tableau(id);
    EvaluationOracle f1(half()), f2(half());
    const auto traj = integrate(t, f1, State{1.0}, 0.2, 0.9, 1);
    EXPECT_EQ(traj.final_state(), rk_step(t, f2, 0.2, State{1.0}, 0.9));
  }
}

TEST(Integrate, Rk4Accuracy) {
  EvaluationOracle f(half());
  const auto traj = integrate(builtin_tableau(MethodId::rk4), f, State{1.0}, 0.0, 5.0, 64);
  EXPECT_LT(std::abs(traj.final_state()[0] - std::exp(2.5)), 1e-6);
}

TEST(Integrate, TimeGrid) {
  EvaluationOracle f(half());
  const auto traj = integrate(builtin_tableau(MethodId::heun2), f, State{1.0}, 0.3, 0.7, 7);
  ASSERT_EQ(traj.times.size(), 8u);
  EXPECT_EQ(traj.times.front(), 0.3);
  EXPECT_EQ(traj.times.back(), 0.3 + 0.7);
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    EXPECT_NEAR(traj.times[i] - traj.times[i - 1], 0.1, 1e-12 * 0.1);
}

TEST(Integrate, FailureCarriesStepIndex) {
  EvaluationOracle f([](double tau, std::span<const double> y) {
    return State{tau > 0.45 ? INFINITY : y[0]};
  });
  try {
    integrate(builtin_tableau(MethodId::euler), f, State{1.0}, 0.0, 1.0, 10);
    FAIL();
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.step(), 5);
  }
}

TEST(Integrate, RejectsBadArguments) {
  EvaluationOracle f(half());
  const auto t = builtin_tableau(MethodId::euler);
  EXPECT_THROW(integrate(t, f, State{1.0}, 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(integrate(t, f, State{1.0}, 0.0, 0.0, 4), std::invalid_argument);
}

TEST(Integrate, CsvExport) {
  EvaluationOracle f([](double, std::span<const double> y) { return State{y[1], -y[0]}; });
  const auto traj = integrate(builtin_tableau(MethodId::rk4), f, State{1.0, 0.0}, 0.0, 1.0, 2);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,tau,y_0,y_1");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.0000000000000000e+00,1.0000000000000000e+00,0.0000000000000000e+00");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Noise, DeterministicWithSeed) {
  const auto t = builtin_tableau(MethodId::rk4);
  const auto spec = NoiseSpec::from_delta(1e-3, 0.05, NoiseMode::gaussian);
  EvaluationOracle a(half(), spec, 99), b(half(), spec, 99), c(half(), spec, 100);
  const auto ta = integrate(t, a, State{1.0}, 0.0, 5.0, 50);
  const auto tb = integrate(t, b, State{1.0}, 0.0, 5.0, 50);
  const auto tc = integrate(t, c, State{1.0}, 0.0, 5.0, 50);
  EXPECT_EQ(ta.states, tb.states);
  EXPECT_NE(ta.states, tc.states);
}

TEST(Noise, OffIsBitIdentical) {
  const auto t = builtin_tableau(MethodId::kutta3);
  EvaluationOracle a(half()), b(half());
  EXPECT_EQ(integrate(t, a, State{1.0}, 0.0, 5.0, 33).states,
            integrate(t, b, State{1.0}, 0.0, 5.0, 33).states);
}

TEST(Noise, ClippedNeverExceedsDelta) {
  // Large sd relative to delta so that clipping actually happens.
  NoiseSpec spec{10.0, 0.5, 4.0, NoiseMode::clipped_gaussian};
  const double delta = spec.delta();
  EvaluationOracle f([](double, std::span<const double> y) { return State(y.size(), 0.0); }, spec,
                     7);
  const State y(5, 0.0);
  for (int i = 0; i < 5000; ++i) {
    const auto out = f(0.0, y);
    EXPECT_LE(norm2(out), delta);
  }
  EXPECT_GT(f.exceedances(), 0u);
  EXPECT_LE(f.max_perturbation(), delta);
}

TEST(Noise, GaussianExceedanceBelowEta) {
  for (double eta : {0.05, 0.2}) {
    const auto spec = NoiseSpec::from_delta(1.0, eta, NoiseMode::gaussian);
    EvaluationOracle f([](double, std::span<const double> y) { return State(y.size(), 0.0); },
                       spec, 11);
    const int n = 20000;
    const State y(3, 0.0);
    for (int i = 0; i < n; ++i) f(0.0, y);
    const double rate = static_cast<double>(f.exceedances()) / n;
    EXPECT_LE(rate, eta + 3.0 * std::sqrt(eta * (1 - eta) / n));
  }
}

TEST(Noise, SpecArithmetic) {
  NoiseSpec s{3.4e8, 0.05, 7.03e21, NoiseMode::gaussian};
  EXPECT_NEAR(s.delta(), 3.4e8 / std::sqrt(7.03e21), 1e-18);
  EXPECT_NEAR(s.sigma_single(), 3.4e8 * std::sqrt(0.05), 1e-6);
  EXPECT_EQ(noise_mode_from_name("clipped"), NoiseMode::clipped_gaussian);
  EXPECT_EQ(noise_mode_from_name("clipped-gaussian"), NoiseMode::clipped_gaussian);
  EXPECT_THROW(noise_mode_from_name("uniform"), std::invalid_argument);
  EXPECT_THROW(EvaluationOracle(half(), NoiseSpec{1.0, 1.5, 1.0, NoiseMode::gaussian}, 1),
               std::invalid_argument);
}

TEST(EmpiricalOrder, Slopes) {
  const std::vector<long> grid{8, 16, 32, 64, 128};
  const double lo[] = {0.85, 1.85, 2.85, 3.7};
  const double hi[] = {1.15, 2.15, 3.15, 4.3};
  int i = 0;
  for (auto id : builtin_methods()) {
    const auto res = empirical_order(builtin_tableau(id), half(), exp_half(), 0.0, 5.0, grid);
    EXPECT_FALSE(res.degenerate);
    EXPECT_GE(res.slope, lo[i]) << method_name(id);
    EXPECT_LE(res.slope, hi[i]) << method_name(id);
    ++i;
  }
}

TEST(EmpiricalOrder, ConstantFieldIsDegenerate) {
  const auto c = [](double, std::span<const double>) { return State{2.0}; };
  const auto exact = [](double tau) { return State{1.0 + 2.0 * tau}; };
  const auto res =
      empirical_order(builtin_tableau(MethodId::rk4), c, exact, 0.0, 1.0, {4, 8, 16, 32});
  EXPECT_TRUE(res.degenerate);
  EXPECT_TRUE(std::isnan(res.slope));
  for (double e : res.errors) EXPECT_LE(e, 1e-14);
}

TEST(EmpiricalOrder, NeedsFourPoints) {
  EXPECT_THROW(empirical_order(builtin_tableau(MethodId::euler), half(), exp_half(), 0, 1, {4, 8, 16}),
               std::invalid_argument);
}

// Property: for dy/dtau = lambda y the map y0 -> y(T) is linear.
TEST(IntegratorProperty, LinearInInitialState) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> lam(-2.0, 2.0), y0(-10.0, 10.0), scale(-5.0, 5.0);
  std::uniform_int_distribution<long> steps(1, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const double l = lam(rng);
    const auto f = [l](double, std::span<const double> y) { return State{l * y[0]}; };
    const auto t = builtin_tableau(builtin_methods()[trial % 4]);
    const double a = y0(rng), c = scale(rng);
    const long n = steps(rng);
    EvaluationOracle o1(f), o2(f);
    const double ya = integrate(t, o1, State{a}, 0.0, 1.0, n).final_state()[0];
    const double yca = integrate(t, o2, State{c * a}, 0.0, 1.0, n).final_state()[0];
    EXPECT_NEAR(yca, c * ya, 1e-12 * std::max(1.0, std::abs(c * ya)));
  }
}
