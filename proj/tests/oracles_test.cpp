#include "fbsde/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fbsde {
namespace {

TEST(FdGradient, LinearPayoffIsNoiselessUnderCommonRandomNumbers) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector a(2), v(2);
  a << 1.0, 0.5;
  v << 0.8, 0.6;
  BackwardDriver driver;
  driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
  const GradientEstimate est = fd_gradient(model, driver, grid,
                                           Vector::Zero(2), v, 1e-3, 2000, 211);
  EXPECT_NEAR(est.value, a.dot(v), 1e-10);
  EXPECT_LE(est.std_error, 1e-10);
  EXPECT_EQ(est.estimator_tag, "finite_difference");
}

TEST(FdGradient, MatchesGaussianBenchmarkOnOuSin) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 50);
  Vector k(2), v(2), x0(2);
  k << 1.0, 0.6;
  v << 0.6, 0.8;
  x0 << 0.3, -0.2;
  BackwardDriver driver;
  driver.terminal_g = [k](const Vector& x) { return std::sin(k.dot(x)); };
  const GradientEstimate est =
      fd_gradient(model, driver, grid, x0, v, 1e-3, 20000, 223);
  BenchmarkParams params;
  params.kappa = 1.0;
  params.horizon = 1.0;
  params.payoff_vector = k;
  const double cf =
      benchmark_value(make_benchmark("ou_sin", params), 0.0, x0, v);
  EXPECT_NEAR(est.value, cf, 3.0 * est.std_error + 0.01);
}

TEST(FdGradient, EpsilonSweepShowsNoVisibleBias) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 25);
  Vector k(2), v(2);
  k << 1.0, 0.6;
  v << 1.0, 0.0;
  BackwardDriver driver;
  driver.terminal_g = [k](const Vector& x) { return std::sin(k.dot(x)); };
  GradientEstimate prev;
  bool first = true;
  for (const double eps : {1e-2, 1e-3, 1e-4}) {
    const GradientEstimate est = fd_gradient(model, driver, grid,
                                             Vector::Zero(2), v, eps, 20000,
                                             227);
    if (!first) {
      const double band = 3.0 * std::sqrt(est.std_error * est.std_error +
                                          prev.std_error * prev.std_error);
      EXPECT_NEAR(est.value, prev.value, band + 1e-3);
    }
    prev = est;
    first = false;
  }
}

TEST(FdGradient, RejectsNonPositiveEps) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 4);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return x(0); };
  EXPECT_THROW(fd_gradient(model, driver, grid, Vector::Zero(2),
                           Vector::Unit(2, 0), 0.0, 10, 1),
               InvalidWindow);
}

TEST(Benchmarks, RegistryValues) {
  Vector a(2);
  a << 1.0, 0.5;
  BenchmarkParams params;
  params.payoff_vector = a;
  params.kappa = 2.0;
  params.horizon = 1.5;

  Vector x(2), v(2);
  x << 0.3, 0.4;
  v << 1.0, 1.0;
  EXPECT_DOUBLE_EQ(
      benchmark_value(make_benchmark("unit_linear", params), 0.0, x, v),
      a.dot(v));
  EXPECT_NEAR(
      benchmark_value(make_benchmark("ou_linear", params), 0.5, x, v),
      std::exp(-2.0) * a.dot(v), 1e-14);

  BenchmarkParams kinetic;
  kinetic.horizon = 2.0;
  kinetic.payoff_vector = a;
  Vector vk(2);
  vk << 0.25, 0.5;
  EXPECT_DOUBLE_EQ(
      benchmark_value(make_benchmark("kinetic_linear", kinetic), 0.5, x, vk),
      0.25 + 1.5 * 0.5);

  BenchmarkParams factor;
  factor.driver_alpha = 0.5;
  factor.horizon = 1.0;
  factor.payoff_vector = a;
  EXPECT_NEAR(benchmark_value(make_benchmark("linear_driver_factor", factor),
                              0.0, x, v),
              std::exp(0.5), 1e-14);

  EXPECT_THROW(make_benchmark("not_a_case", params), UndefinedCase);
}

// Before either oracle judges the weights, they must agree with each other.
TEST(Benchmarks, FdReproducesEveryClosedForm) {
  Vector a(2);
  a << 1.0, 0.5;
  BenchmarkParams params;
  params.payoff_vector = a;
  params.kappa = 1.0;
  params.horizon = 1.0;

  struct Case {
    std::string name;
    ForwardModel model;
    BackwardDriver driver;
  };
  std::vector<Case> cases;
  {
    Case c{"unit_linear", make_unit_diffusion_model(2), {}};
    c.driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
    cases.push_back(std::move(c));
  }
  {
    Case c{"ou_linear", make_ou_model(2, 1.0), {}};
    c.driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
    cases.push_back(std::move(c));
  }
  {
    Case c{"ou_sin", make_ou_model(2, 1.0), {}};
    c.driver.terminal_g = [a](const Vector& x) { return std::sin(a.dot(x)); };
    cases.push_back(std::move(c));
  }
  {
    Case c{"kinetic_linear", make_free_kinetic_model(), {}};
    c.driver.terminal_g = [](const Vector& x) { return x(0); };
    cases.push_back(std::move(c));
  }

  const TimeGrid grid(0.0, 1.0, 50);
  Vector x0(2), v(2);
  x0 << 0.4, -0.1;
  v << 0.6, 0.8;
  for (const auto& c : cases) {
    const BenchmarkCase bench = make_benchmark(c.name, params);
    const double cf = benchmark_value(bench, 0.0, x0, v);
    const GradientEstimate fd =
        fd_gradient(c.model, c.driver, grid, x0, v, 1e-3, 20000, 229);
    EXPECT_NEAR(fd.value, cf, 3.0 * fd.std_error + 0.01)
        << "benchmark case " << c.name;
    EXPECT_FALSE(bench.provenance_note.empty());
  }
}

}  // namespace
}  // namespace fbsde
