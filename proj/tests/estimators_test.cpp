#include "fbsde/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fbsde/oracles.hpp"

namespace fbsde {
namespace {

WeightSpec elworthy_li_spec() {
  WeightSpec spec;
  spec.kind = WeightKind::kElworthyLi;
  return spec;
}

double combined_3se_for_test(double a, double b) {
  return 3.0 * std::sqrt(a * a + b * b);
}

TEST(BismutGradient, LinearPayoffIdentity) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 25);
  Vector a(2), v(2);
  a << 1.0, 0.5;
  v << 0.8, 0.6;
  BackwardDriver driver;
  driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
  const GradientEstimate est =
      bismut_gradient(model, driver, grid, Vector::Zero(2), v,
                      elworthy_li_spec(), nullptr, 20000, 131);
  EXPECT_NEAR(est.value, a.dot(v), 3.0 * est.std_error);
  EXPECT_EQ(est.n_paths, 20000u);
  EXPECT_EQ(est.n_rejected, 0u);
  EXPECT_EQ(est.estimator_tag, "bismut");
}

TEST(BismutGradient, DirectionLinearityToRoundOff) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector v(2);
  v << 0.5, -0.25;
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return x(0) + 2.0 * x(1); };
  const GradientEstimate one = bismut_gradient(
      model, driver, grid, Vector::Ones(2), v, elworthy_li_spec(), nullptr,
      5000, 137);
  const GradientEstimate two = bismut_gradient(
      model, driver, grid, Vector::Ones(2), (2.0 * v).eval(),
      elworthy_li_spec(), nullptr, 5000, 137);
  EXPECT_DOUBLE_EQ(two.value, 2.0 * one.value);
}

TEST(BismutGradient, SeedStability) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 10);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return std::sin(x(0)); };
  const auto run = [&] {
    return bismut_gradient(model, driver, grid, Vector::Zero(2),
                           Vector::Unit(2, 0), elworthy_li_spec(), nullptr,
                           3000, 139);
  };
  const GradientEstimate a = run();
  const GradientEstimate b = run();
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.n_rejected, b.n_rejected);
}

TEST(BismutGradient, DriverRequiresSolution) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 10);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return x(0); };
  driver.driver_f = [](double, const Vector&, double y, const Vector&) {
    return y;
  };
  EXPECT_THROW(bismut_gradient(model, driver, grid, Vector::Zero(2),
                               Vector::Unit(2, 0), elworthy_li_spec(), nullptr,
                               100, 1),
               MissingSolution);
}

TEST(BismutGradient, HamiltonianDriverNeedsInteriorStart) {
  const ForwardModel model = make_free_kinetic_model();
  const TimeGrid grid(0.0, 1.0, 10);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return x(0); };
  driver.driver_f = [](double, const Vector&, double, const Vector&) {
    return 1.0;
  };
  const PathEnsemble fit =
      simulate_ensemble(model, grid, Vector::Zero(2), 2000, 3);
  const BsdeSolution sol = solve_lsmc(fit, driver, 2);
  WeightSpec spec;
  spec.kind = WeightKind::kHamiltonian;
  EXPECT_THROW(bismut_gradient(model, driver, grid, Vector::Zero(2),
                               Vector::Unit(2, 0), spec, &sol, 100, 1, 0),
               EndpointSingularity);
  // An interior lower limit is accepted.
  const GradientEstimate est =
      bismut_gradient(model, driver, grid, Vector::Zero(2), Vector::Unit(2, 0),
                      spec, &sol, 200, 1, 2);
  EXPECT_EQ(est.n_paths, 200u);
}

TEST(BismutGradient, LinearDriverScalesTheGradient) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 25);
  Vector a(2), v(2), x0(2);
  a << 1.0, 0.5;
  v << 1.0, 0.0;
  x0 << 0.5, 0.5;
  BackwardDriver plain;
  plain.terminal_g = [a](const Vector& x) { return a.dot(x); };
  BackwardDriver scaled = plain;
  const double alpha = 0.5;
  scaled.driver_f = [alpha](double, const Vector&, double y, const Vector&) {
    return alpha * y;
  };
  scaled.lipschitz_f = alpha;
  const PathEnsemble fit = simulate_ensemble(model, grid, x0, 20000, 149);
  const BsdeSolution sol = solve_lsmc(fit, scaled, 2);
  const GradientEstimate base = bismut_gradient(
      model, plain, grid, x0, v, elworthy_li_spec(), nullptr, 20000, 151);
  const GradientEstimate grown = bismut_gradient(
      model, scaled, grid, x0, v, elworthy_li_spec(), &sol, 20000, 151);
  EXPECT_NEAR(grown.value, std::exp(alpha) * base.value,
              combined_3se_for_test(base.std_error, grown.std_error) + 0.04);
}

TEST(ConditionalGradient, DegeneratesToBismutAtTheStart) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector v(2);
  v << 0.6, 0.8;
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return std::sin(x(0) + x(1)); };
  const GradientEstimate direct =
      bismut_gradient(model, driver, grid, Vector::Zero(2), v,
                      elworthy_li_spec(), nullptr, 4000, 157);
  const auto samples =
      conditional_gradient(model, driver, grid, Vector::Zero(2), v, 0,
                           elworthy_li_spec(), nullptr, 1, 4000, 157);
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_DOUBLE_EQ(samples[0].estimate.value, direct.value);
}

TEST(ConditionalGradient, LinearPayoffIsStateIndependent) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector a(2), v(2);
  a << 1.0, 0.5;
  v << 1.0, 0.0;
  BackwardDriver driver;
  driver.terminal_g = [a](const Vector& x) { return a.dot(x); };
  const auto samples =
      conditional_gradient(model, driver, grid, Vector::Zero(2), v, 10,
                           elworthy_li_spec(), nullptr, 5, 4000, 163);
  ASSERT_EQ(samples.size(), 5u);
  for (const auto& sample : samples)
    EXPECT_NEAR(sample.estimate.value, a.dot(v),
                3.0 * sample.estimate.std_error);
}

TEST(ConditionalGradient, InteriorSampleMatchesNestedFiniteDifference) {
  const ForwardModel model = make_ou_model(2, 1.0);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector k(2), v(2), x0(2);
  k << 1.0, 0.6;
  v << 0.6, 0.8;
  x0 << 0.3, -0.2;
  BackwardDriver driver;
  driver.terminal_g = [k](const Vector& x) { return std::sin(k.dot(x)); };
  const std::size_t s_index = 10;
  const auto samples =
      conditional_gradient(model, driver, grid, x0, v, s_index,
                           elworthy_li_spec(), nullptr, 5, 8000, 167);
  const TimeGrid tail = grid.tail_from(s_index);
  int agree = 0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const GradientEstimate fd =
        fd_gradient(model, driver, tail, samples[j].state_at_s,
                    samples[j].flow_direction, 1e-3, 8000, mix_seed(167, j));
    if (std::abs(samples[j].estimate.value - fd.value) <=
        combined_3se_for_test(samples[j].estimate.std_error, fd.std_error))
      ++agree;
  }
  EXPECT_GE(agree, 4);
}

TEST(ConditionalGradient, RejectsLateAnchor) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 10);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return x(0); };
  EXPECT_THROW(
      conditional_gradient(model, driver, grid, Vector::Zero(2),
                           Vector::Unit(2, 0), 10, elworthy_li_spec(), nullptr,
                           2, 100, 1),
      InvalidWindow);
}

}  // namespace
}  // namespace fbsde
