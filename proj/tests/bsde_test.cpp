#include "fbsde/bsde.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fbsde/path.hpp"
#include "fbsde/stats.hpp"

namespace fbsde {
namespace {

BackwardDriver linear_payoff(const Vector& a) {
  BackwardDriver d;
  d.terminal_g = [a](const Vector& x) { return a.dot(x); };
  d.lipschitz_g = a.norm();
  return d;
}

TEST(SolveLsmc, LinearTerminalIsProjectedExactly) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector a(2), x0(2);
  a << 1.0, 0.5;
  x0 << 0.3, 0.3;
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, 20000, 83);
  const BsdeSolution sol = solve_lsmc(ens, linear_payoff(a), 3);

  // g lies in the basis span: pure projection error is zero.
  EXPECT_LE(sol.residual_norms[20], 1e-8);
  Vector probe(2);
  probe << -0.7, 1.4;
  const auto [y, z] = evaluate_solution(sol, 20, probe);
  EXPECT_NEAR(y, a.dot(probe), 1e-8);
  EXPECT_EQ(z.norm(), 0.0);  // terminal Z carries no regression

  // Interior nodes recover the linear value function up to regression noise.
  for (const std::size_t node : {5u, 10u, 15u}) {
    Vector state(2);
    state << 0.5, -0.2;
    const auto [yi, zi] = evaluate_solution(sol, node, state);
    EXPECT_NEAR(yi, a.dot(state), 0.1);
    EXPECT_NEAR(zi(0), a(0), 0.15);
    EXPECT_NEAR(zi(1), a(1), 0.15);
  }
}

TEST(SolveLsmc, ConstantSolution) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 10);
  const PathEnsemble ens =
      simulate_ensemble(model, grid, Vector::Zero(2), 5000, 89);
  BackwardDriver driver;
  driver.terminal_g = [](const Vector&) { return 1.0; };
  const BsdeSolution sol = solve_lsmc(ens, driver, 3);
  for (std::size_t node = 0; node <= 10; ++node) {
    Vector probe(2);
    probe << 0.4, -1.0;
    const auto [y, z] = evaluate_solution(sol, node, probe);
    EXPECT_NEAR(y, 1.0, 1e-10);
    EXPECT_LE(z.norm(), 0.2);  // pure regression noise around zero
    EXPECT_LE(sol.residual_norms[node], 1e-10);
  }
}

// Linear driver closed form: Y_{t0} = e^{alpha (T - t0)} E g(X_T); the
// explicit scheme realizes the factor (1 + alpha dt)^n.
TEST(SolveLsmc, LinearDriverScaling) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 50);
  Vector a(2), x0(2);
  a << 1.0, 0.5;
  x0 << 1.0, 0.5;
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, 20000, 97);
  BackwardDriver driver = linear_payoff(a);
  const double alpha = 0.5;
  driver.driver_f = [alpha](double, const Vector&, double y, const Vector&) {
    return alpha * y;
  };
  driver.lipschitz_f = alpha;
  const BsdeSolution sol = solve_lsmc(ens, driver, 3);
  const auto [y0, z0] = evaluate_solution(sol, 0, x0);
  EXPECT_NEAR(y0, std::exp(alpha) * a.dot(x0),
              0.05 * std::exp(alpha) * std::abs(a.dot(x0)));
  (void)z0;
}

// Independent dynamic-programming oracle on a coarse grid: conditional
// expectations by dense Gaussian quadrature over a state mesh, no regression
// anywhere. d = 1 keeps the mesh exact enough.
double quadrature_dp_value(const TimeGrid& grid, double x0,
                           const BackwardDriver& driver) {
  const int n_mesh = 801;
  const double span = 6.0;
  const double dt = grid.dt();
  const double root_dt = std::sqrt(dt);
  // Trapezoidal quadrature of the standard normal on [-8, 8].
  const int n_quad = 321;
  const double z_span = 8.0;
  std::vector<double> z_nodes(n_quad), z_weights(n_quad);
  for (int q = 0; q < n_quad; ++q) {
    const double z = -z_span + 2.0 * z_span * q / (n_quad - 1);
    z_nodes[q] = z;
    const double h = 2.0 * z_span / (n_quad - 1);
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    z_weights[q] = density * h * (q == 0 || q == n_quad - 1 ? 0.5 : 1.0);
  }

  std::vector<double> mesh(n_mesh), y(n_mesh), y_next(n_mesh);
  for (int i = 0; i < n_mesh; ++i)
    mesh[i] = x0 - span + 2.0 * span * i / (n_mesh - 1);
  auto interp = [&](const std::vector<double>& table, double x) {
    if (x <= mesh.front())
      return table.front() +
             (table[1] - table[0]) / (mesh[1] - mesh[0]) * (x - mesh[0]);
    if (x >= mesh.back())
      return table.back() + (table[n_mesh - 1] - table[n_mesh - 2]) /
                                (mesh[n_mesh - 1] - mesh[n_mesh - 2]) *
                                (x - mesh.back());
    const double pos =
        (x - mesh.front()) / (mesh.back() - mesh.front()) * (n_mesh - 1);
    const int i = static_cast<int>(pos);
    const double frac = pos - i;
    return table[i] * (1.0 - frac) + table[i + 1] * frac;
  };

  for (int i = 0; i < n_mesh; ++i) {
    Vector xv(1);
    xv << mesh[i];
    y[i] = driver.terminal_g(xv);
  }
  for (std::size_t node = grid.n_steps(); node-- > 0;) {
    y_next = y;
    const double t = grid.node(node);
    for (int i = 0; i < n_mesh; ++i) {
      double mean = 0.0, corr = 0.0;
      for (int q = 0; q < n_quad; ++q) {
        const double dw = z_nodes[q] * root_dt;
        const double value = interp(y_next, mesh[i] + dw);
        mean += z_weights[q] * value;
        corr += z_weights[q] * value * dw;
      }
      Vector xv(1), zv(1);
      xv << mesh[i];
      zv << corr / dt;
      y[i] = mean + dt * driver.f(t, xv, mean, zv);
    }
  }
  return interp(y, x0);
}

TEST(SolveLsmc, NonlinearDriverMatchesQuadratureOracle) {
  const ForwardModel model = make_unit_diffusion_model(1);
  const TimeGrid grid(0.0, 1.0, 10);
  Vector x0(1);
  x0 << 0.4;
  BackwardDriver driver;
  driver.terminal_g = [](const Vector& x) { return std::sin(x(0)); };
  driver.driver_f = [](double, const Vector&, double y, const Vector& z) {
    return -std::abs(y) + std::sin(z(0));
  };
  driver.lipschitz_f = 1.0;

  const double oracle = quadrature_dp_value(grid, x0(0), driver);
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, 40000, 101);
  const BsdeSolution sol = solve_lsmc(ens, driver, 3);
  const auto [y0, z0] = evaluate_solution(sol, 0, x0);
  EXPECT_NEAR(y0, oracle, 0.02 * std::max(std::abs(oracle), 0.1));
  (void)z0;
}

TEST(SolveLsmc, PayoffShiftMovesValueByExactlyOne) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 15);
  Vector a(2), x0(2);
  a << 0.7, -0.3;
  x0 << 0.1, 0.2;
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, 5000, 103);
  const BsdeSolution base = solve_lsmc(ens, linear_payoff(a), 3);
  BackwardDriver shifted = linear_payoff(a);
  shifted.terminal_g = [a](const Vector& x) { return a.dot(x) + 1.0; };
  const BsdeSolution moved = solve_lsmc(ens, shifted, 3);
  const double y_base = evaluate_solution(base, 0, x0).first;
  const double y_moved = evaluate_solution(moved, 0, x0).first;
  EXPECT_NEAR(y_moved - y_base, 1.0, 1e-10);
}

// Representation property out of sample: nested resimulation from probe
// states agrees with the fitted value function.
TEST(SolveLsmc, OutOfSampleNestedResimulation) {
  const double kappa = 1.0;
  const ForwardModel model = make_ou_model(2, kappa);
  const TimeGrid grid(0.0, 1.0, 20);
  Vector a(2), x0(2);
  a << 1.0, 0.5;
  x0 << 0.5, -0.5;
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, 20000, 107);
  const BsdeSolution sol = solve_lsmc(ens, linear_payoff(a), 3);

  const PathEnsemble fresh = simulate_ensemble(model, grid, x0, 5, 555);
  for (const std::size_t node : {4u, 8u, 12u, 16u, 18u}) {
    const Vector probe = fresh.paths[0].state(node);
    const TimeGrid tail = grid.tail_from(node);
    const auto inner = restart_ensemble(model, tail, {probe},
                                        {Matrix::Identity(2, 2)}, 4000,
                                        mix_seed(999, node));
    std::vector<double> vals(inner[0].paths.size());
    for (std::size_t p = 0; p < vals.size(); ++p)
      vals[p] = a.dot(inner[0].paths[p].state(tail.n_steps()));
    const SampleStats nested = summarize(vals);
    const double fitted = evaluate_solution(sol, node, probe).first;
    EXPECT_NEAR(fitted, nested.mean, 3.0 * nested.std_error + 0.03);
  }
}

TEST(SolveLsmc, RichBasisOnTinyEnsembleIsRejected) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 3);
  const PathEnsemble ens =
      simulate_ensemble(model, grid, Vector::Zero(2), 11, 109);
  EXPECT_THROW(solve_lsmc(ens, linear_payoff(Vector::Ones(2)), 5),
               IllConditionedRegression);
}

TEST(EvaluateSolution, IndexBounds) {
  const ForwardModel model = make_unit_diffusion_model(2);
  const TimeGrid grid(0.0, 1.0, 4);
  const PathEnsemble ens =
      simulate_ensemble(model, grid, Vector::Zero(2), 300, 113);
  const BsdeSolution sol = solve_lsmc(ens, linear_payoff(Vector::Ones(2)), 2);
  EXPECT_THROW(evaluate_solution(sol, 9, Vector::Zero(2)), DimensionMismatch);
}

}  // namespace
}  // namespace fbsde
