#ifndef FBSDE_ORACLES_HPP
#define FBSDE_ORACLES_HPP

// Independent ground truth for the weight estimators: central finite
// differences under common random numbers, and closed-form Gaussian
// benchmarks. Nothing here touches the weight code paths.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fbsde/bsde.hpp"
#include "fbsde/errors.hpp"
#include "fbsde/estimators.hpp"
#include "fbsde/model.hpp"
#include "fbsde/path.hpp"
#include "fbsde/stats.hpp"

namespace fbsde {

namespace detail {

// Pathwise revaluation of Y_{t0}: realized terminal payoff plus the driver
// integral along the path with (Y, Z) read from the fitted solution. Its mean
// is the LSMC value at t0; per-path samples make CRN pairing possible.
inline std::vector<double> pathwise_values(const PathEnsemble& ens,
                                           const BackwardDriver& driver,
                                           const BsdeSolution* sol) {
  const std::size_t n = ens.grid().n_steps();
  const double dt = ens.grid().dt();
  std::vector<double> out(ens.paths.size());
  parallel_for(ens.paths.size(), [&](std::size_t p) {
    const PathBundle& path = ens.paths[p];
    double acc = driver.terminal_g(path.state(n));
    if (driver.has_driver()) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto [y, z] = evaluate_solution(*sol, i, path.state(i));
        acc += dt * driver.f(ens.grid().node(i), path.state(i), y, z);
      }
    }
    out[p] = acc;
  });
  return out;
}

}  // namespace detail

/// Central finite difference of Y_{t0} in direction v with common random
/// numbers: both shifted runs reuse the same Brownian increments and, when a
/// driver is present, each fits its own LSMC solution from the same seed.
/// The standard error comes from the paired per-path differences.
inline GradientEstimate fd_gradient(const ForwardModel& model,
                                    const BackwardDriver& driver,
                                    const TimeGrid& grid, const Vector& x0,
                                    const Vector& v, double eps,
                                    std::size_t n_paths, uint64_t seed,
                                    int basis_degree = 3) {
  if (!(eps > 0.0)) throw InvalidWindow("fd_gradient: eps must be positive");
  detail::StopWatch watch;
  std::vector<double> up, down;
  for (const double sign : {+1.0, -1.0}) {
    const Vector shifted = x0 + sign * eps * v;
    const PathEnsemble ens =
        simulate_ensemble(model, grid, shifted, n_paths, seed);
    BsdeSolution sol;
    const BsdeSolution* sol_ptr = nullptr;
    if (driver.has_driver()) {
      sol = solve_lsmc(ens, driver, basis_degree);
      sol_ptr = &sol;
    }
    auto vals = detail::pathwise_values(ens, driver, sol_ptr);
    (sign > 0 ? up : down) = std::move(vals);
  }
  std::vector<double> diff(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p)
    diff[p] = (up[p] - down[p]) / (2.0 * eps);
  const SampleStats stats = summarize(diff);
  GradientEstimate g;
  g.value = stats.mean;
  g.std_error = stats.std_error;
  g.n_paths = n_paths;
  g.wall_time_ms = watch.elapsed_ms();
  g.estimator_tag = "finite_difference";
  return g;
}

// ---------------------------------------------------------------------------
// Closed-form benchmark registry. Each value was derived by hand before the
// estimators were built; the provenance note records the derivation.
// ---------------------------------------------------------------------------

struct BenchmarkCase {
  std::string name;
  // (t, x, v) -> grad_v of the target expectation at the horizon.
  std::function<double(double, const Vector&, const Vector&)> closed_form_value;
  std::string provenance_note;
};

struct BenchmarkParams {
  double horizon = 1.0;
  double kappa = 1.0;     // OU rate
  Vector payoff_vector;   // a or k depending on the case
  double driver_alpha = 0.0;
};

inline BenchmarkCase make_benchmark(const std::string& name,
                                    const BenchmarkParams& params) {
  BenchmarkCase c;
  c.name = name;
  if (name == "unit_linear") {
    // d E<a, x + W_{T-t}> / dx = a.
    const Vector a = params.payoff_vector;
    c.closed_form_value = [a](double, const Vector&, const Vector& v) {
      return a.dot(v);
    };
    c.provenance_note = "translation invariance of Brownian motion";
  } else if (name == "ou_linear") {
    // E<a, X_T> = <a, x e^{-kappa (T-t)}>: semigroup mean map.
    const Vector a = params.payoff_vector;
    const double kappa = params.kappa, horizon = params.horizon;
    c.closed_form_value = [a, kappa, horizon](double t, const Vector&,
                                              const Vector& v) {
      return std::exp(-kappa * (horizon - t)) * a.dot(v);
    };
    c.provenance_note = "OU semigroup mean e^{-kappa tau} x";
  } else if (name == "ou_sin") {
    // k.X_T ~ N(<k, x> e^{-kappa tau}, |k|^2 (1 - e^{-2 kappa tau})/(2 kappa));
    // E sin = sin(mean) e^{-var/2}, differentiate the mean in x.
    const Vector k = params.payoff_vector;
    const double kappa = params.kappa, horizon = params.horizon;
    c.closed_form_value = [k, kappa, horizon](double t, const Vector& x,
                                              const Vector& v) {
      const double tau = horizon - t;
      const double decay = std::exp(-kappa * tau);
      const double var =
          k.squaredNorm() * -std::expm1(-2.0 * kappa * tau) / (2.0 * kappa);
      return std::cos(k.dot(x) * decay) * std::exp(-0.5 * var) * decay *
             k.dot(v);
    };
    c.provenance_note =
        "Gaussian characteristic function of the OU marginal";
  } else if (name == "kinetic_linear") {
    // Free kinetic skeleton: E X^(1)_T = x1 + (T-t) x2, so grad = (1, T-t).
    const double horizon = params.horizon;
    c.closed_form_value = [horizon](double t, const Vector&, const Vector& v) {
      return v(0) + (horizon - t) * v(1);
    };
    c.provenance_note = "explicit flow of the noiseless kinetic skeleton";
  } else if (name == "linear_driver_factor") {
    // f = alpha y multiplies the f=0 value by e^{alpha (T-t)} (linear BSDE).
    const double alpha = params.driver_alpha, horizon = params.horizon;
    c.closed_form_value = [alpha, horizon](double t, const Vector&,
                                           const Vector&) {
      return std::exp(alpha * (horizon - t));
    };
    c.provenance_note = "integrating factor of the linear driver";
  } else {
    throw UndefinedCase("benchmark case not in the registry: " + name);
  }
  return c;
}

inline double benchmark_value(const BenchmarkCase& c, double t, const Vector& x,
                              const Vector& v) {
  if (!c.closed_form_value)
    throw UndefinedCase("benchmark case has no closed form: " + c.name);
  return c.closed_form_value(t, x, v);
}

}  // namespace fbsde

#endif  // FBSDE_ORACLES_HPP
