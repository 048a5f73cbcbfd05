#ifndef FBSDE_ESTIMATORS_HPP
#define FBSDE_ESTIMATORS_HPP

// The two headline estimators: the Bismut form (weights anchored at the
// start, plain expectation) and the conditional form (outer state at an
// interior time s, inner restarts carrying the composed flow).

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbsde/bsde.hpp"
#include "fbsde/errors.hpp"
#include "fbsde/model.hpp"
#include "fbsde/parallel.hpp"
#include "fbsde/path.hpp"
#include "fbsde/stats.hpp"
#include "fbsde/weights.hpp"

namespace fbsde {

struct GradientEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_rejected = 0;
  double wall_time_ms = 0.0;
  std::string estimator_tag;
  // Set when n_rejected >= 0.1% of n_paths; the estimate may carry
  // rejection bias and should not be trusted blindly.
  bool rejection_flagged = false;
};

namespace detail {

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Per-path estimator core: g(X_T) M_T + sum_i dt f(t_i, X_i, Y_i, Z_i) M_{t_i},
// the driver sum running over nodes with index >= max(1, driver_start) where
// the weight window is nonempty. Y, Z are read from `sol` at node offset
// `sol_offset` (inner restarts live on tail grids). Returns false if a
// rejected Gram matrix discards the path.
inline bool path_estimate(const ForwardModel& model,
                          const BackwardDriver& driver, const PathBundle& path,
                          const WeightSpec& spec, const BsdeSolution* sol,
                          std::size_t driver_start, std::size_t sol_offset,
                          double& out) {
  const std::size_t n = path.grid.n_steps();
  const double dt = path.grid.dt();
  const bool with_driver = driver.has_driver();
  const std::size_t i_start = driver_start < 1 ? 1 : driver_start;
  double acc = 0.0;
  try {
    if (spec.kind == WeightKind::kElworthyLi && spec.anchor_index == 0) {
      // One pass: prefix sums of the Ito integrand give every M_{t_i}.
      double prefix = 0.0;
      const double t0 = path.grid.t0();
      for (std::size_t i = 0; i < n; ++i) {
        if (with_driver && i >= i_start) {
          const double t = path.grid.node(i);
          const auto [y, z] = evaluate_solution(*sol, sol_offset + i,
                                                path.state(i));
          acc += dt * driver.f(t, path.state(i), y, z) * prefix / (t - t0);
        }
        const double t = path.grid.node(i);
        const Matrix kernel =
            pseudo_inverse_diffusion(model.diffusion(t, path.state(i)));
        prefix += (kernel * (path.jac_at(i) * spec.direction))
                      .dot(path.dw.row(static_cast<Eigen::Index>(i))
                               .transpose());
      }
      acc += driver.terminal_g(path.state(n)) * prefix /
             (path.grid.horizon() - t0);
    } else {
      WeightSpec node_spec = spec;
      if (with_driver) {
        for (std::size_t i = i_start; i < n; ++i) {
          if (i <= spec.anchor_index) continue;
          node_spec.target_index = i;
          const double weight = evaluate_weight(model, path, node_spec).value;
          const double t = path.grid.node(i);
          const auto [y, z] = evaluate_solution(*sol, sol_offset + i,
                                                path.state(i));
          acc += dt * driver.f(t, path.state(i), y, z) * weight;
        }
      }
      node_spec.target_index = n;
      acc += driver.terminal_g(path.state(n)) *
             evaluate_weight(model, path, node_spec).value;
    }
  } catch (const IllConditionedGram&) {
    return false;
  }
  out = acc;
  return true;
}

struct EnsembleEstimate {
  SampleStats stats;
  std::size_t n_rejected = 0;
};

inline EnsembleEstimate estimate_over_ensemble(
    const ForwardModel& model, const BackwardDriver& driver,
    const PathEnsemble& ens, const WeightSpec& spec, const BsdeSolution* sol,
    std::size_t driver_start, std::size_t sol_offset) {
  const std::size_t n_paths = ens.paths.size();
  std::vector<double> values(n_paths);
  std::vector<char> kept(n_paths, 0);
  parallel_for(n_paths, [&](std::size_t p) {
    kept[p] = path_estimate(model, driver, ens.paths[p], spec, sol,
                            driver_start, sol_offset, values[p])
                  ? 1
                  : 0;
  });
  std::vector<double> accepted;
  accepted.reserve(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p)
    if (kept[p]) accepted.push_back(values[p]);
  EnsembleEstimate out;
  out.stats = summarize(accepted);
  out.n_rejected = n_paths - accepted.size();
  return out;
}

inline GradientEstimate finalize(const EnsembleEstimate& est,
                                 std::size_t n_paths, double ms,
                                 std::string tag) {
  GradientEstimate g;
  g.value = est.stats.mean;
  g.std_error = est.stats.std_error;
  g.n_paths = n_paths;
  g.n_rejected = est.n_rejected;
  g.wall_time_ms = ms;
  g.estimator_tag = std::move(tag);
  g.rejection_flagged =
      est.n_rejected * 1000 >= n_paths && est.n_rejected > 0;
  return g;
}

}  // namespace detail

/// Bismut-type estimate of grad_v E Y_s at s = t0: the weight is anchored at
/// the start. `driver_start_index` is the lower node of the driver-integral
/// quadrature (the paper's s); Hamiltonian weights require it positive
/// because their second moment blows up like (r-t)^{-3} near the anchor.
inline GradientEstimate bismut_gradient(
    const ForwardModel& model, const BackwardDriver& driver,
    const TimeGrid& grid, const Vector& x0, const Vector& v,
    WeightSpec spec, const BsdeSolution* sol, std::size_t n_paths,
    uint64_t seed, std::size_t driver_start_index = 0) {
  detail::StopWatch watch;
  if (spec.anchor_index != 0)
    throw InvalidWindow("bismut_gradient: weight must be anchored at t0");
  if (driver.has_driver()) {
    if (sol == nullptr)
      throw MissingSolution("bismut_gradient: driver needs a BSDE solution");
    if (spec.kind == WeightKind::kHamiltonian && driver_start_index == 0)
      throw EndpointSingularity(
          "Hamiltonian driver integral must start strictly after t0");
  }
  spec.direction = v;
  spec.target_index = grid.n_steps();
  const PathEnsemble ens = simulate_ensemble(model, grid, x0, n_paths, seed);
  const auto est = detail::estimate_over_ensemble(model, driver, ens, spec,
                                                  sol, driver_start_index, 0);
  return detail::finalize(est, n_paths, watch.elapsed_ms(), "bismut");
}

struct ConditionalSample {
  Vector state_at_s;        // X_s on the outer path
  Vector flow_direction;    // grad_v X_s
  GradientEstimate estimate;
};

/// Conditional (gradient-type) estimate of grad_v Y_s: outer paths carry the
/// flow to s, inner restarts average g M_T^{t,s} + int f M_r^{t,s} given the
/// outer state. s_index = 0 degenerates to bismut_gradient on the same seed.
inline std::vector<ConditionalSample> conditional_gradient(
    const ForwardModel& model, const BackwardDriver& driver,
    const TimeGrid& grid, const Vector& x0, const Vector& v,
    std::size_t s_index, WeightSpec spec, const BsdeSolution* sol,
    std::size_t n_outer, std::size_t n_inner, uint64_t seed) {
  if (s_index >= grid.n_steps())
    throw InvalidWindow("conditional_gradient: s must lie before the horizon");
  if (driver.has_driver() && sol == nullptr)
    throw MissingSolution("conditional_gradient: driver needs a BSDE solution");
  spec.anchor_index = 0;
  spec.direction = v;

  std::vector<ConditionalSample> out;
  if (s_index == 0) {
    detail::StopWatch watch;
    spec.target_index = grid.n_steps();
    const PathEnsemble ens =
        simulate_ensemble(model, grid, x0, n_inner, seed);
    const auto est =
        detail::estimate_over_ensemble(model, driver, ens, spec, sol, 0, 0);
    ConditionalSample sample;
    sample.state_at_s = x0;
    sample.flow_direction = v;
    sample.estimate =
        detail::finalize(est, n_inner, watch.elapsed_ms(), "conditional");
    out.push_back(std::move(sample));
    return out;
  }

  const TimeGrid head(grid.t0(), grid.node(s_index), s_index);
  const TimeGrid tail = grid.tail_from(s_index);
  const PathEnsemble outer =
      simulate_ensemble(model, head, x0, n_outer, seed);
  std::vector<Vector> starts(n_outer);
  std::vector<Matrix> flow_seeds(n_outer);
  for (std::size_t k = 0; k < n_outer; ++k) {
    starts[k] = outer.paths[k].state(s_index);
    flow_seeds[k] = outer.paths[k].jac_at(s_index);
  }
  const std::vector<PathEnsemble> inner = restart_ensemble(
      model, tail, starts, flow_seeds, n_inner, mix_seed(seed, 1));

  spec.target_index = tail.n_steps();
  out.resize(n_outer);
  for (std::size_t k = 0; k < n_outer; ++k) {
    detail::StopWatch watch;
    const auto est = detail::estimate_over_ensemble(
        model, driver, inner[k], spec, sol, 0, s_index);
    out[k].state_at_s = starts[k];
    out[k].flow_direction = flow_seeds[k] * v;
    out[k].estimate =
        detail::finalize(est, n_inner, watch.elapsed_ms(), "conditional");
  }
  return out;
}

}  // namespace fbsde

#endif  // FBSDE_ESTIMATORS_HPP
