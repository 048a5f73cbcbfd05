#ifndef FBSDE_PATH_HPP
#define FBSDE_PATH_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fbsde/errors.hpp"
#include "fbsde/grid.hpp"
#include "fbsde/model.hpp"
#include "fbsde/parallel.hpp"
#include "fbsde/rng.hpp"

namespace fbsde {

/// One simulated trajectory with its first-variation (Jacobian) flow.
struct PathBundle {
  TimeGrid grid{0.0, 1.0, 1};
  Eigen::MatrixXd dw;   // n_steps x m Brownian increments
  Eigen::MatrixXd x;    // (n_steps+1) x d states
  Eigen::MatrixXd jac;  // (n_steps+1) stacked d x d blocks
  uint64_t stream_id = 0;

  Vector state(std::size_t i) const { return x.row(i).transpose(); }

  Eigen::Block<const Eigen::MatrixXd> jac_at(std::size_t i) const {
    const auto d = static_cast<Eigen::Index>(x.cols());
    return jac.block(static_cast<Eigen::Index>(i) * d, 0, d, d);
  }
};

struct PathEnsemble {
  std::vector<PathBundle> paths;
  uint64_t master_seed = 0;
  std::string model_tag;

  const TimeGrid& grid() const { return paths.front().grid; }
};

namespace detail {

inline void fill_increments(Eigen::MatrixXd& dw, uint64_t seed, uint64_t stream,
                            double dt) {
  const double root_dt = std::sqrt(dt);
  for (Eigen::Index i = 0; i < dw.rows(); ++i)
    for (Eigen::Index k = 0; k < dw.cols(); ++k)
      dw(i, k) = root_dt * standard_normal(seed, RngDomain::kBrownian, stream,
                                           static_cast<uint32_t>(i),
                                           static_cast<uint32_t>(k));
}

// Euler-Maruyama for the state together with the variational flow
//   jac_{i+1} = jac_i + grad_b jac_i dt + sum_k grad_sigma^(k) jac_i dW^k.
inline PathBundle simulate_one(const ForwardModel& model, const TimeGrid& grid,
                               const Vector& x0, const Matrix& jac0,
                               uint64_t seed, uint64_t stream) {
  const int d = model.dim_d;
  const int m = model.dim_m;
  const auto n = static_cast<Eigen::Index>(grid.n_steps());
  const double dt = grid.dt();

  PathBundle path{grid, Eigen::MatrixXd(n, m), Eigen::MatrixXd(n + 1, d),
                  Eigen::MatrixXd((n + 1) * d, d), stream};
  fill_increments(path.dw, seed, stream, dt);

  Vector x = x0;
  Matrix jac = jac0;
  path.x.row(0) = x.transpose();
  path.jac.topRows(d) = jac;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = grid.node(static_cast<std::size_t>(i));
    const Vector b = model.drift(t, x);
    const Matrix sigma = model.diffusion(t, x);
    const Matrix grad_b = model.drift_jacobian(t, x);
    const std::vector<Matrix> grad_sigma = model.diffusion_jacobian(t, x);
    const auto dwi = path.dw.row(i).transpose();

    Matrix jac_next = jac + dt * (grad_b * jac);
    for (int k = 0; k < m; ++k)
      if (grad_sigma[static_cast<std::size_t>(k)].squaredNorm() > 0.0)
        jac_next += dwi(k) * (grad_sigma[static_cast<std::size_t>(k)] * jac);
    x += dt * b + sigma * dwi;
    jac = jac_next;

    if (!x.allFinite() || !jac.allFinite())
      throw NonFiniteState("simulate: state or flow left the finite range at t=" +
                           std::to_string(t));
    path.x.row(i + 1) = x.transpose();
    path.jac.block((i + 1) * d, 0, d, d) = jac;
  }
  return path;
}

}  // namespace detail

/// Simulates n_paths independent trajectories from x0; path p draws all of
/// its randomness from (master_seed, stream p), so any subset reproduces.
inline PathEnsemble simulate_ensemble(const ForwardModel& model,
                                      const TimeGrid& grid, const Vector& x0,
                                      std::size_t n_paths,
                                      uint64_t master_seed) {
  model.validate();
  if (x0.size() != model.dim_d)
    throw DimensionMismatch("simulate_ensemble: x0 has wrong dimension");
  if (n_paths == 0)
    throw DimensionMismatch("simulate_ensemble: need at least one path");

  PathEnsemble ens;
  ens.master_seed = master_seed;
  ens.model_tag = model.tag;
  ens.paths.resize(n_paths);
  const Matrix eye = Matrix::Identity(model.dim_d, model.dim_d);
  parallel_for(n_paths, [&](std::size_t p) {
    ens.paths[p] = detail::simulate_one(model, grid, x0, eye, master_seed, p);
  });
  return ens;
}

/// Markov restarts: for each start (x_s, jac_s), simulates n_inner paths on
/// grid_sub seeding the variational flow with jac_s instead of the identity,
/// so inner jac * v realizes the composed derivative along direction v.
/// Start k occupies streams [k*n_inner, (k+1)*n_inner); a single start at the
/// full grid therefore reproduces simulate_ensemble bit for bit.
inline std::vector<PathEnsemble> restart_ensemble(
    const ForwardModel& model, const TimeGrid& grid_sub,
    const std::vector<Vector>& x_starts, const std::vector<Matrix>& jac_starts,
    std::size_t n_inner, uint64_t master_seed) {
  model.validate();
  if (x_starts.size() != jac_starts.size() || x_starts.empty())
    throw DimensionMismatch("restart_ensemble: starts and seeds must pair up");
  for (const auto& xs : x_starts)
    if (xs.size() != model.dim_d)
      throw DimensionMismatch("restart_ensemble: start has wrong dimension");
  for (const auto& js : jac_starts)
    if (js.rows() != model.dim_d || js.cols() != model.dim_d)
      throw DimensionMismatch("restart_ensemble: flow seed has wrong shape");

  std::vector<PathEnsemble> out(x_starts.size());
  for (std::size_t k = 0; k < x_starts.size(); ++k) {
    out[k].master_seed = master_seed;
    out[k].model_tag = model.tag;
    out[k].paths.resize(n_inner);
  }
  parallel_for(x_starts.size() * n_inner, [&](std::size_t idx) {
    const std::size_t k = idx / n_inner;
    const std::size_t p = idx % n_inner;
    out[k].paths[p] =
        detail::simulate_one(model, grid_sub, x_starts[k], jac_starts[k],
                             master_seed, k * n_inner + p);
  });
  return out;
}

}  // namespace fbsde

#endif  // FBSDE_PATH_HPP
