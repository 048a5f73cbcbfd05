#ifndef FBSDE_BSDE_HPP
#define FBSDE_BSDE_HPP

// Backward solver: regression-based dynamic programming (least-squares Monte
// Carlo) producing Y and Z as polynomial functions of the state at every grid
// node, realizing Y_s = u(s, X_s), Z_s = (grad u sigma)(s, X_s).

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "fbsde/errors.hpp"
#include "fbsde/parallel.hpp"
#include "fbsde/path.hpp"

namespace fbsde {

using TerminalFn = std::function<double(const Vector&)>;
using DriverFn =
    std::function<double(double, const Vector&, double, const Vector&)>;

struct BackwardDriver {
  TerminalFn terminal_g;
  DriverFn driver_f;  // empty means f == 0
  double lipschitz_g = 1.0;
  double lipschitz_f = 0.0;
  double growth_exponent_q = 1.0;

  bool has_driver() const { return static_cast<bool>(driver_f); }
  double f(double t, const Vector& x, double y, const Vector& z) const {
    return driver_f ? driver_f(t, x, y, z) : 0.0;
  }
};

namespace detail {

// Multivariate monomial exponents with total degree <= degree, enumerated by
// total degree then lexicographically; index 0 is the constant.
inline std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  std::function<void(int, int)> fill = [&](int pos, int remaining) {
    if (pos == dim) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      current[static_cast<std::size_t>(pos)] = e;
      fill(pos + 1, remaining - e);
    }
    current[static_cast<std::size_t>(pos)] = 0;
  };
  for (int total = 0; total <= degree; ++total) fill(0, total);
  return out;
}

inline double monomial(const Vector& x, const std::vector<int>& expo) {
  double v = 1.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    for (int e = 0; e < expo[static_cast<std::size_t>(j)]; ++e) v *= x(j);
  return v;
}

}  // namespace detail

// Per-node column standardization of the design matrix; degenerate columns
// (e.g. every monomial at the point-mass start node) are dropped from the fit
// and keep a zero coefficient.
struct NodeBasis {
  Vector shift;         // column means
  Vector scale;         // column std deviations (1 where dropped)
  std::vector<bool> active;
};

struct BsdeSolution {
  int basis_degree = 0;
  std::vector<std::vector<int>> exponents;
  std::vector<NodeBasis> node_basis;       // per node
  std::vector<Vector> coeffs_y;            // per node, standardized basis
  std::vector<Matrix> coeffs_z;            // per node, m x n_basis
  std::vector<double> residual_norms;      // per node, RMS of y-fit residual
  TimeGrid grid{0.0, 1.0, 1};

  std::size_t n_basis() const { return exponents.size(); }
};

namespace detail {

struct RegressionWorkspace {
  Matrix design;      // N x B, standardized
  NodeBasis basis;
  Eigen::LDLT<Matrix> gram_ldlt;
  double gram_condition = 0.0;
};

inline RegressionWorkspace build_regression(
    const std::vector<std::vector<int>>& exponents,
    const PathEnsemble& ensemble, std::size_t node,
    double condition_threshold) {
  const auto n_paths = static_cast<Eigen::Index>(ensemble.paths.size());
  const auto n_basis = static_cast<Eigen::Index>(exponents.size());
  RegressionWorkspace ws;
  ws.design.resize(n_paths, n_basis);
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t p) {
    const Vector x = ensemble.paths[p].state(node);
    for (Eigen::Index j = 0; j < n_basis; ++j)
      ws.design(static_cast<Eigen::Index>(p), j) =
          monomial(x, exponents[static_cast<std::size_t>(j)]);
  });

  ws.basis.shift = Vector::Zero(n_basis);
  ws.basis.scale = Vector::Ones(n_basis);
  ws.basis.active.assign(static_cast<std::size_t>(n_basis), true);
  for (Eigen::Index j = 1; j < n_basis; ++j) {
    const double mean = ws.design.col(j).mean();
    const double sd = std::sqrt(
        (ws.design.col(j).array() - mean).square().sum() /
        static_cast<double>(n_paths));
    if (sd < 1e-12 * (std::abs(mean) + 1.0)) {
      ws.basis.active[static_cast<std::size_t>(j)] = false;
      ws.design.col(j).setZero();
      continue;
    }
    ws.basis.shift(j) = mean;
    ws.basis.scale(j) = sd;
    ws.design.col(j) = (ws.design.col(j).array() - mean) / sd;
  }

  Matrix gram = ws.design.transpose() * ws.design;
  for (Eigen::Index j = 0; j < n_basis; ++j)
    if (!ws.basis.active[static_cast<std::size_t>(j)]) gram(j, j) = 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  ws.gram_condition = lo > 0.0 ? hi / lo
                               : std::numeric_limits<double>::infinity();
  if (!(ws.gram_condition < condition_threshold))
    throw IllConditionedRegression(
        "normal-equation condition too large; basis too rich for path count");
  ws.gram_ldlt.compute(gram);
  return ws;
}

inline Vector solve_coeffs(const RegressionWorkspace& ws,
                           const Eigen::VectorXd& target) {
  Vector beta = ws.gram_ldlt.solve(ws.design.transpose() * target);
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (!ws.basis.active[static_cast<std::size_t>(j)]) beta(j) = 0.0;
  return beta;
}

}  // namespace detail

/// Backward dynamic programming over the ensemble. At the terminal node Y is
/// the projection of g; inside, Z regresses Y_{i+1} dW_i / dt and Y regresses
/// Y_{i+1} + dt f(t_i, X_i, y, Z_i) with one explicit fixed-point pass for
/// the y argument.
inline BsdeSolution solve_lsmc(const PathEnsemble& ensemble,
                               const BackwardDriver& driver, int basis_degree,
                               double condition_threshold = 1e12) {
  if (ensemble.paths.empty())
    throw DimensionMismatch("solve_lsmc: empty ensemble");
  if (basis_degree < 1)
    throw DimensionMismatch("solve_lsmc: basis_degree must be >= 1");

  const TimeGrid& grid = ensemble.grid();
  const auto n_steps = grid.n_steps();
  const auto n_paths = static_cast<Eigen::Index>(ensemble.paths.size());
  const int dim = static_cast<int>(ensemble.paths.front().x.cols());
  const int m = static_cast<int>(ensemble.paths.front().dw.cols());
  const double dt = grid.dt();

  BsdeSolution sol;
  sol.basis_degree = basis_degree;
  sol.exponents = detail::monomial_exponents(dim, basis_degree);
  sol.grid = grid;
  const auto n_basis = static_cast<Eigen::Index>(sol.exponents.size());
  sol.node_basis.resize(n_steps + 1);
  sol.coeffs_y.assign(n_steps + 1, Vector::Zero(n_basis));
  sol.coeffs_z.assign(n_steps + 1, Matrix::Zero(m, n_basis));
  sol.residual_norms.assign(n_steps + 1, 0.0);

  // Terminal node: project g onto the basis.
  Eigen::VectorXd y_path(n_paths);
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t p) {
    y_path(static_cast<Eigen::Index>(p)) =
        driver.terminal_g(ensemble.paths[p].state(n_steps));
  });
  {
    auto ws = detail::build_regression(sol.exponents, ensemble, n_steps,
                                       condition_threshold);
    sol.node_basis[n_steps] = ws.basis;
    sol.coeffs_y[n_steps] = detail::solve_coeffs(ws, y_path);
    sol.residual_norms[n_steps] =
        (ws.design * sol.coeffs_y[n_steps] - y_path).norm() /
        std::sqrt(static_cast<double>(n_paths));
  }
  // Realized terminal values propagate backward (not their projection).

  Eigen::MatrixXd z_path(n_paths, m);
  for (std::size_t node = n_steps; node-- > 0;) {
    auto ws = detail::build_regression(sol.exponents, ensemble, node,
                                       condition_threshold);
    sol.node_basis[node] = ws.basis;

    // Z components: E[ Y_{i+1} dW_i^{(k)} ] / dt as functions of X_i.
    Eigen::VectorXd target(n_paths);
    for (int k = 0; k < m; ++k) {
      for (Eigen::Index p = 0; p < n_paths; ++p)
        target(p) = y_path(p) *
                    ensemble.paths[static_cast<std::size_t>(p)].dw(
                        static_cast<Eigen::Index>(node), k) /
                    dt;
      sol.coeffs_z[node].row(k) = detail::solve_coeffs(ws, target).transpose();
    }
    z_path = ws.design * sol.coeffs_z[node].transpose();

    // Conditional mean of Y_{i+1}, then one explicit substitution into f.
    const Vector y_cond_coeffs = detail::solve_coeffs(ws, y_path);
    if (driver.has_driver()) {
      const Eigen::VectorXd y_prev = ws.design * y_cond_coeffs;
      const double t = grid.node(node);
      Eigen::VectorXd f_term(n_paths);
      parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t p) {
        const auto pi = static_cast<Eigen::Index>(p);
        f_term(pi) = driver.f(t, ensemble.paths[p].state(node), y_prev(pi),
                              z_path.row(pi).transpose());
      });
      target = y_path + dt * f_term;
      sol.coeffs_y[node] = detail::solve_coeffs(ws, target);
    } else {
      target = y_path;
      sol.coeffs_y[node] = y_cond_coeffs;
    }
    sol.residual_norms[node] =
        (ws.design * sol.coeffs_y[node] - target).norm() /
        std::sqrt(static_cast<double>(n_paths));
    y_path = ws.design * sol.coeffs_y[node];
  }
  return sol;
}

/// Polynomial evaluation of the stored coefficients at one state.
inline std::pair<double, Vector> evaluate_solution(const BsdeSolution& sol,
                                                   std::size_t time_index,
                                                   const Vector& state) {
  if (time_index >= sol.coeffs_y.size())
    throw DimensionMismatch("evaluate_solution: time index out of range");
  const auto n_basis = static_cast<Eigen::Index>(sol.n_basis());
  const NodeBasis& nb = sol.node_basis[time_index];
  Vector phi(n_basis);
  for (Eigen::Index j = 0; j < n_basis; ++j) {
    if (!nb.active[static_cast<std::size_t>(j)]) {
      phi(j) = 0.0;
      continue;
    }
    const double raw =
        detail::monomial(state, sol.exponents[static_cast<std::size_t>(j)]);
    phi(j) = j == 0 ? raw : (raw - nb.shift(j)) / nb.scale(j);
  }
  return {sol.coeffs_y[time_index].dot(phi),
          sol.coeffs_z[time_index] * phi};
}

}  // namespace fbsde

#endif  // FBSDE_BSDE_HPP
