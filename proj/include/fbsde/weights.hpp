#ifndef FBSDE_WEIGHTS_HPP
#define FBSDE_WEIGHTS_HPP

// Pathwise stochastic weights M_r^{t,s}(x, v): multiply a payoff by one of
// these and take expectations to get a directional derivative without ever
// differentiating the payoff. Four constructions are provided, one per
// forward-model family (non-degenerate, damped non-degenerate, Gruschin,
// Hamiltonian); all stochastic integrals are left-point Ito sums on the
// simulation grid.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fbsde/errors.hpp"
#include "fbsde/model.hpp"
#include "fbsde/path.hpp"

namespace fbsde {

enum class WeightKind { kElworthyLi, kDamped, kGruschin, kHamiltonian };

struct WeightSpec {
  WeightKind kind = WeightKind::kElworthyLi;
  std::size_t anchor_index = 0;  // grid index of s
  std::size_t target_index = 0;  // grid index of r
  Vector direction;              // v
  double damping_c = 1.0;        // Damped only

  void check(const TimeGrid& grid) const {
    if (anchor_index >= target_index)
      throw InvalidWindow("WeightSpec: anchor must precede target");
    if (target_index > grid.n_steps())
      throw InvalidWindow("WeightSpec: target beyond grid");
  }
};

// Damping constant default: the paper only pins c to the coefficients, so the
// engine derives it from the Lipschitz bound.
inline double default_damping_c(const ForwardModel& model) {
  return 2.0 * model.lipschitz_bound * model.lipschitz_bound + 1.0;
}

struct WeightDiagnostics {
  double gram_condition = 0.0;
  double g_process_max = 0.0;
};

struct WeightSample {
  double value = 0.0;
  uint64_t path_id = 0;
  std::optional<WeightDiagnostics> diagnostics;
};

// rho_{s,r}(theta) = (1 - exp(-c (r - theta))) / c, strictly positive left of r.
inline double damping_rho(double c, double r, double theta) {
  return -std::expm1(-c * (r - theta)) / c;
}

// ---------------------------------------------------------------------------
// Elworthy-Li weight (non-degenerate sigma):
//   M_r^{t,s}(x,v) = 1/(r-s) int_s^r < (sigma^T (sigma sigma^T)^{-1}) grad_v X, dW >.
// ---------------------------------------------------------------------------

inline WeightSample elworthy_li_weight(const ForwardModel& model,
                                       const PathBundle& path,
                                       const WeightSpec& spec) {
  spec.check(path.grid);
  const double gap =
      path.grid.node(spec.target_index) - path.grid.node(spec.anchor_index);
  double acc = 0.0;
  for (std::size_t i = spec.anchor_index; i < spec.target_index; ++i) {
    const double t = path.grid.node(i);
    const Matrix kernel =
        pseudo_inverse_diffusion(model.diffusion(t, path.state(i)));
    const Vector integrand = kernel * (path.jac_at(i) * spec.direction);
    acc += integrand.dot(path.dw.row(i).transpose());
  }
  return WeightSample{acc / gap, path.stream_id, std::nullopt};
}

// Vector form (all d directions at once): the Ito integral of
// ((sigma^T (sigma sigma^T)^{-1}) grad X)^T dW, divided by (r - s).
inline Vector elworthy_li_weight_vector(const ForwardModel& model,
                                        const PathBundle& path,
                                        std::size_t anchor_index,
                                        std::size_t target_index) {
  const double gap =
      path.grid.node(target_index) - path.grid.node(anchor_index);
  Vector acc = Vector::Zero(model.dim_d);
  for (std::size_t i = anchor_index; i < target_index; ++i) {
    const double t = path.grid.node(i);
    const Matrix kernel =
        pseudo_inverse_diffusion(model.diffusion(t, path.state(i)));
    acc += (kernel * path.jac_at(i)).transpose() * path.dw.row(i).transpose();
  }
  return acc / gap;
}

// ---------------------------------------------------------------------------
// Damped weight. The auxiliary flow G on [s, r) solves
//   dG = (grad_b G - G / rho_{s,r}) dtheta + grad_sigma G dW,  G(s) = I,
// and is driven to zero at r by the 1/rho killing term. Each step applies the
// exact integrating factor of that term; the drift and noise parts stay Euler.
// ---------------------------------------------------------------------------

struct GProcessPath {
  std::vector<Matrix> g;     // G at nodes s, s+1, ..., r-1
  std::vector<double> rho;   // rho_{s,r} at the same nodes
};

inline GProcessPath compute_g_process(const ForwardModel& model,
                                      const PathBundle& path,
                                      std::size_t anchor_index,
                                      std::size_t target_index, double c) {
  const int d = model.dim_d;
  const double r_time = path.grid.node(target_index);
  GProcessPath out;
  out.g.reserve(target_index - anchor_index);
  out.rho.reserve(target_index - anchor_index);
  Matrix g = Matrix::Identity(d, d);
  for (std::size_t i = anchor_index; i < target_index; ++i) {
    const double t = path.grid.node(i);
    out.g.push_back(g);
    out.rho.push_back(damping_rho(c, r_time, t));
    const double t_next = path.grid.node(i + 1);
    const Vector x = path.state(i);
    const double dt = path.grid.dt();
    Matrix rhs = g + dt * (model.drift_jacobian(t, x) * g);
    const std::vector<Matrix> grad_sigma = model.diffusion_jacobian(t, x);
    for (int k = 0; k < model.dim_m; ++k)
      if (grad_sigma[static_cast<std::size_t>(k)].squaredNorm() > 0.0)
        rhs += path.dw(static_cast<Eigen::Index>(i), k) *
               (grad_sigma[static_cast<std::size_t>(k)] * g);
    // exp(-int_{t}^{t_next} dtheta / rho) in closed form; exactly 0 at r.
    const double factor =
        -std::expm1(-c * (r_time - t_next)) / -std::expm1(-c * (r_time - t));
    g = factor * rhs;
  }
  return out;
}

inline WeightSample damped_weight(const ForwardModel& model,
                                  const PathBundle& path,
                                  const WeightSpec& spec) {
  spec.check(path.grid);
  const double c = spec.damping_c;
  if (!(c > 0.0)) throw InvalidWindow("damped_weight: c must be positive");
  const GProcessPath gp =
      compute_g_process(model, path, spec.anchor_index, spec.target_index, c);
  const Vector dir_at_anchor = path.jac_at(spec.anchor_index) * spec.direction;
  double acc = 0.0;
  double g_max = 0.0;
  // The final sub-step is dropped: its integrand vanishes with G faster than
  // 1/rho blows up, and the left-point value would only add noise there.
  const std::size_t last = spec.target_index - 1;
  for (std::size_t i = spec.anchor_index; i < last; ++i) {
    const double t = path.grid.node(i);
    const Matrix kernel =
        pseudo_inverse_diffusion(model.diffusion(t, path.state(i)));
    const std::size_t local = i - spec.anchor_index;
    const Vector integrand =
        kernel * (gp.g[local] * dir_at_anchor) / gp.rho[local];
    acc += integrand.dot(path.dw.row(i).transpose());
    g_max = std::max(g_max, gp.g[local].norm());
  }
  WeightSample sample{acc, path.stream_id, WeightDiagnostics{}};
  sample.diagnostics->g_process_max = g_max;
  return sample;
}

// ---------------------------------------------------------------------------
// Gruschin weight. The first block is a Brownian motion, the second carries
// state-dependent (possibly vanishing) noise sigma2(x1); derivatives are
// recovered through the random Gram matrix Q_{s,r} = int (sigma2 sigma2^T)(X1).
// ---------------------------------------------------------------------------

struct GramMatrix {
  Matrix q;
  double condition_estimate = 0.0;
};

namespace detail {

inline Matrix gruschin_sigma2(const ForwardModel& model, double t,
                              const Vector& x, int d1, int d2) {
  return model.diffusion(t, x).bottomRightCorner(d2, d2);
}

// grad_{v1} sigma2: column k is (d sigma2_{.,k} / d x1) * v1.
inline Matrix gruschin_dir_dsigma2(const ForwardModel& model, double t,
                                   const Vector& x, const Vector& v1, int d1,
                                   int d2) {
  const std::vector<Matrix> grad_sigma = model.diffusion_jacobian(t, x);
  Matrix out(d2, d2);
  for (int k = 0; k < d2; ++k)
    out.col(k) = grad_sigma[static_cast<std::size_t>(d1 + k)].block(d1, 0, d2,
                                                                    d1) *
                 v1;
  return out;
}

}  // namespace detail

/// Trapezoidal quadrature of (sigma2 sigma2^T)(X1) over [s, r] on one path.
inline GramMatrix compute_gram(const ForwardModel& model,
                               const PathBundle& path,
                               std::size_t anchor_index,
                               std::size_t target_index) {
  const auto& gru = std::get<GruschinKind>(model.kind);
  const int d1 = gru.d1, d2 = gru.d2;
  const double dt = path.grid.dt();
  Matrix q = Matrix::Zero(d2, d2);
  for (std::size_t i = anchor_index; i < target_index; ++i) {
    const Matrix s0 = detail::gruschin_sigma2(model, path.grid.node(i),
                                              path.state(i), d1, d2);
    const Matrix s1 = detail::gruschin_sigma2(model, path.grid.node(i + 1),
                                              path.state(i + 1), d1, d2);
    q += 0.5 * dt * (s0 * s0.transpose() + s1 * s1.transpose());
  }
  GramMatrix gram{q, 0.0};
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  gram.condition_estimate = lo > 0.0 ? hi / lo
                                     : std::numeric_limits<double>::infinity();
  if (lo <= 1e-10 * q.trace())
    throw IllConditionedGram("Gram matrix nearly singular on this path");
  return gram;
}

inline WeightSample gruschin_weight(const ForwardModel& model,
                                    const PathBundle& path,
                                    const WeightSpec& spec) {
  spec.check(path.grid);
  if (!model.is_gruschin())
    throw DimensionMismatch("gruschin_weight: model is not Gruschin");
  const auto& gru = std::get<GruschinKind>(model.kind);
  const int d1 = gru.d1, d2 = gru.d2;
  if (spec.anchor_index == 0 && path.x.row(0).head(d1).norm() == 0.0)
    throw ZeroFirstBlock("gruschin_weight: x1 must be nonzero when s = t");

  const std::size_t s_idx = spec.anchor_index, r_idx = spec.target_index;
  const double gap = path.grid.node(r_idx) - path.grid.node(s_idx);
  const double r_time = path.grid.node(r_idx);
  const double dt = path.grid.dt();
  const Vector v1 = spec.direction.head(d1);

  const GramMatrix gram = compute_gram(model, path, s_idx, r_idx);
  const Matrix q_inv = gram.q.ldlt().solve(Matrix::Identity(d2, d2));

  // Ratio term  <v1, W1_r - W1_s> / (r - s).
  Vector dw1 = Vector::Zero(d1);
  for (std::size_t i = s_idx; i < r_idx; ++i)
    dw1 += path.dw.row(i).head(d1).transpose();
  const double ratio_term = v1.dot(dw1) / gap;

  // Trace correction and the two stochastic integrals of the display. The
  // trace integral uses left-point quadrature on the same nodes as the Ito
  // sums so it cancels the pairing term's covariance exactly in expectation.
  Matrix trace_kernel = Matrix::Zero(d2, d2);  // int (r-th)/(r-s) (D sigma2^T)
  Vector ito_weighted = Vector::Zero(d2);      // int (r-th)/(r-s) D dW2
  Vector ito_sigma = Vector::Zero(d2);         // int sigma2 dW2
  for (std::size_t i = s_idx; i < r_idx; ++i) {
    const double t = path.grid.node(i);
    const Vector x = path.state(i);
    const Matrix dir_dsigma =
        detail::gruschin_dir_dsigma2(model, t, x, v1, d1, d2);
    const Matrix sigma2 = detail::gruschin_sigma2(model, t, x, d1, d2);
    const double taper = (r_time - t) / gap;
    trace_kernel += dt * taper * dir_dsigma * sigma2.transpose();
    const Vector dw2 = path.dw.row(static_cast<Eigen::Index>(i))
                           .tail(d2)
                           .transpose();
    ito_weighted += taper * (dir_dsigma * dw2);
    ito_sigma += sigma2 * dw2;
  }
  const double trace_term = -(q_inv * trace_kernel).trace();

  // (grad_v X_s)_2; reduces to v2 at s = t where the flow seed is identity.
  const Vector dir_x2_at_s =
      (path.jac_at(s_idx) * spec.direction).tail(d2);
  const double pairing_term =
      (q_inv * (dir_x2_at_s + ito_weighted)).dot(ito_sigma);

  WeightSample sample{ratio_term + trace_term + pairing_term, path.stream_id,
                      WeightDiagnostics{}};
  sample.diagnostics->gram_condition = gram.condition_estimate;
  return sample;
}

// ---------------------------------------------------------------------------
// Hamiltonian weight (Bismut form, anchored at the path start):
//   <M_r^t(x), v> = int_t^r < sigma^{-1}(th) (chi'' vt - kappa'' v2
//                                             + grad_Xi btilde(th, X_th)), dW >.
// chi, kappa are the cubic reparametrizations below; vt is the minimum-norm
// solution of B vt = v1.
// ---------------------------------------------------------------------------

struct HamiltonianShape {
  double chi = 0.0, chi_d1 = 0.0, chi_d2 = 0.0;
  double kappa = 0.0, kappa_d1 = 0.0, kappa_d2 = 0.0;
};

// chi(th) = (th-t)^2 (3r - t - 2 th) / (r-t)^3,
// kappa(th) = (th-t) (r-th)^2 / (r-t)^2, with their first two th-derivatives.
inline HamiltonianShape hamiltonian_shape(double t, double r, double theta) {
  const double span = r - t;
  const double tau = theta - t;
  HamiltonianShape s;
  const double span3 = span * span * span;
  s.chi = tau * tau * (3.0 * span - 2.0 * tau) / span3;
  s.chi_d1 = 6.0 * tau * (span - tau) / span3;
  s.chi_d2 = 6.0 * (span - 2.0 * tau) / span3;
  const double span2 = span * span;
  const double rem = span - tau;
  s.kappa = tau * rem * rem / span2;
  s.kappa_d1 = rem * (span - 3.0 * tau) / span2;
  s.kappa_d2 = (6.0 * tau - 4.0 * span) / span2;
  return s;
}

inline Vector min_norm_preimage(const Matrix& coupling, const Vector& v1) {
  // B^T (B B^T)^{-1} v1; validate() already guarantees full row rank.
  const Matrix bbt = coupling * coupling.transpose();
  Eigen::LDLT<Matrix> ldlt(bbt);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw RankDeficientB("coupling matrix lacks full row rank");
  return coupling.transpose() * ldlt.solve(v1);
}

inline WeightSample hamiltonian_weight(const ForwardModel& model,
                                       const PathBundle& path,
                                       const WeightSpec& spec) {
  spec.check(path.grid);
  if (!model.is_hamiltonian())
    throw DimensionMismatch("hamiltonian_weight: model is not Hamiltonian");
  const auto& ham = std::get<HamiltonianKind>(model.kind);
  const auto d1 = static_cast<int>(ham.coupling.rows());
  const auto d2 = static_cast<int>(ham.coupling.cols());
  const Vector v1 = spec.direction.head(d1);
  const Vector v2 = spec.direction.tail(d2);
  const Vector vt = min_norm_preimage(ham.coupling, v1);

  const double t0 = path.grid.t0();
  const double r_time = path.grid.node(spec.target_index);
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.target_index; ++i) {
    const double t = path.grid.node(i);
    const HamiltonianShape sh = hamiltonian_shape(t0, r_time, t);
    Vector xi(d1 + d2);
    xi.head(d1) = (1.0 - sh.chi) * v1 + sh.kappa * (ham.coupling * v2);
    xi.tail(d2) = sh.kappa_d1 * v2 - sh.chi_d1 * vt;
    const Vector drift_part =
        ham.btilde_jacobian(t, path.state(i)) * xi;
    const Vector integrand = ham.sigma_t(t).partialPivLu().solve(
        sh.chi_d2 * vt - sh.kappa_d2 * v2 + drift_part);
    acc += integrand.dot(path.dw.row(i).transpose());
  }
  return WeightSample{acc, path.stream_id, std::nullopt};
}

// ---------------------------------------------------------------------------
// McKean-Vlasov N-weight: the Elworthy-Li arithmetic run against a model
// whose coefficients carry laws frozen from a particle run.
// ---------------------------------------------------------------------------

inline WeightSample mv_n_weight(const ForwardModel& frozen_model,
                                const PathBundle& path,
                                const WeightSpec& spec) {
  return elworthy_li_weight(frozen_model, path, spec);
}

/// Dispatch on spec.kind.
inline WeightSample evaluate_weight(const ForwardModel& model,
                                    const PathBundle& path,
                                    const WeightSpec& spec) {
  switch (spec.kind) {
    case WeightKind::kElworthyLi:
      return elworthy_li_weight(model, path, spec);
    case WeightKind::kDamped:
      return damped_weight(model, path, spec);
    case WeightKind::kGruschin:
      return gruschin_weight(model, path, spec);
    case WeightKind::kHamiltonian:
      return hamiltonian_weight(model, path, spec);
  }
  throw InvalidWindow("evaluate_weight: unknown kind");
}

}  // namespace fbsde

#endif  // FBSDE_WEIGHTS_HPP
