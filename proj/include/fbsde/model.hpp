#ifndef FBSDE_MODEL_HPP
#define FBSDE_MODEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fbsde/errors.hpp"

namespace fbsde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using DriftFn = std::function<Vector(double, const Vector&)>;
using DiffusionFn = std::function<Matrix(double, const Vector&)>;  // d x m
using DriftJacobianFn = std::function<Matrix(double, const Vector&)>;  // d x d
// Slice k is the d x d matrix of partials of diffusion column k.
using DiffusionJacobianFn =
    std::function<std::vector<Matrix>(double, const Vector&)>;

struct NonDegenerateKind {};

struct GruschinKind {
  int d1 = 1;
  int d2 = 1;
  double alpha = 1.0;
};

struct HamiltonianKind {
  Matrix coupling;  // B, d1 x d2, full row rank
  std::function<Matrix(double)> sigma_t;  // d2 x d2, invertible
  std::function<Vector(double, const Vector&)> btilde;  // (t, full state) -> d2
  // d2 x (d1+d2) Jacobian of btilde in the full state.
  std::function<Matrix(double, const Vector&)> btilde_jacobian;
};

using ModelKind = std::variant<NonDegenerateKind, GruschinKind, HamiltonianKind>;

/// Coefficient bundle (b, sigma, and their state Jacobians) for the forward
/// SDE, with structural metadata for the degenerate families.
struct ForwardModel {
  int dim_d = 0;
  int dim_m = 0;
  DriftFn drift;
  DiffusionFn diffusion;
  DriftJacobianFn drift_jacobian;
  DiffusionJacobianFn diffusion_jacobian;
  ModelKind kind = NonDegenerateKind{};
  double lipschitz_bound = 1.0;
  std::string tag = "model";

  bool is_gruschin() const {
    return std::holds_alternative<GruschinKind>(kind);
  }
  bool is_hamiltonian() const {
    return std::holds_alternative<HamiltonianKind>(kind);
  }

  void validate() const {
    if (dim_d < 1 || dim_m < 1)
      throw DimensionMismatch("ForwardModel: dimensions must be positive");
    if (const auto* gru = std::get_if<GruschinKind>(&kind)) {
      if (gru->d1 + gru->d2 != dim_d || dim_m != dim_d)
        throw DimensionMismatch("Gruschin model needs d = d1+d2 = m");
      if (!(gru->alpha >= 1.0 && gru->alpha < 0.5 * gru->d1 + 1.0))
        throw DimensionMismatch("Gruschin alpha outside [1, d1/2 + 1)");
    }
    if (const auto* ham = std::get_if<HamiltonianKind>(&kind)) {
      const auto d1 = static_cast<int>(ham->coupling.rows());
      const auto d2 = static_cast<int>(ham->coupling.cols());
      if (d1 + d2 != dim_d || d2 != dim_m)
        throw DimensionMismatch("Hamiltonian model needs d = d1+d2, m = d2");
      Eigen::FullPivLU<Matrix> lu(ham->coupling);
      if (lu.rank() < d1)
        throw RankDeficientB("Hamiltonian coupling matrix lacks full row rank");
    }
  }
};

// sigma^T (sigma sigma^T)^{-1}, the non-degenerate weight kernel.
inline Matrix pseudo_inverse_diffusion(const Matrix& sigma,
                                       double cond_threshold = 1e12) {
  const Matrix gram = sigma * sigma.transpose();
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.rcond() < 1.0 / cond_threshold)
    throw SingularDiffusion("sigma sigma^T is numerically singular");
  return sigma.transpose() *
         ldlt.solve(Matrix::Identity(gram.rows(), gram.cols()));
}

// ---------------------------------------------------------------------------
// Model catalog used across tests and bundled experiments.
// ---------------------------------------------------------------------------

/// b = 0, sigma = I on R^d.
inline ForwardModel make_unit_diffusion_model(int d) {
  ForwardModel m;
  m.dim_d = d;
  m.dim_m = d;
  m.drift = [d](double, const Vector&) { return Vector::Zero(d).eval(); };
  m.diffusion = [d](double, const Vector&) {
    return Matrix::Identity(d, d).eval();
  };
  m.drift_jacobian = [d](double, const Vector&) {
    return Matrix::Zero(d, d).eval();
  };
  m.diffusion_jacobian = [d](double, const Vector&) {
    return std::vector<Matrix>(d, Matrix::Zero(d, d));
  };
  m.lipschitz_bound = 0.0;
  m.tag = "unit_diffusion";
  return m;
}

/// Ornstein-Uhlenbeck: b = -kappa x, sigma = I.
inline ForwardModel make_ou_model(int d, double kappa) {
  ForwardModel m = make_unit_diffusion_model(d);
  m.drift = [kappa](double, const Vector& x) { return (-kappa * x).eval(); };
  m.drift_jacobian = [d, kappa](double, const Vector&) {
    return (-kappa * Matrix::Identity(d, d)).eval();
  };
  m.lipschitz_bound = std::abs(kappa);
  m.tag = "ou";
  return m;
}

/// Linear drift b = A x, sigma = I (Jacobian-flow benchmarks).
inline ForwardModel make_linear_drift_model(Matrix a) {
  const int d = static_cast<int>(a.rows());
  ForwardModel m = make_unit_diffusion_model(d);
  m.drift = [a](double, const Vector& x) { return (a * x).eval(); };
  m.drift_jacobian = [a](double, const Vector&) { return a; };
  m.lipschitz_bound = a.norm();
  m.tag = "linear_drift";
  return m;
}

/// Gruschin catalog instance: d1 = d2 = 1, second-block noise scale
/// sigma(x1) = x1 (alpha = 1).
inline ForwardModel make_gruschin_model() {
  ForwardModel m;
  const int d = 2;
  m.dim_d = d;
  m.dim_m = d;
  m.drift = [d](double, const Vector&) { return Vector::Zero(d).eval(); };
  m.diffusion = [](double, const Vector& x) {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = x(0);
    return s;
  };
  m.drift_jacobian = [d](double, const Vector&) {
    return Matrix::Zero(d, d).eval();
  };
  m.diffusion_jacobian = [](double, const Vector&) {
    std::vector<Matrix> ds(2, Matrix::Zero(2, 2));
    ds[1](1, 0) = 1.0;  // d sigma_22 / d x1
    return ds;
  };
  m.kind = GruschinKind{1, 1, 1.0};
  m.lipschitz_bound = 1.0;
  m.tag = "gruschin";
  return m;
}

/// Kinetic Hamiltonian model: dX1 = B X2 dt, dX2 = btilde dt + sigma(t) dW.
inline ForwardModel make_hamiltonian_model(
    Matrix coupling, std::function<Matrix(double)> sigma_t,
    std::function<Vector(double, const Vector&)> btilde,
    std::function<Matrix(double, const Vector&)> btilde_jacobian) {
  const auto d1 = static_cast<int>(coupling.rows());
  const auto d2 = static_cast<int>(coupling.cols());
  const int d = d1 + d2;
  ForwardModel m;
  m.dim_d = d;
  m.dim_m = d2;
  HamiltonianKind kind;
  kind.coupling = coupling;
  kind.sigma_t = sigma_t;
  kind.btilde = btilde;
  kind.btilde_jacobian = btilde_jacobian;
  m.drift = [d1, d2, coupling, btilde](double t, const Vector& x) {
    Vector b(d1 + d2);
    b.head(d1) = coupling * x.tail(d2);
    b.tail(d2) = btilde(t, x);
    return b;
  };
  m.diffusion = [d1, d2, sigma_t](double t, const Vector&) {
    Matrix s = Matrix::Zero(d1 + d2, d2);
    s.bottomRows(d2) = sigma_t(t);
    return s;
  };
  m.drift_jacobian = [d1, d2, coupling, btilde_jacobian](double t,
                                                         const Vector& x) {
    Matrix j = Matrix::Zero(d1 + d2, d1 + d2);
    j.topRightCorner(d1, d2) = coupling;
    j.bottomRows(d2) = btilde_jacobian(t, x);
    return j;
  };
  m.diffusion_jacobian = [d, d2](double, const Vector&) {
    return std::vector<Matrix>(d2, Matrix::Zero(d, d));
  };
  m.kind = std::move(kind);
  m.lipschitz_bound = coupling.norm();
  m.tag = "hamiltonian";
  m.validate();
  return m;
}

/// Free kinetic model (btilde = 0) with scalar blocks: dX1 = X2 dt, dX2 = dW.
inline ForwardModel make_free_kinetic_model() {
  const int d2 = 1;
  return make_hamiltonian_model(
      Matrix::Identity(1, 1),
      [](double) { return Matrix::Identity(d2, d2).eval(); },
      [](double, const Vector&) { return Vector::Zero(d2).eval(); },
      [](double, const Vector&) { return Matrix::Zero(d2, 2).eval(); });
}

}  // namespace fbsde

#endif  // FBSDE_MODEL_HPP
