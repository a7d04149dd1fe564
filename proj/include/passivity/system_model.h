#pragma once

#include <span>
#include <vector>

#include "passivity/kernels.h"

namespace passivity {

/// Discrete-time model x_{k+1} = A x_k + B u_k, y_k = C x_k + D u_k with equal
/// input and output dimension m.
struct StateSpaceModel {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(D.rows()); }

  /// Throws kInput naming the first inconsistent block.
  void Validate() const;

  /// The (n+m)-square matrix [[A, B], [C, D]].
  Matrix SystemMatrix() const;
  static StateSpaceModel FromSystemMatrix(const Matrix& s, int n, int m);

  /// Real scalar model {a, b, c, d} with n = m = 1.
  static StateSpaceModel Scalar(double a, double b, double c, double d);
};

struct MinimalityReport {
  bool controllable = false;
  bool observable = false;
  int ctrl_rank = 0;
  int obs_rank = 0;
  bool stable = false;
  bool asymptotically_stable = false;
  double spectral_radius = 0.0;

  bool minimal() const { return controllable && observable; }
};

MinimalityReport validate_minimal(const StateSpaceModel& model,
                                  const Tolerances& tol);

/// True when every eigenvalue of `a` lies in the closed unit disc and the ones
/// on the circle (within circle_tol) are semi-simple.
bool is_stable_matrix(const Matrix& a, const Tolerances& tol);

/// 𝒯(z) = C (zI − A)^{-1} B + D via an LU solve.
Matrix transfer_eval(const StateSpaceModel& model, Complex z,
                     const Tolerances& tol = {});

/// Φ(e^{iω}) = 𝒯(e^{iω})^H + 𝒯(e^{iω}).
HermitianMatrix phi_eval(const StateSpaceModel& model, double omega,
                         const Tolerances& tol = {});

/// Uniform grid of `count` frequencies covering [−π, π].
std::vector<double> omega_grid(int count = 720);

struct DissipationStep {
  double slack = 0.0;           // x_k^H X x_k − x_{k+1}^H X x_{k+1} + 2 Re(y_k^H u_k)
  double quadratic_form = 0.0;  // z_k^H W(X) z_k with z_k = [x_k; u_k]
};

/// Runs the model from x_0 = 0 under `inputs` and evaluates the per-step
/// energy balance against storage ½ x^H X x.
std::vector<DissipationStep> simulate_dissipation(
    const StateSpaceModel& model, const HermitianMatrix& x,
    std::span<const Vector> inputs);

}  // namespace passivity
