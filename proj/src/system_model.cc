#include "passivity/system_model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "passivity/kyp.h"

namespace passivity {

namespace {

void RequireShape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw PassivityError(ErrorCode::kInput,
                         std::string("dimension mismatch in ") + name +
                             ": expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " +
                             std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
  }
}

// Rank of the block Krylov matrix [B, AB, ..., A^{n-1}B].
int KrylovRank(const Matrix& a, const Matrix& b, double rank_tol) {
  const Eigen::Index n = a.rows();
  Matrix krylov(n, n * b.cols());
  Matrix block = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    krylov.middleCols(k * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return numerical_rank(krylov, rank_tol);
}

}  // namespace

void StateSpaceModel::Validate() const {
  if (A.rows() < 1 || D.rows() < 1) {
    throw PassivityError(ErrorCode::kInput, "model needs n >= 1 and m >= 1");
  }
  const Eigen::Index nn = A.rows();
  const Eigen::Index mm = D.rows();
  RequireShape(A, nn, nn, "A");
  RequireShape(B, nn, mm, "B");
  RequireShape(C, mm, nn, "C");
  RequireShape(D, mm, mm, "D");
  RequireFinite(A, "A");
  RequireFinite(B, "B");
  RequireFinite(C, "C");
  RequireFinite(D, "D");
}

Matrix StateSpaceModel::SystemMatrix() const {
  Matrix s(n() + m(), n() + m());
  s << A, B, C, D;
  return s;
}

StateSpaceModel StateSpaceModel::FromSystemMatrix(const Matrix& s, int n,
                                                  int m) {
  RequireShape(s, n + m, n + m, "system matrix");
  StateSpaceModel model{s.topLeftCorner(n, n), s.topRightCorner(n, m),
                        s.bottomLeftCorner(m, n), s.bottomRightCorner(m, m)};
  model.Validate();
  return model;
}

StateSpaceModel StateSpaceModel::Scalar(double a, double b, double c,
                                        double d) {
  StateSpaceModel model{Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
                        Matrix::Constant(1, 1, c), Matrix::Constant(1, 1, d)};
  model.Validate();
  return model;
}

bool is_stable_matrix(const Matrix& a, const Tolerances& tol) {
  const Vector lambda = eigenvalues(a);
  const Eigen::Index n = a.rows();
  // A perturbed Jordan block splits by ~sqrt(eps); cluster on that scale.
  const double cluster = std::sqrt(tol.circle_tol);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double r = std::abs(lambda(i));
    if (r > 1.0 + tol.circle_tol) return false;
    if (r < 1.0 - tol.circle_tol) continue;
    int algebraic = 0;
    Complex center(0.0, 0.0);
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      if (std::abs(lambda(j) - lambda(i)) <= cluster) {
        ++algebraic;
        center += lambda(j);
      }
    }
    center /= static_cast<double>(algebraic);
    const Matrix shifted = a - center * Matrix::Identity(n, n);
    const RealVector s = Eigen::JacobiSVD<Matrix>(shifted).singularValues();
    const double scale = std::max(1.0, norm2(a));
    int geometric = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (s(k) <= cluster * scale) ++geometric;
    }
    if (geometric < algebraic) return false;
  }
  return true;
}

MinimalityReport validate_minimal(const StateSpaceModel& model,
                                  const Tolerances& tol) {
  model.Validate();
  MinimalityReport r;
  const int n = model.n();
  r.ctrl_rank = KrylovRank(model.A, model.B, tol.rank_tol);
  r.obs_rank = KrylovRank(model.A.adjoint(), model.C.adjoint(), tol.rank_tol);
  r.controllable = r.ctrl_rank == n;
  r.observable = r.obs_rank == n;
  r.spectral_radius = spectral_radius(model.A);
  r.asymptotically_stable = r.spectral_radius < 1.0 - tol.circle_tol;
  r.stable = r.asymptotically_stable || is_stable_matrix(model.A, tol);
  return r;
}

Matrix transfer_eval(const StateSpaceModel& model, Complex z,
                     const Tolerances& tol) {
  model.Validate();
  const int n = model.n();
  const Matrix resolvent = z * Matrix::Identity(n, n) - model.A;
  Eigen::PartialPivLU<Matrix> lu(resolvent);
  if (!(lu.rcond() > tol.circle_tol * 1e-4)) {
    throw PassivityError(ErrorCode::kSingularResolvent,
                         "z is (numerically) an eigenvalue of A",
                         lu.rcond());
  }
  return model.C * lu.solve(model.B) + model.D;
}

HermitianMatrix phi_eval(const StateSpaceModel& model, double omega,
                         const Tolerances& tol) {
  const Matrix t = transfer_eval(model, std::polar(1.0, omega), tol);
  return HermitianMatrix(t.adjoint() + t);
}

std::vector<double> omega_grid(int count) {
  if (count < 2) {
    throw PassivityError(ErrorCode::kInput, "omega grid needs >= 2 points");
  }
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) {
    grid[k] = -std::numbers::pi + 2.0 * std::numbers::pi * k / (count - 1);
  }
  return grid;
}

std::vector<DissipationStep> simulate_dissipation(
    const StateSpaceModel& model, const HermitianMatrix& x,
    std::span<const Vector> inputs) {
  model.Validate();
  const int n = model.n();
  const int m = model.m();
  if (x.order() != n) {
    throw PassivityError(ErrorCode::kInput, "X must be n x n");
  }
  const Matrix w = build_W(x, model).matrix();
  const Matrix& xm = x.matrix();
  std::vector<DissipationStep> steps;
  steps.reserve(inputs.size());
  Vector state = Vector::Zero(n);
  Vector z(n + m);
  for (const Vector& u : inputs) {
    if (u.size() != m) {
      throw PassivityError(ErrorCode::kInput, "input vector must have size m");
    }
    const Vector next = model.A * state + model.B * u;
    const Vector y = model.C * state + model.D * u;
    DissipationStep step;
    step.slack = state.dot(xm * state).real() - next.dot(xm * next).real() +
                 2.0 * y.dot(u).real();
    z << state, u;
    step.quadratic_form = z.dot(w * z).real();
    steps.push_back(step);
    state = next;
  }
  return steps;
}

}  // namespace passivity
