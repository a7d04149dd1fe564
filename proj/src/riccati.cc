#include "passivity/riccati.h"

#include <algorithm>
#include <cmath>

namespace passivity {

namespace {

constexpr double kMaxSubspaceCondition = 1e10;

bool InvertibleAtRankTol(const Matrix& m, double scale, double rank_tol) {
  const RealVector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  return s(s.size() - 1) > rank_tol * std::max(scale, s(0));
}

// D^H + D − B^H X B together with the scale used to judge its singularity.
std::pair<Matrix, double> MiddleBlock(const HermitianMatrix& x,
                                      const StateSpaceModel& model) {
  const Matrix r = model.D.adjoint() + model.D -
                   model.B.adjoint() * x.matrix() * model.B;
  const double scale = norm2(model.D.adjoint() + model.D) +
                       norm2(model.B) * norm2(model.B) * norm2(x.matrix());
  return {r, scale};
}

Eigen::PartialPivLU<Matrix> FactorMiddle(const HermitianMatrix& x,
                                         const StateSpaceModel& model,
                                         const Tolerances& tol) {
  model.Validate();
  if (x.order() != model.n()) {
    throw PassivityError(ErrorCode::kInput, "X must be n x n");
  }
  const auto [r, scale] = MiddleBlock(x, model);
  if (!InvertibleAtRankTol(r, scale, tol.rank_tol)) {
    throw PassivityError(ErrorCode::kSchurDegenerate,
                         "D^H + D - B^H X B is singular");
  }
  return Eigen::PartialPivLU<Matrix>(r);
}

RiccatiResult Complete(const HermitianMatrix& x, const StateSpaceModel& model,
                       RiccatiBranch branch, const Tolerances& tol) {
  RiccatiResult result;
  result.X = x;
  result.branch = branch;
  try {
    const ClosedLoop cl = closed_loop(x, model, tol);
    result.F = cl.F;
    result.A_F = cl.A_F;
    result.residual_norm = riccati_residual(x, model, tol).matrix().norm();
  } catch (const PassivityError& e) {
    if (e.code() != ErrorCode::kSchurDegenerate) throw;
  }
  return result;
}

}  // namespace

SymplecticPencil build_symplectic(const StateSpaceModel& model,
                                  const Tolerances& tol) {
  model.Validate();
  const int n = model.n();
  const Matrix r = model.D.adjoint() + model.D;
  SymplecticPencil pencil;
  if (!InvertibleAtRankTol(r, norm2(r), tol.rank_tol)) {
    const ExtendedPencil ext = extended_pencil(model);
    pencil.L = ext.rhs;
    pencil.K = ext.lhs;
    pencil.extended = true;
    return pencil;
  }
  Eigen::PartialPivLU<Matrix> lu(r);
  const Matrix a_c = model.A - model.B * lu.solve(model.C);
  pencil.L = Matrix::Zero(2 * n, 2 * n);
  pencil.K = Matrix::Zero(2 * n, 2 * n);
  pencil.L.topLeftCorner(n, n).setIdentity();
  pencil.L.topRightCorner(n, n) = model.B * lu.solve(model.B.adjoint());
  pencil.L.bottomRightCorner(n, n) = a_c.adjoint();
  pencil.K.topLeftCorner(n, n) = a_c;
  pencil.K.bottomLeftCorner(n, n) = model.C.adjoint() * lu.solve(model.C);
  pencil.K.bottomRightCorner(n, n).setIdentity();
  if (InvertibleAtRankTol(a_c, std::max(1.0, norm2(model.A)), tol.rank_tol)) {
    pencil.S = Eigen::PartialPivLU<Matrix>(pencil.L).solve(pencil.K);
  }
  return pencil;
}

GeneralizedEigenvalues pencil_eigenvalues(const SymplecticPencil& pencil) {
  return generalized_eig(pencil.K, pencil.L);
}

ExtendedPencil extended_pencil(const StateSpaceModel& model) {
  model.Validate();
  const int n = model.n();
  const int m = model.m();
  const int size = 2 * n + m;
  ExtendedPencil p{Matrix::Zero(size, size), Matrix::Zero(size, size)};
  p.lhs.block(0, n, n, n) = model.A;
  p.lhs.block(0, 2 * n, n, m) = model.B;
  p.lhs.block(n, 0, n, n) = -Matrix::Identity(n, n);
  p.lhs.block(n, 2 * n, n, m) = model.C.adjoint();
  p.lhs.block(2 * n, n, m, n) = model.C;
  p.lhs.block(2 * n, 2 * n, m, m) = model.D.adjoint() + model.D;
  p.rhs.block(0, n, n, n) = Matrix::Identity(n, n);
  p.rhs.block(n, 0, n, n) = -model.A.adjoint();
  p.rhs.block(2 * n, 0, m, n) = -model.B.adjoint();
  return p;
}

RiccatiResult stabilizing_solution(const StateSpaceModel& model,
                                   const Tolerances& tol) {
  const int n = model.n();
  const ExtendedPencil p = extended_pencil(model);
  // Scale both blocks to unit norm so the finiteness test is balanced.
  const double lhs_scale = std::max(p.lhs.norm(), 1e-300);
  const double rhs_scale = std::max(p.rhs.norm(), 1e-300);
  const double circle_tol = tol.circle_tol;
  const DeflatingSubspace sub = ordered_deflating_subspace(
      p.lhs / lhs_scale, p.rhs / rhs_scale,
      [lhs_scale, rhs_scale](Complex alpha, Complex beta) {
        return std::abs(alpha) * lhs_scale < std::abs(beta) * rhs_scale;
      });
  const GeneralizedEigenvalues& ev = sub.eigenvalues;
  for (int i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev.alpha(i)) * lhs_scale;
    const double b = std::abs(ev.beta(i)) * rhs_scale;
    if (b > 0.0 && std::abs(a - b) <= circle_tol * std::max(a, b)) {
      throw PassivityError(ErrorCode::kSpectralSplitting,
                           "pencil has eigenvalues on the unit circle");
    }
  }
  if (sub.selected != n) {
    throw PassivityError(ErrorCode::kSpectralSplitting,
                         "expected " + std::to_string(n) +
                             " eigenvalues inside the unit disc, found " +
                             std::to_string(sub.selected));
  }
  const Matrix v1 = sub.basis.topRows(n);
  const Matrix v2 = sub.basis.middleRows(n, n);
  const RealVector s = Eigen::JacobiSVD<Matrix>(v2).singularValues();
  if (!(s(n - 1) > 0.0) || s(0) / s(n - 1) > kMaxSubspaceCondition) {
    throw PassivityError(ErrorCode::kConditioning,
                         "Riccati subspace basis is ill conditioned",
                         s(n - 1) > 0.0 ? s(0) / s(n - 1) : INFINITY);
  }
  const Matrix x_raw =
      -Eigen::PartialPivLU<Matrix>(v2.transpose()).solve(v1.transpose())
           .transpose();
  const double asym = (x_raw - x_raw.adjoint()).norm();
  if (asym > 1e-6 * std::max(1.0, x_raw.norm())) {
    throw PassivityError(ErrorCode::kConditioning,
                         "recovered Riccati solution is not Hermitian", asym);
  }
  const HermitianMatrix x(x_raw);
  if (!(lambda_min(x) > 0.0)) {
    throw PassivityError(ErrorCode::kDomain,
                         "stabilizing solution is not positive definite; the "
                         "model is not passive",
                         lambda_min(x));
  }
  return Complete(x, model, RiccatiBranch::kStabilizing, tol);
}

ExtremalSolutions extremal_solutions(const StateSpaceModel& model,
                                     const Tolerances& tol) {
  ExtremalSolutions out;
  out.minus = stabilizing_solution(model, tol);
  const StateSpaceModel dual{model.A.adjoint(), model.C.adjoint(),
                             model.B.adjoint(), model.D.adjoint()};
  const RiccatiResult dual_minus = stabilizing_solution(dual, tol);
  const int n = model.n();
  const Matrix t = cholesky(dual_minus.X, tol);
  const Matrix t_inv =
      t.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  const HermitianMatrix x_plus(t_inv * t_inv.adjoint());
  out.plus = Complete(x_plus, model, RiccatiBranch::kAntistabilizing, tol);
  return out;
}

HermitianMatrix riccati_residual(const HermitianMatrix& x,
                                 const StateSpaceModel& model,
                                 const Tolerances& tol) {
  const auto lu = FactorMiddle(x, model, tol);
  const Matrix& xm = x.matrix();
  const Matrix g = model.C - model.B.adjoint() * xm * model.A;
  return HermitianMatrix(xm - model.A.adjoint() * xm * model.A -
                         g.adjoint() * lu.solve(g));
}

ClosedLoop closed_loop(const HermitianMatrix& x, const StateSpaceModel& model,
                       const Tolerances& tol) {
  const auto lu = FactorMiddle(x, model, tol);
  const Matrix f =
      lu.solve(model.C - model.B.adjoint() * x.matrix() * model.A);
  return {f, model.A - model.B * f};
}

}  // namespace passivity
