#include "passivity/passify.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "passivity/riccati.h"
#include "passivity/xi.h"

namespace passivity {

namespace {

constexpr int kMaxDoublings = 60;

struct ProjectionSetup {
  Matrix what;  // Ŵ(X, ℳ)
  PerturbationFrame frame;
  Matrix r;     // D^H + D
  Matrix sys;   // [[A, B], [C, D]]
  double scale = 1.0;
  int n = 0;
  int m = 0;
};

double LambdaMinPerturbed(const ProjectionSetup& s, const Matrix& delta) {
  return lambda_min(HermitianMatrix(s.what + s.frame.Embed(delta)));
}

constexpr int kMaxInnerProjections = 200;

// One clip of Ŵ + E(Δ) to {H ⪰ margin} followed by reading the perturbation
// blocks back, which restores the fixed blocks of Ŵ.
Matrix ClipAndRead(const ProjectionSetup& s, const Matrix& delta,
                   double margin) {
  const int n = s.n;
  const int m = s.m;
  const HermitianEig eig =
      hermitian_eig(HermitianMatrix(s.what + s.frame.Embed(delta)));
  const RealVector clipped = eig.values.cwiseMax(margin);
  const Matrix h = eig.vectors * clipped.cast<Complex>().asDiagonal() *
                   eig.vectors.adjoint();
  Matrix out(n + m, n + m);
  out.topLeftCorner(n, n) = h.block(0, n, n, n);
  out.topRightCorner(n, m) = h.block(0, 2 * n, n, m);
  out.bottomLeftCorner(m, n) = h.block(2 * n, n, m, n);
  const Matrix d_sum = h.block(2 * n, 2 * n, m, m) - s.r;
  out.bottomRightCorner(m, m) = 0.5 * (d_sum + d_sum.adjoint()) / 2.0;
  out.topLeftCorner(n, n) -= s.sys.topLeftCorner(n, n);
  out.topRightCorner(n, m) -= s.sys.topRightCorner(n, m);
  out.bottomLeftCorner(m, n) -= s.sys.bottomLeftCorner(m, n);
  return out;
}

// Approximate projection onto {Δ : Ŵ + E(Δ) ⪰ 0}: alternates the clip with
// the readback until the perturbed Ŵ is feasible at `feas`.
Matrix ProjectPsd(const ProjectionSetup& s, const Matrix& delta,
                  double margin, double feas) {
  Matrix cur = ClipAndRead(s, delta, margin);
  for (int k = 1; k < kMaxInnerProjections; ++k) {
    if (LambdaMinPerturbed(s, cur) >= feas) break;
    cur = ClipAndRead(s, cur, margin);
  }
  return cur;
}

Matrix ProjectBall(const Matrix& delta, double sigma, PerturbationNorm norm) {
  if (norm == PerturbationNorm::kFrobenius) {
    const double f = delta.norm();
    return f > sigma ? Matrix(delta * (sigma / f)) : delta;
  }
  const Svd s = svd(delta);
  const RealVector clipped = s.sigma.cwiseMin(sigma);
  return s.U * clipped.cast<Complex>().asDiagonal() * s.V.adjoint();
}

double NormOf(const Matrix& delta, PerturbationNorm norm) {
  return norm == PerturbationNorm::kFrobenius ? delta.norm() : norm2(delta);
}

}  // namespace

bool shifted_back_passive(const StateSpaceModel& model, double xi,
                          const Tolerances& tol) {
  return is_strictly_passive(
      shift_model(model, xi, ShiftDirection::kBackward).model, tol);
}

Perturbation shift_perturbation(const StateSpaceModel& model, double xi) {
  const int n = model.n();
  const int m = model.m();
  Matrix target = Matrix::Zero(n + m, n + m);
  target.bottomRightCorner(m, m) = xi * Matrix::Identity(m, m);
  return Perturbation::FromSystem(
      (target - xi * model.SystemMatrix()) / (1.0 + xi), n, m);
}

ConstrainedDistance constrained_distance(const StateSpaceModel& model,
                                         double tau, const Tolerances& tol) {
  if (!(tau > 0.0)) {
    throw PassivityError(ErrorCode::kInput, "tau must be positive", tau);
  }
  if (!validate_minimal(model, tol).minimal()) {
    throw PassivityError(ErrorCode::kMinimality, "model is not minimal");
  }
  ConstrainedDistance out;
  if (shifted_back_passive(model, 0.0, tol)) {
    out.delta = shift_perturbation(model, 0.0);
    return out;
  }
  // Stability of A/(1+ξ) is necessary, so start above ρ(A) − 1.
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * (spectral_radius(model.A) - 1.0));
  int doublings = 0;
  while (!shifted_back_passive(model, hi, tol)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > kMaxDoublings) {
      throw PassivityError(ErrorCode::kConvergence,
                           "no passive shift found while doubling", hi);
    }
  }
  while (hi - lo > tau) {
    const double mid = 0.5 * (lo + hi);
    (shifted_back_passive(model, mid, tol) ? hi : lo) = mid;
    ++out.iterations;
  }
  out.xi_big = hi;
  out.xi_fail = lo;
  out.delta = shift_perturbation(model, hi);
  return out;
}

Certificate pick_certificate(const StateSpaceModel& model, double xi_big,
                             double tau, const Tolerances& tol) {
  if (xi_big <= 0.0) {
    const ExtremalSolutions ext = extremal_solutions(model, tol);
    const HermitianMatrix mid = (ext.minus.X + ext.plus.X) * 0.5;
    return classify_certificate(mid, model, tol);
  }
  const StateSpaceModel boundary =
      shift_model(model, xi_big, ShiftDirection::kBackward).model;
  const RiccatiResult r = stabilizing_solution(boundary, tol);
  const StateSpaceModel inner =
      shift_model(model, xi_big + tau, ShiftDirection::kBackward).model;
  return classify_certificate(r.X, inner, tol);
}

double perturbation_norm(const Perturbation& delta, PerturbationNorm norm) {
  return NormOf(delta.Assembled(), norm);
}

RefineResult refine_distance(const StateSpaceModel& model,
                             const HermitianMatrix& x,
                             const Perturbation& delta0,
                             const RefineOptions& options,
                             const Tolerances& tol) {
  ProjectionSetup s;
  s.n = model.n();
  s.m = model.m();
  s.what = build_What(x, model, tol).matrix();
  s.frame = perturbation_frame(s.n, s.m);
  s.r = model.D.adjoint() + model.D;
  s.sys = model.SystemMatrix();
  s.scale = std::max(1.0, norm2(s.what));
  const double feas = -tol.psd_tol * s.scale;
  const double margin = 10.0 * tol.psd_tol * s.scale;

  const Matrix d0 = delta0.Assembled();
  if (d0.rows() != s.n + s.m || d0.cols() != s.n + s.m) {
    throw PassivityError(ErrorCode::kInput, "delta0 has the wrong shape");
  }
  // The constrained start sits on the boundary; accept it at √psd_tol.
  const double start_lambda = LambdaMinPerturbed(s, d0);
  if (start_lambda < -std::sqrt(tol.psd_tol) * s.scale) {
    throw PassivityError(ErrorCode::kPrecondition,
                         "starting perturbation is not feasible", start_lambda);
  }

  RefineResult out;
  Matrix best = d0;
  double best_norm = NormOf(d0, options.norm);
  const auto consider = [&](const Matrix& cand) {
    if (LambdaMinPerturbed(s, cand) < feas) return false;
    const double nrm = NormOf(cand, options.norm);
    if (nrm < best_norm) {
      best_norm = nrm;
      best = cand;
    }
    return true;
  };
  const Matrix zero = Matrix::Zero(s.n + s.m, s.n + s.m);
  if (consider(zero)) {
    out.delta = Perturbation::FromSystem(best, s.n, s.m);
    out.norm = 0.0;
    out.converged = true;
    return out;
  }

  const double gap = options.relative_gap * std::max(best_norm, 1e-300);
  double lo = 0.0;
  double hi = best_norm;
  for (int step = 0; step < options.bisection_steps && hi - lo > gap; ++step) {
    const double sigma = 0.5 * (lo + hi);
    Matrix cur = ProjectBall(best, sigma, options.norm);
    Matrix p = zero;
    Matrix q = zero;
    bool feasible = false;
    std::vector<double> residuals;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      ++out.sweeps;
      const Matrix y = ProjectPsd(s, cur + p, margin, feas);
      p = cur + p - y;
      const Matrix next = ProjectBall(y + q, sigma, options.norm);
      q = y + q - next;
      cur = next;
      if (consider(y) && NormOf(y, options.norm) <= sigma) feasible = true;
      if (consider(cur)) feasible = true;
      if (feasible) break;
      residuals.push_back((cur - y).norm());
      const std::size_t w = static_cast<std::size_t>(options.stall_window);
      if (residuals.size() > w &&
          residuals[residuals.size() - 1 - w] - residuals.back() <
              options.stall_tol) {
        break;
      }
    }
    if (feasible) {
      hi = std::min(sigma, best_norm);
    } else {
      lo = sigma;
    }
  }
  out.converged = hi - lo <= gap;
  out.delta = Perturbation::FromSystem(best, s.n, s.m);
  out.norm = best_norm;
  return out;
}

DistanceReport distance_to_passivity(const StateSpaceModel& model, double tau,
                                     const RefineOptions& options,
                                     const Tolerances& tol) {
  DistanceReport report;
  const ConstrainedDistance cd = constrained_distance(model, tau, tol);
  report.xi_big = cd.xi_big;
  report.delta_constrained = cd.delta;
  report.constrained_sigma2 =
      perturbation_norm(cd.delta, PerturbationNorm::kTwo);
  report.constrained_sigma_frob =
      perturbation_norm(cd.delta, PerturbationNorm::kFrobenius);
  report.X_cert = pick_certificate(model, cd.xi_big, tau, tol);
  report.sigma2 = report.constrained_sigma2;
  report.sigma_frob = report.constrained_sigma_frob;
  if (cd.xi_big <= 0.0) {
    report.refinement_converged = true;
    return report;
  }
  const RefineResult refined =
      refine_distance(model, report.X_cert.X, cd.delta, options, tol);
  report.delta_refined = refined.delta;
  report.refinement_converged = refined.converged;
  report.sigma2 = perturbation_norm(refined.delta, PerturbationNorm::kTwo);
  report.sigma_frob =
      perturbation_norm(refined.delta, PerturbationNorm::kFrobenius);
  return report;
}

StabilityDistance distance_to_stability(const Matrix& a,
                                        const Tolerances& tol) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw PassivityError(ErrorCode::kInput, "A must be square and nonempty");
  }
  RequireFinite(a, "A");
  StabilityDistance out;
  out.xi = std::max(0.0, spectral_radius(a) - 1.0);
  out.attained = is_stable_matrix(a / (1.0 + out.xi), tol);
  const double n = static_cast<double>(a.rows());
  out.relative_error_2 = out.xi / (1.0 + out.xi);
  out.relative_error_frob = out.xi * std::sqrt(n) / (1.0 + out.xi);
  return out;
}

}  // namespace passivity
