#include "passivity/radius.h"

#include <algorithm>
#include <cmath>

namespace passivity {

namespace {

// Relative width of the cluster of eigenvalues treated as λ_max.
constexpr double kClusterTol = 1e-8;

Matrix Composite(const Matrix& f1, const Matrix& f2, double gamma) {
  Matrix g(f1.rows(), f1.cols() + f2.cols());
  g << gamma * f1, f2 / gamma;
  return g;
}

struct Frames {
  Matrix F1;
  Matrix F2;
};

// F_i = R^{-H} E_i with Ŵ = R^H R.
Frames FramesFor(const HermitianMatrix& what, int n, int m,
                 const Tolerances& tol) {
  const Matrix r = cholesky(what, tol);
  const PerturbationFrame frame = perturbation_frame(n, m);
  const auto lower = r.adjoint().triangularView<Eigen::Lower>();
  return {lower.solve(frame.E1), lower.solve(frame.E2)};
}

// Picks z in span(basis) with equal block norms, using the Hermitian form
// diag(I, −I) restricted to the span.
Vector EqualNormVector(const Matrix& basis, int half) {
  const int k = static_cast<int>(basis.cols());
  Matrix form = basis.topRows(half).adjoint() * basis.topRows(half) -
                basis.bottomRows(half).adjoint() * basis.bottomRows(half);
  const HermitianEig eig = hermitian_eig(HermitianMatrix(form));
  const double mu_lo = eig.values(0);
  const double mu_hi = eig.values(k - 1);
  Vector y;
  if (mu_lo < 0.0 && mu_hi > 0.0) {
    // cos²θ·μ₋ + sin²θ·μ₊ = 0.
    const double theta = std::atan(std::sqrt(-mu_lo / mu_hi));
    y = std::cos(theta) * eig.vectors.col(0) +
        std::sin(theta) * eig.vectors.col(k - 1);
  } else {
    int best = 0;
    for (int i = 1; i < k; ++i) {
      if (std::abs(eig.values(i)) < std::abs(eig.values(best))) best = i;
    }
    y = eig.vectors.col(best);
  }
  return basis * y;
}

}  // namespace

Matrix Perturbation::Assembled() const {
  Matrix s(deltaA.rows() + deltaC.rows(), deltaA.cols() + deltaB.cols());
  s << deltaA, deltaB, deltaC, deltaD;
  return s;
}

Perturbation Perturbation::FromSystem(const Matrix& delta, int n, int m) {
  if (delta.rows() != n + m || delta.cols() != n + m) {
    throw PassivityError(ErrorCode::kInput, "perturbation must be (n+m)-square");
  }
  return {delta.topLeftCorner(n, n), delta.topRightCorner(n, m),
          delta.bottomLeftCorner(m, n), delta.bottomRightCorner(m, m)};
}

StateSpaceModel Perturbation::ApplyTo(const StateSpaceModel& model) const {
  StateSpaceModel out{model.A + deltaA, model.B + deltaB, model.C + deltaC,
                      model.D + deltaD};
  out.Validate();
  return out;
}

double gamma_objective(const Matrix& f1, const Matrix& f2, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw PassivityError(ErrorCode::kInput, "gamma must be positive", gamma);
  }
  const Matrix g = gamma * gamma * f1 * f1.adjoint() +
                   f2 * f2.adjoint() / (gamma * gamma);
  return lambda_max(HermitianMatrix(g));
}

GammaMinimum minimize_gamma(const Matrix& f1, const Matrix& f2,
                            const Tolerances& tol) {
  if (f1.rows() != f2.rows() || f1.cols() != f2.cols()) {
    throw PassivityError(ErrorCode::kInput, "F1 and F2 must have equal shape");
  }
  GammaMinimum out;
  GammaSearch& s = out.search;
  s.F1 = f1;
  s.F2 = f2;
  s.alpha = norm2(f1);
  s.beta = norm2(f2);
  if (!(s.alpha > 0.0) || !(s.beta > 0.0)) {
    throw PassivityError(ErrorCode::kDegenerateFrame,
                         "zero frame: the radius is infinite");
  }
  s.gamma_lo = std::sqrt(s.beta / (2.0 * s.alpha));
  s.gamma_hi = std::sqrt(2.0 * s.beta / s.alpha);
  s.gamma_gm = std::sqrt(s.beta / s.alpha);
  const GoldenResult gr = golden_section_min(
      [&](double g) { return gamma_objective(f1, f2, g); }, s.gamma_lo,
      s.gamma_hi, tol.golden_tol * s.gamma_gm);
  s.gamma_star = gr.x;
  s.evaluations = gr.evaluations;

  const Matrix g = Composite(f1, f2, s.gamma_star);
  const HermitianEig eig = hermitian_eig(HermitianMatrix(g.adjoint() * g));
  const int k = static_cast<int>(eig.values.size());
  s.lambda_max_star = eig.values(k - 1);
  int first = k - 1;
  while (first > 0 && eig.values(first - 1) >=
                          s.lambda_max_star * (1.0 - kClusterTol)) {
    --first;
  }
  const int half = static_cast<int>(f1.cols());
  const Vector z =
      EqualNormVector(eig.vectors.middleCols(first, k - first), half);
  out.u = z.head(half);
  out.v = z.tail(half);
  const double nu = out.u.norm();
  const double nv = out.v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) {
    throw PassivityError(ErrorCode::kDegenerateFrame,
                         "no eigenvector with two nonzero blocks at gamma*");
  }
  out.u /= nu;
  out.v /= nv;
  out.w = g * z;
  out.w /= out.w.norm();
  return out;
}

RadiusReport x_passivity_radius(const StateSpaceModel& model,
                                const HermitianMatrix& x,
                                const Tolerances& tol) {
  const Certificate cert = classify_certificate(x, model, tol);
  if (cert.classification != CertificateClass::kInterior) {
    throw PassivityError(ErrorCode::kDefiniteness,
                         std::string("certificate must be interior, got ") +
                             ToString(cert.classification),
                         cert.lambda_min_W);
  }
  const int n = model.n();
  const int m = model.m();
  const HermitianMatrix what = build_What(x, model, tol);
  const Frames frames = FramesFor(what, n, m, tol);

  RadiusReport r;
  r.gamma = minimize_gamma(frames.F1, frames.F2, tol);
  const GammaSearch& s = r.gamma.search;
  r.rho = 1.0 / s.lambda_max_star;
  r.delta = Perturbation::FromSystem(
      -r.gamma.u * r.gamma.v.adjoint() / s.lambda_max_star, n, m);

  const Svd s1 = svd(frames.F1);
  const Svd s2 = svd(frames.F2);
  r.sv_u = s1.V.col(0);
  r.sv_uhat = s1.U.col(0);
  r.sv_v = s2.V.col(0);
  r.sv_vhat = s2.U.col(0);
  const double ab = s.alpha * s.beta;
  r.lower_bound = 1.0 / (2.0 * ab);
  r.upper_bound = 1.0 / ((1.0 + std::abs(r.sv_vhat.dot(r.sv_uhat))) * ab);
  r.lambda_min_What = lambda_min(what);
  r.scaled_eig_bound = lambda_min(ScaleDs(what, n, m));
  r.estimate = gamma_mean_estimate(normalize(model, cert, tol), tol);
  return r;
}

Matrix dual_matrix(const Matrix& f1, const Matrix& f2, const Matrix& q) {
  if (q.rows() != f1.cols() || q.cols() != f2.cols()) {
    throw PassivityError(ErrorCode::kInput, "Q has the wrong shape");
  }
  const Matrix half = f1 * q * f2.adjoint();
  return half + half.adjoint();
}

Matrix dual_certificate(const Vector& u, const Vector& v, double tol) {
  if (u.size() != v.size() || std::abs(u.norm() - 1.0) > tol ||
      std::abs(v.norm() - 1.0) > tol) {
    throw PassivityError(ErrorCode::kInput,
                         "dual_certificate needs unit vectors of equal size");
  }
  const int k = static_cast<int>(u.size());
  const Complex uv = u.dot(v);  // u^H v
  const double theta = std::abs(uv) > 0.0 ? -std::arg(uv) : 0.0;
  const Complex phase = std::polar(1.0, theta);
  // Householder map of v onto e^{-iθ} u; v^H e^{-iθ} u is real by choice of θ.
  const Vector w = v - u / phase;
  Matrix h = Matrix::Identity(k, k);
  if (w.norm() > tol) {
    h -= 2.0 * w * w.adjoint() / w.squaredNorm();
  }
  return phase * h;
}

double gamma_mean_estimate(const NormalizedRealization& mt,
                           const Tolerances& tol) {
  const int n = mt.model.n();
  const int m = mt.model.m();
  const HermitianMatrix what =
      build_What(HermitianMatrix::Identity(n), mt.model, tol);
  const Frames frames = FramesFor(what, n, m, tol);
  const double gamma = std::sqrt(norm2(frames.F2) / norm2(frames.F1));
  const double sigma = norm2(Composite(frames.F1, frames.F2, gamma));
  return sigma * sigma;
}

}  // namespace passivity
