#include "passivity/kyp.h"

#include <cmath>

namespace passivity {

namespace {

void RequireCompatible(const HermitianMatrix& x, const StateSpaceModel& model) {
  model.Validate();
  if (x.order() != model.n()) {
    throw PassivityError(ErrorCode::kInput,
                         "certificate X must be n x n (n = " +
                             std::to_string(model.n()) + ")");
  }
}

}  // namespace

HermitianMatrix build_W(const HermitianMatrix& x,
                        const StateSpaceModel& model) {
  RequireCompatible(x, model);
  const auto& [a, b, c, d] = model;
  const Matrix& xm = x.matrix();
  const int n = model.n();
  const int m = model.m();
  Matrix w(n + m, n + m);
  w.topLeftCorner(n, n) = xm - a.adjoint() * xm * a;
  w.topRightCorner(n, m) = c.adjoint() - a.adjoint() * xm * b;
  w.bottomLeftCorner(m, n) = c - b.adjoint() * xm * a;
  w.bottomRightCorner(m, m) = d.adjoint() + d - b.adjoint() * xm * b;
  return HermitianMatrix(w);
}

HermitianMatrix build_What(const HermitianMatrix& x,
                           const StateSpaceModel& model,
                           const Tolerances& tol) {
  RequireCompatible(x, model);
  const Matrix t = cholesky(x, tol);  // throws for X not PD
  const int n = model.n();
  const int m = model.m();
  const Matrix t_inv =
      t.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  Matrix h(2 * n + m, 2 * n + m);
  h << t_inv * t_inv.adjoint(), model.A, model.B,
       model.A.adjoint(), x.matrix(), model.C.adjoint(),
       model.B.adjoint(), model.C, model.D.adjoint() + model.D;
  return HermitianMatrix(h);
}

HermitianMatrix build_Wtilde(const HermitianMatrix& x,
                             const StateSpaceModel& model) {
  RequireCompatible(x, model);
  const Matrix& xm = x.matrix();
  const int n = model.n();
  const int m = model.m();
  Matrix h(2 * n + m, 2 * n + m);
  h << xm, xm * model.A, xm * model.B,
       model.A.adjoint() * xm, xm, model.C.adjoint(),
       model.B.adjoint() * xm, model.C, model.D.adjoint() + model.D;
  return HermitianMatrix(h);
}

Matrix PerturbationFrame::Ds() const {
  return ds.cast<Complex>().asDiagonal();
}

Matrix PerturbationFrame::Embed(const Matrix& delta) const {
  const Matrix half = E1 * delta * E2.transpose();
  return half + half.adjoint();
}

PerturbationFrame perturbation_frame(int n, int m) {
  if (n < 1 || m < 1) {
    throw PassivityError(ErrorCode::kInput, "frame needs n, m >= 1");
  }
  PerturbationFrame f;
  f.E1 = Matrix::Zero(2 * n + m, n + m);
  f.E2 = Matrix::Zero(2 * n + m, n + m);
  f.E1.topLeftCorner(n, n).setIdentity();
  f.E1.bottomRightCorner(m, m).setIdentity();
  f.E2.block(n, 0, n, n).setIdentity();
  f.E2.bottomRightCorner(m, m).setIdentity();
  f.ds = RealVector::Ones(2 * n + m);
  f.ds.tail(m).setConstant(1.0 / std::sqrt(2.0));
  return f;
}

HermitianMatrix ScaleDs(const HermitianMatrix& h, int n, int m) {
  if (h.order() != 2 * n + m) {
    throw PassivityError(ErrorCode::kInput, "ScaleDs: order must be 2n+m");
  }
  Matrix s = h.matrix();
  const double r = 1.0 / std::sqrt(2.0);
  s.bottomRows(m) *= r;
  s.rightCols(m) *= r;
  return HermitianMatrix(s);
}

KypMatrices build_kyp_matrices(const HermitianMatrix& x,
                               const StateSpaceModel& model,
                               const Tolerances& tol) {
  return {build_W(x, model), build_What(x, model, tol), build_Wtilde(x, model),
          perturbation_frame(model.n(), model.m())};
}

const char* ToString(CertificateClass c) {
  switch (c) {
    case CertificateClass::kInterior: return "interior";
    case CertificateClass::kBoundary: return "boundary";
    case CertificateClass::kOutside: return "outside";
  }
  return "unknown";
}

Certificate classify_certificate(const HermitianMatrix& x,
                                 const StateSpaceModel& model,
                                 const Tolerances& tol) {
  const HermitianMatrix w = build_W(x, model);
  Certificate cert;
  cert.X = x;
  const RealVector wv = hermitian_eig(w).values;
  const RealVector xv = hermitian_eig(x).values;
  cert.lambda_min_W = wv(0);
  cert.lambda_min_X = xv(0);
  const double w_scale = wv.cwiseAbs().maxCoeff();
  const double x_scale = xv.cwiseAbs().maxCoeff();
  const bool x_pd = cert.lambda_min_X > tol.psd_tol * x_scale;
  if (!x_pd) {
    cert.classification = CertificateClass::kOutside;
  } else if (cert.lambda_min_W > tol.psd_tol * w_scale) {
    cert.classification = CertificateClass::kInterior;
  } else if (cert.lambda_min_W >= -tol.psd_tol * w_scale) {
    cert.classification = CertificateClass::kBoundary;
  } else {
    cert.classification = CertificateClass::kOutside;
  }
  return cert;
}

}  // namespace passivity
