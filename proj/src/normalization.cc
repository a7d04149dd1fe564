#include "passivity/normalization.h"

#include <cmath>

namespace passivity {

StateSpaceModel transform_model(const StateSpaceModel& model,
                                const Matrix& t) {
  model.Validate();
  if (t.rows() != model.n() || t.cols() != model.n()) {
    throw PassivityError(ErrorCode::kInput, "T must be n x n");
  }
  const Matrix t_inv = Eigen::PartialPivLU<Matrix>(t).inverse();
  return {t * model.A * t_inv, t * model.B, model.C * t_inv, model.D};
}

NormalizedRealization normalize(const StateSpaceModel& model,
                                const Certificate& cert,
                                const Tolerances& tol) {
  model.Validate();
  if (cert.X.order() != model.n()) {
    throw PassivityError(ErrorCode::kInput, "certificate X must be n x n");
  }
  if (cert.classification == CertificateClass::kOutside) {
    throw PassivityError(ErrorCode::kDefiniteness,
                         "certificate is outside the passivity set",
                         cert.lambda_min_W);
  }
  NormalizedRealization out;
  out.T = cholesky(cert.X, tol);
  out.model = transform_model(model, out.T);
  out.source_X = cert.X;
  return out;
}

NormalizedRealization canonical_form(const NormalizedRealization& mt,
                                     const Tolerances& tol) {
  mt.model.Validate();
  Svd s = svd(mt.model.A);
  const int n = mt.model.n();
  for (int j = 0; j < n; ++j) {
    int lead = 0;
    while (lead < n && std::abs(s.U(lead, j)) <= tol.rank_tol) ++lead;
    if (lead == n) continue;
    const Complex phase = std::conj(s.U(lead, j)) / std::abs(s.U(lead, j));
    s.U.col(j) *= phase;
    s.V.col(j) *= phase;
  }
  NormalizedRealization out;
  out.model.A = s.sigma.cast<Complex>().asDiagonal() * (s.V.adjoint() * s.U);
  out.model.B = s.U.adjoint() * mt.model.B;
  out.model.C = mt.model.C * s.U;
  out.model.D = mt.model.D;
  out.T = s.U.adjoint() * mt.T;
  out.source_X = mt.source_X;
  return out;
}

NormalizationCheck verify_normalized(const StateSpaceModel& model,
                                     const Tolerances& tol) {
  const HermitianMatrix w = build_W(HermitianMatrix::Identity(model.n()), model);
  NormalizationCheck check;
  const RealVector values = hermitian_eig(w).values;
  check.lambda_min = values(0);
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  check.normalized = check.lambda_min >= -tol.psd_tol * scale;
  check.norm_A = norm2(model.A);
  check.contractive = check.norm_A <= 1.0 + tol.psd_tol;
  return check;
}

}  // namespace passivity
