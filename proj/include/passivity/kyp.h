#pragma once

#include "passivity/kernels.h"
#include "passivity/system_model.h"

namespace passivity {

/// W(X,ℳ) = [[X − A^H X A, C^H − A^H X B], [C − B^H X A, D^H + D − B^H X B]].
HermitianMatrix build_W(const HermitianMatrix& x, const StateSpaceModel& model);

/// Ŵ(X,ℳ) = [[X^{-1}, A, B], [A^H, X, C^H], [B^H, C, D^H + D]]. Requires X ≻ 0.
HermitianMatrix build_What(const HermitianMatrix& x,
                           const StateSpaceModel& model,
                           const Tolerances& tol = {});

/// W̃(X,ℳ) = [[X, XA, XB], [A^H X, X, C^H], [B^H X, C, D^H + D]], congruent to
/// diag(X, W(X,ℳ)).
HermitianMatrix build_Wtilde(const HermitianMatrix& x,
                             const StateSpaceModel& model);

/// Block selectors that place a perturbation Δ_S = [[ΔA, ΔB], [ΔC, ΔD]] into
/// Ŵ: Ŵ(X, ℳ+Δ) = Ŵ(X, ℳ) + E₁ Δ E₂^T + E₂ Δ^H E₁^T.
struct PerturbationFrame {
  Matrix E1;      // (2n+m) x (n+m)
  Matrix E2;      // (2n+m) x (n+m)
  RealVector ds;  // diagonal of D_s = diag(I_n, I_n, I_m/√2)

  Matrix Ds() const;
  /// E₁ Δ E₂^T + E₂ Δ^H E₁^T.
  Matrix Embed(const Matrix& delta) const;
};

PerturbationFrame perturbation_frame(int n, int m);

/// D_s H D_s for a (2n+m)-square H.
HermitianMatrix ScaleDs(const HermitianMatrix& h, int n, int m);

struct KypMatrices {
  HermitianMatrix W;
  HermitianMatrix What;
  HermitianMatrix Wtilde;
  PerturbationFrame frame;
};

KypMatrices build_kyp_matrices(const HermitianMatrix& x,
                               const StateSpaceModel& model,
                               const Tolerances& tol = {});

enum class CertificateClass { kInterior, kBoundary, kOutside };
const char* ToString(CertificateClass c);

struct Certificate {
  HermitianMatrix X;
  CertificateClass classification = CertificateClass::kOutside;
  double lambda_min_W = 0.0;
  double lambda_min_X = 0.0;
};

/// Interior: W ≻ 0 and X ≻ 0; Boundary: λ_min(W) within ±psd_tol·‖W‖ and
/// X ≻ 0; Outside otherwise.
Certificate classify_certificate(const HermitianMatrix& x,
                                 const StateSpaceModel& model,
                                 const Tolerances& tol = {});

}  // namespace passivity
