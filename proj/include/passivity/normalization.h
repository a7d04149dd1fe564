#pragma once

#include "passivity/kernels.h"
#include "passivity/kyp.h"
#include "passivity/system_model.h"

namespace passivity {

/// State-space realization ℳ_T = {T A T^{-1}, T B, C T^{-1}, D} for which
/// W(I, ℳ_T) ⪰ 0, obtained from a certificate X = T^H T.
struct NormalizedRealization {
  StateSpaceModel model;
  Matrix T;  // upper triangular from normalize; unitary times that after canonical_form
  HermitianMatrix source_X;
};

/// Cholesky-based normalization. Requires X ≻ 0 classified Interior or
/// Boundary.
NormalizedRealization normalize(const StateSpaceModel& model,
                                const Certificate& cert,
                                const Tolerances& tol = {});

/// Applies the state transformation T to the model.
StateSpaceModel transform_model(const StateSpaceModel& model, const Matrix& t);

/// Unitary change of state coordinates A_T = UΣV^H ↦ U^H A_T U = Σ·(V^H U).
/// The first nonzero entry of each column of U is made real positive.
NormalizedRealization canonical_form(const NormalizedRealization& mt,
                                     const Tolerances& tol = {});

struct NormalizationCheck {
  bool normalized = false;
  double lambda_min = 0.0;   // of [[I, C^H], [C, D^H+D]] − [A B]^H [A B]
  double norm_A = 0.0;
  bool contractive = false;  // ‖A‖₂ ≤ 1 + psd_tol
};

NormalizationCheck verify_normalized(const StateSpaceModel& model,
                                     const Tolerances& tol = {});

}  // namespace passivity
