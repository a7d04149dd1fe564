#pragma once

#include <optional>

#include "passivity/kernels.h"
#include "passivity/kyp.h"
#include "passivity/radius.h"
#include "passivity/system_model.h"

namespace passivity {

enum class PerturbationNorm { kTwo, kFrobenius };

/// Passivity test used by the distance search: ℳ_{−ξ} strictly passive.
bool shifted_back_passive(const StateSpaceModel& model, double xi,
                          const Tolerances& tol = {});

struct ConstrainedDistance {
  double xi_big = 0.0;  // smallest ξ making ℳ_{−ξ} passive (passing end)
  double xi_fail = 0.0;  // largest probed ξ for which ℳ_{−ξ} fails
  Perturbation delta;   // ℳ + Δ = ℳ_{−Ξ}
  int iterations = 0;
};

/// Doubling search followed by bisection to width tau. A model that already
/// passes the test returns Ξ = 0 and Δ = 0.
ConstrainedDistance constrained_distance(const StateSpaceModel& model,
                                         double tau, const Tolerances& tol = {});

/// Δ = (diag(0, ξI) − ξS)/(1 + ξ) with S the system matrix.
Perturbation shift_perturbation(const StateSpaceModel& model, double xi);

/// For Ξ > 0 the stabilizing solution X₋ of ℳ_{−Ξ}, which lies on the
/// boundary for ℳ_{−Ξ} and in the interior for ℳ_{−(Ξ+τ)}; the returned
/// classification refers to ℳ_{−(Ξ+τ)}. For Ξ = 0 the midpoint (X₋ + X₊)/2
/// of ℳ itself, classified for ℳ.
Certificate pick_certificate(const StateSpaceModel& model, double xi_big,
                             double tau, const Tolerances& tol = {});

struct RefineOptions {
  PerturbationNorm norm = PerturbationNorm::kTwo;
  int bisection_steps = 40;
  int max_sweeps = 2000;
  int stall_window = 50;
  double stall_tol = 1e-12;
  double relative_gap = 1e-6;  // stop when (hi − lo) ≤ relative_gap·‖Δ₀‖
};

struct RefineResult {
  Perturbation delta;
  double norm = 0.0;  // in the requested norm
  bool converged = false;
  int sweeps = 0;
};

/// Smallest Δ (for fixed X) with Ŵ(X, ℳ+Δ) ⪰ 0 and ‖Δ‖ ≤ σ: bisection on σ
/// with Dykstra alternating projections between the norm ball and the PSD
/// set. Each candidate is verified directly; the best verified Δ is kept, so
/// the result never exceeds ‖Δ₀‖.
RefineResult refine_distance(const StateSpaceModel& model,
                             const HermitianMatrix& x, const Perturbation& delta0,
                             const RefineOptions& options = {},
                             const Tolerances& tol = {});

double perturbation_norm(const Perturbation& delta, PerturbationNorm norm);

struct DistanceReport {
  double xi_big = 0.0;
  Perturbation delta_constrained;
  Certificate X_cert;
  std::optional<Perturbation> delta_refined;
  double sigma2 = 0.0;      // 2-norm of the returned perturbation
  double sigma_frob = 0.0;  // Frobenius norm of the returned perturbation
  double constrained_sigma2 = 0.0;
  double constrained_sigma_frob = 0.0;
  bool refinement_converged = false;
};

DistanceReport distance_to_passivity(const StateSpaceModel& model, double tau,
                                     const RefineOptions& options = {},
                                     const Tolerances& tol = {});

struct StabilityDistance {
  double xi = 0.0;             // max(0, ρ(A) − 1)
  bool attained = true;        // false when A/(1+ξ) has a defective unit-circle eigenvalue
  double relative_error_2 = 0.0;     // ‖A^{-1}Δ_A‖₂ = ξ/(1+ξ)
  double relative_error_frob = 0.0;  // ξ√n/(1+ξ)
};

StabilityDistance distance_to_stability(const Matrix& a,
                                        const Tolerances& tol = {});

}  // namespace passivity
