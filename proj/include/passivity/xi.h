#pragma once

#include <vector>

#include "passivity/kernels.h"
#include "passivity/kyp.h"
#include "passivity/riccati.h"
#include "passivity/system_model.h"

namespace passivity {

enum class ShiftDirection { kForward, kBackward };

/// Forward: ℳ_ξ = {A, B, C, D − ξI}/(1 − ξ), ξ < 1.
/// Backward: ℳ_{−ξ} = {A, B, C, D + ξI}/(1 + ξ), ξ > −1.
struct ShiftedModel {
  StateSpaceModel base;
  double xi = 0.0;
  ShiftDirection direction = ShiftDirection::kForward;
  StateSpaceModel model;
};

ShiftedModel shift_model(const StateSpaceModel& model, double xi,
                         ShiftDirection direction = ShiftDirection::kForward);

/// Extended pencil of ℳ_ξ scaled by (1 − ξ), which stays bounded as ξ → 1.
ExtendedPencil xi_pencil(const StateSpaceModel& model, double xi);

struct UnitCircleZeros {
  bool has_zeros = false;
  std::vector<double> omegas;  // arguments of the pencil eigenvalues on the circle
  bool stable = false;         // ρ(A_ξ) < 1 − circle_tol
  double spectral_radius = 0.0;
};

/// Unit-circle eigenvalues of the shifted pencil within circle_tol.
UnitCircleZeros has_unit_circle_zeros(const ShiftedModel& sm,
                                      const Tolerances& tol = {});

/// ρ(A_ξ) < 1 and Φ_ξ ≻ 0 on the whole unit circle. Near-circle pencil
/// eigenvalues are confirmed by evaluating Φ_ξ at their argument, which keeps
/// the test reliable when two zeros are about to meet on the circle.
bool is_strictly_passive_shift(const StateSpaceModel& model, double xi,
                               const Tolerances& tol = {});
bool is_strictly_passive(const StateSpaceModel& model,
                         const Tolerances& tol = {});

/// ξ*(X) = λ_min(D_s W̃(I, ℳ_T) D_s) with X = T^H T. Zero for boundary X.
double xi_star(const StateSpaceModel& model, const HermitianMatrix& x,
               const Tolerances& tol = {});

/// Largest ξ ∈ [0, 1] with W̃(X,ℳ) − ξ·diag(X, X, 2I) ⪰ 0, by bisection.
double xi_star_bisection(const StateSpaceModel& model, const HermitianMatrix& x,
                         const Tolerances& tol = {});

enum class XiMethod { kBisection, kEigenvalueBased };
const char* ToString(XiMethod method);

struct XiResult {
  double xi_lo = 0.0;
  double xi_hi = 0.0;
  int iterations = 0;
  XiMethod method = XiMethod::kBisection;
  std::vector<double> witness_frequencies;
  bool strictly_passive = false;
};

/// Bisection on [0, 1 − ρ(A)] for the first ξ at which ℳ_ξ stops being
/// strictly passive. Returns [0, 0] when ℳ is not strictly passive.
XiResult xi_sup_bisection(const StateSpaceModel& model, double tau,
                          const Tolerances& tol = {});

/// Γ(ξ, ω) = [[0, G, B], [G^H, 0, C^H], [B^H, C, D^H + D − 2ξI]] with
/// G = e^{iω}(ξ − 1)I + A.
HermitianMatrix gamma_xi_omega_matrix(const StateSpaceModel& model, double xi,
                                      double omega);
double gamma_xi_omega(const StateSpaceModel& model, double xi, double omega);

/// λ_{n+1}(Γ(ξ, ω)), positive exactly when Φ_ξ(e^{iω}) ≻ 0 (for ξ < 1 − ρ(A)).
double gamma_positivity(const StateSpaceModel& model, double xi, double omega);

/// Real ξ ∈ [0, 1) with det Γ(ξ, ω) = 0, ascending.
std::vector<double> xi_roots_at_omega(const StateSpaceModel& model,
                                      double omega);

/// Level-set iteration: probe ξ̂ = Ξ_up − τ, locate the frequencies where
/// Φ_ξ̂ loses definiteness and lower Ξ_up to the smallest ξ-root at the
/// midpoint of the widest such frequency interval.
XiResult xi_sup_eigenvalue(const StateSpaceModel& model, double tau,
                           const Tolerances& tol = {}, int max_iterations = 100);

/// Stabilizing Riccati solution of ℳ_{Ξ_lo}, a certificate of ℳ with
/// ξ*(X) ≈ Ξ_lo.
RiccatiResult xi_certificate(const StateSpaceModel& model,
                             const XiResult& result, const Tolerances& tol = {});

}  // namespace passivity
