#pragma once

#include "passivity/kernels.h"
#include "passivity/kyp.h"
#include "passivity/normalization.h"
#include "passivity/system_model.h"

namespace passivity {

/// Δ_S = [[ΔA, ΔB], [ΔC, ΔD]].
struct Perturbation {
  Matrix deltaA;
  Matrix deltaB;
  Matrix deltaC;
  Matrix deltaD;

  Matrix Assembled() const;
  static Perturbation FromSystem(const Matrix& delta, int n, int m);
  StateSpaceModel ApplyTo(const StateSpaceModel& model) const;
};

struct GammaSearch {
  Matrix F1;  // R^{-H} E₁
  Matrix F2;  // R^{-H} E₂
  double alpha = 0.0;  // ‖F₁‖₂
  double beta = 0.0;   // ‖F₂‖₂
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  double gamma_gm = 0.0;
  double gamma_star = 0.0;
  double lambda_max_star = 0.0;  // g(γ*) = σ²_max[γ*F₁, F₂/γ*]
  int evaluations = 0;
};

/// g(γ) = λ_max(γ² F₁F₁^H + γ^{-2} F₂F₂^H).
double gamma_objective(const Matrix& f1, const Matrix& f2, double gamma);

struct GammaMinimum {
  GammaSearch search;
  Vector u;  // unit, length n+m
  Vector v;  // unit, length n+m
  Vector w;  // unit left singular vector, [γF₁, F₂/γ] z = σ w
};

/// Golden-section minimization of g on [√(β/2α), √(2β/α)] followed by an
/// eigenvector z = (u, v) of M(γ*) with ‖u‖ = ‖v‖.
GammaMinimum minimize_gamma(const Matrix& f1, const Matrix& f2,
                            const Tolerances& tol = {});

struct RadiusReport {
  double rho = 0.0;  // 1/λ_max*
  Perturbation delta;
  double lower_bound = 0.0;   // 1/(2αβ)
  double upper_bound = 0.0;   // 1/((1+|v̂^H û|)αβ)
  double scaled_eig_bound = 0.0;  // λ_min(D_s Ŵ D_s)
  double lambda_min_What = 0.0;
  double estimate = 0.0;      // squared norm from gamma_mean_estimate; 1/estimate approximates rho
  GammaMinimum gamma;
  // Dominant singular pairs F₁ u₁ = α û, F₂ v₁ = β v̂.
  Vector sv_u;
  Vector sv_uhat;
  Vector sv_v;
  Vector sv_vhat;
};

/// X-passivity radius: the norm of the smallest Δ_S for which Ŵ(X, ℳ+Δ)
/// becomes singular. Requires an Interior certificate.
RadiusReport x_passivity_radius(const StateSpaceModel& model,
                                const HermitianMatrix& x,
                                const Tolerances& tol = {});

/// M(Q) = F₁ Q F₂^H + F₂ Q^H F₁^H.
Matrix dual_matrix(const Matrix& f1, const Matrix& f2, const Matrix& q);

/// Unitary Q with Q v = u (hence Q^H u = v); Householder reflector times a
/// phase. Unit u and v required.
Matrix dual_certificate(const Vector& u, const Vector& v,
                        double tol = 1e-8);

/// ‖[γ N₁, N₂/γ]‖₂² at γ = √(‖N₂‖/‖N₁‖), with N_i from the Cholesky factor of
/// Ŵ(I, ℳ_T).
double gamma_mean_estimate(const NormalizedRealization& mt,
                           const Tolerances& tol = {});

}  // namespace passivity
