#pragma once

#include <optional>

#include "passivity/kernels.h"
#include "passivity/system_model.h"

namespace passivity {

enum class RiccatiBranch { kStabilizing, kAntistabilizing };

struct RiccatiResult {
  HermitianMatrix X;
  // Absent when D^H + D − B^H X B is singular (the Riccati form degenerates).
  std::optional<Matrix> F;
  std::optional<Matrix> A_F;
  std::optional<double> residual_norm;
  RiccatiBranch branch = RiccatiBranch::kStabilizing;
};

/// Pencil zL − K whose finite eigenvalues are the zeros of Φ(z).
///
/// When D^H + D is invertible this is the 2n-square pencil behind the
/// symplectic matrix S = L^{-1} K (S itself is only formed when L is
/// invertible). Otherwise `extended` is set and (L, K) is the (2n+m)-square
/// system pencil, which carries m additional infinite eigenvalues.
struct SymplecticPencil {
  Matrix L;
  Matrix K;
  std::optional<Matrix> S;
  bool extended = false;
};

SymplecticPencil build_symplectic(const StateSpaceModel& model,
                                  const Tolerances& tol = {});

/// Eigenvalues of K v = λ L v.
GeneralizedEigenvalues pencil_eigenvalues(const SymplecticPencil& pencil);

/// The (2n+m)-square pair (Lhs, Rhs) with Lhs v = λ Rhs v whose finite
/// eigenvalues are the zeros of Φ(z); the Riccati subspace [−X; I; −F] is a
/// deflating subspace with Lhs·U = Rhs·U·A_F.
struct ExtendedPencil {
  Matrix lhs;
  Matrix rhs;
};

ExtendedPencil extended_pencil(const StateSpaceModel& model);

/// Stabilizing solution X₋: deflating subspace of the extended pencil for the
/// eigenvalues strictly inside the unit disc.
RiccatiResult stabilizing_solution(const StateSpaceModel& model,
                                   const Tolerances& tol = {});

struct ExtremalSolutions {
  RiccatiResult minus;
  RiccatiResult plus;
};

/// X₋ and X₊ bounding every certificate, 0 < X₋ ⪯ X ⪯ X₊. X₊ is obtained as
/// the inverse of the stabilizing solution of the dual model
/// {A^H, C^H, B^H, D^H}, whose certificate set is {X^{-1}}.
ExtremalSolutions extremal_solutions(const StateSpaceModel& model,
                                     const Tolerances& tol = {});

/// Ricc(X) = X − A^H X A − (C^H − A^H X B)(D^H+D−B^H X B)^{-1}(C − B^H X A).
HermitianMatrix riccati_residual(const HermitianMatrix& x,
                                 const StateSpaceModel& model,
                                 const Tolerances& tol = {});

struct ClosedLoop {
  Matrix F;
  Matrix A_F;
};

/// F = (D^H+D−B^H X B)^{-1}(C − B^H X A), A_F = A − B F.
ClosedLoop closed_loop(const HermitianMatrix& x, const StateSpaceModel& model,
                       const Tolerances& tol = {});

}  // namespace passivity
