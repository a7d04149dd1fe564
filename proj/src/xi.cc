#include "passivity/xi.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "passivity/normalization.h"

namespace passivity {

namespace {

// Pencil eigenvalues nearer than this to the circle are checked against Φ_ξ.
constexpr double kNearCircle = 1e-4;
// Band used by the level-set iteration to collect crossing frequencies.
constexpr double kCrossingBand = 1e-6;
constexpr double kImagRootTol = 1e-8;

// Finite eigenvalues of lhs v = λ rhs v; both sides are balanced first.
std::vector<Complex> FiniteEigenvalues(const ExtendedPencil& p) {
  const double ls = std::max(p.lhs.norm(), 1e-300);
  const double rs = std::max(p.rhs.norm(), 1e-300);
  const GeneralizedEigenvalues ev = generalized_eig(p.lhs / ls, p.rhs / rs);
  std::vector<Complex> out;
  const double eps = 1e-13;
  for (int i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev.alpha(i));
    const double b = std::abs(ev.beta(i));
    if (a <= eps && b <= eps) {
      throw PassivityError(ErrorCode::kPencil,
                           "pencil is numerically singular");
    }
    if (b <= eps * a) continue;
    out.push_back(ev.alpha(i) / ev.beta(i) * (ls / rs));
  }
  return out;
}

double StableBound(const StateSpaceModel& model) {
  return 1.0 - spectral_radius(model.A);
}

// Φ_ξ(e^{iω}) ≻ 0 at psd_tol, through the inertia of Γ.
bool PhiPositive(const StateSpaceModel& model, double xi, double omega,
                 const Tolerances& tol) {
  const HermitianMatrix g = gamma_xi_omega_matrix(model, xi, omega);
  const RealVector values = hermitian_eig(g).values;
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  return values(model.n()) > tol.psd_tol * scale;
}

}  // namespace

ShiftedModel shift_model(const StateSpaceModel& model, double xi,
                         ShiftDirection direction) {
  model.Validate();
  if (!std::isfinite(xi)) {
    throw PassivityError(ErrorCode::kInput, "xi must be finite");
  }
  ShiftedModel sm;
  sm.base = model;
  sm.xi = xi;
  sm.direction = direction;
  const int m = model.m();
  const Matrix eye = Matrix::Identity(m, m);
  if (direction == ShiftDirection::kForward) {
    if (!(xi < 1.0)) {
      throw PassivityError(ErrorCode::kDomain, "forward shift needs xi < 1",
                           xi);
    }
    const double s = 1.0 / (1.0 - xi);
    sm.model = {s * model.A, s * model.B, s * model.C, s * (model.D - xi * eye)};
  } else {
    if (!(xi > -1.0)) {
      throw PassivityError(ErrorCode::kDomain, "backward shift needs xi > -1",
                           xi);
    }
    const double s = 1.0 / (1.0 + xi);
    sm.model = {s * model.A, s * model.B, s * model.C, s * (model.D + xi * eye)};
  }
  return sm;
}

ExtendedPencil xi_pencil(const StateSpaceModel& model, double xi) {
  model.Validate();
  const int n = model.n();
  const int m = model.m();
  ExtendedPencil p = extended_pencil(model);
  p.lhs.block(n, 0, n, n) = (xi - 1.0) * Matrix::Identity(n, n);
  p.lhs.block(2 * n, 2 * n, m, m) -= 2.0 * xi * Matrix::Identity(m, m);
  p.rhs.block(0, n, n, n) = (1.0 - xi) * Matrix::Identity(n, n);
  return p;
}

UnitCircleZeros has_unit_circle_zeros(const ShiftedModel& sm,
                                      const Tolerances& tol) {
  const ExtendedPencil p = sm.direction == ShiftDirection::kForward
                               ? xi_pencil(sm.base, sm.xi)
                               : extended_pencil(sm.model);
  UnitCircleZeros out;
  for (const Complex& z : FiniteEigenvalues(p)) {
    if (std::abs(std::abs(z) - 1.0) <= tol.circle_tol) {
      out.omegas.push_back(std::arg(z));
    }
  }
  std::sort(out.omegas.begin(), out.omegas.end());
  out.has_zeros = !out.omegas.empty();
  out.spectral_radius = spectral_radius(sm.model.A);
  out.stable = out.spectral_radius < 1.0 - tol.circle_tol;
  return out;
}

bool is_strictly_passive_shift(const StateSpaceModel& model, double xi,
                               const Tolerances& tol) {
  model.Validate();
  if (!(xi < 1.0)) return false;
  if (!(spectral_radius(model.A) / (1.0 - xi) < 1.0 - tol.circle_tol)) {
    return false;
  }
  for (const Complex& z : FiniteEigenvalues(xi_pencil(model, xi))) {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) <= tol.circle_tol) return false;
    if (std::abs(r - 1.0) <= kNearCircle &&
        !PhiPositive(model, xi, std::arg(z), tol)) {
      return false;
    }
  }
  return PhiPositive(model, xi, 0.0, tol);
}

bool is_strictly_passive(const StateSpaceModel& model, const Tolerances& tol) {
  return is_strictly_passive_shift(model, 0.0, tol);
}

double xi_star(const StateSpaceModel& model, const HermitianMatrix& x,
               const Tolerances& tol) {
  const Certificate cert = classify_certificate(x, model, tol);
  switch (cert.classification) {
    case CertificateClass::kOutside:
      throw PassivityError(ErrorCode::kDefiniteness,
                           "certificate is outside the passivity set",
                           cert.lambda_min_W);
    case CertificateClass::kBoundary:
      return 0.0;
    case CertificateClass::kInterior:
      break;
  }
  const NormalizedRealization mt = normalize(model, cert, tol);
  const HermitianMatrix wt =
      build_Wtilde(HermitianMatrix::Identity(model.n()), mt.model);
  return lambda_min(ScaleDs(wt, model.n(), model.m()));
}

double xi_star_bisection(const StateSpaceModel& model, const HermitianMatrix& x,
                         const Tolerances& tol) {
  const int n = model.n();
  const int m = model.m();
  const Matrix wt = build_Wtilde(x, model).matrix();
  Matrix weight = Matrix::Zero(2 * n + m, 2 * n + m);
  weight.topLeftCorner(n, n) = x.matrix();
  weight.block(n, n, n, n) = x.matrix();
  weight.bottomRightCorner(m, m) = 2.0 * Matrix::Identity(m, m);
  const auto feasible = [&](double xi) {
    return lambda_min(HermitianMatrix(wt - xi * weight)) >= 0.0;
  };
  if (!feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol.bisect_tau) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

const char* ToString(XiMethod method) {
  switch (method) {
    case XiMethod::kBisection: return "bisection";
    case XiMethod::kEigenvalueBased: return "eigenvalue";
  }
  return "unknown";
}

XiResult xi_sup_bisection(const StateSpaceModel& model, double tau,
                          const Tolerances& tol) {
  if (!(tau > 0.0)) {
    throw PassivityError(ErrorCode::kInput, "tau must be positive", tau);
  }
  if (!validate_minimal(model, tol).minimal()) {
    throw PassivityError(ErrorCode::kMinimality, "model is not minimal");
  }
  XiResult r;
  r.method = XiMethod::kBisection;
  r.strictly_passive = is_strictly_passive(model, tol);
  if (!r.strictly_passive) return r;
  double lo = 0.0;
  double hi = StableBound(model);
  while (hi - lo > tau) {
    const double mid = 0.5 * (lo + hi);
    (is_strictly_passive_shift(model, mid, tol) ? lo : hi) = mid;
    ++r.iterations;
  }
  r.xi_lo = lo;
  r.xi_hi = hi;
  return r;
}

HermitianMatrix gamma_xi_omega_matrix(const StateSpaceModel& model, double xi,
                                      double omega) {
  model.Validate();
  const int n = model.n();
  const int m = model.m();
  const Matrix g =
      std::polar(xi - 1.0, omega) * Matrix::Identity(n, n) + model.A;
  Matrix h = Matrix::Zero(2 * n + m, 2 * n + m);
  h.block(0, n, n, n) = g;
  h.block(0, 2 * n, n, m) = model.B;
  h.block(n, 0, n, n) = g.adjoint();
  h.block(n, 2 * n, n, m) = model.C.adjoint();
  h.block(2 * n, 0, m, n) = model.B.adjoint();
  h.block(2 * n, n, m, n) = model.C;
  h.block(2 * n, 2 * n, m, m) =
      model.D.adjoint() + model.D - 2.0 * xi * Matrix::Identity(m, m);
  return HermitianMatrix(h);
}

double gamma_xi_omega(const StateSpaceModel& model, double xi, double omega) {
  return lambda_min(gamma_xi_omega_matrix(model, xi, omega));
}

double gamma_positivity(const StateSpaceModel& model, double xi,
                        double omega) {
  return hermitian_eig(gamma_xi_omega_matrix(model, xi, omega))
      .values(model.n());
}

std::vector<double> xi_roots_at_omega(const StateSpaceModel& model,
                                      double omega) {
  const int n = model.n();
  const int m = model.m();
  const Matrix gamma0 = gamma_xi_omega_matrix(model, 0.0, omega).matrix();
  // Γ(ξ) = Γ₀ + ξK.
  Matrix k = Matrix::Zero(2 * n + m, 2 * n + m);
  k.block(0, n, n, n) = std::polar(1.0, omega) * Matrix::Identity(n, n);
  k.block(n, 0, n, n) = std::polar(1.0, -omega) * Matrix::Identity(n, n);
  k.block(2 * n, 2 * n, m, m) = -2.0 * Matrix::Identity(m, m);
  const Matrix op = -Eigen::PartialPivLU<Matrix>(k).solve(gamma0);
  std::vector<double> roots;
  for (const Complex& z : eigenvalues(op)) {
    if (std::abs(z.imag()) > kImagRootTol * std::max(1.0, std::abs(z))) {
      continue;
    }
    if (z.real() >= 0.0 && z.real() < 1.0) roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

XiResult xi_sup_eigenvalue(const StateSpaceModel& model, double tau,
                           const Tolerances& tol, int max_iterations) {
  if (!(tau > 0.0)) {
    throw PassivityError(ErrorCode::kInput, "tau must be positive", tau);
  }
  if (!validate_minimal(model, tol).minimal()) {
    throw PassivityError(ErrorCode::kMinimality, "model is not minimal");
  }
  XiResult r;
  r.method = XiMethod::kEigenvalueBased;
  r.strictly_passive = is_strictly_passive(model, tol);
  if (!r.strictly_passive) return r;
  const double two_pi = 2.0 * std::numbers::pi;
  double up = StableBound(model);
  while (r.iterations < max_iterations) {
    ++r.iterations;
    const double probe = up - tau;
    if (probe <= 0.0) {
      r.xi_lo = 0.0;
      r.xi_hi = up;
      return r;
    }
    // Crossing frequencies of Φ_ξ̂: unit-circle pencil eigenvalues at which
    // Γ(ξ̂, ω) is singular in its (n+1)-th eigenvalue.
    std::vector<double> omegas;
    for (const Complex& z : FiniteEigenvalues(xi_pencil(model, probe))) {
      if (std::abs(std::abs(z) - 1.0) > kCrossingBand) continue;
      const double omega = std::arg(z);
      const HermitianMatrix g = gamma_xi_omega_matrix(model, probe, omega);
      const RealVector values = hermitian_eig(g).values;
      const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
      if (std::abs(values(model.n())) <= 10.0 * tol.psd_tol * scale) {
        omegas.push_back(omega);
      }
    }
    std::sort(omegas.begin(), omegas.end());
    r.witness_frequencies = omegas;

    std::optional<double> omega_hat;
    if (omegas.empty()) {
      if (is_strictly_passive_shift(model, probe, tol)) {
        r.xi_lo = probe;
        r.xi_hi = up;
        return r;
      }
      omega_hat = 0.0;
    } else {
      // Widest interval between consecutive crossings (cyclically) on which
      // Φ_ξ̂ is not positive definite.
      double widest = -1.0;
      const std::size_t count = omegas.size();
      for (std::size_t i = 0; i < count; ++i) {
        const double a = omegas[i];
        const double b = i + 1 < count ? omegas[i + 1] : omegas[0] + two_pi;
        const double mid = 0.5 * (a + b);
        if (b - a > widest && !PhiPositive(model, probe, mid, tol)) {
          widest = b - a;
          omega_hat = mid;
        }
      }
      // Only tangential contacts: the probe sits on Ξ itself.
      if (!omega_hat) omega_hat = omegas.front();
    }
    const std::vector<double> roots = xi_roots_at_omega(model, *omega_hat);
    double next = probe;
    if (!roots.empty()) next = std::min(next, roots.front());
    up = std::min(up, next);
  }
  throw PassivityError(ErrorCode::kConvergence,
                       "eigenvalue-based Xi iteration did not converge",
                       up);
}

RiccatiResult xi_certificate(const StateSpaceModel& model,
                             const XiResult& result, const Tolerances& tol) {
  return stabilizing_solution(shift_model(model, result.xi_lo).model, tol);
}

}  // namespace passivity
