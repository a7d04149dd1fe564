#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "passivity/errors.h"

namespace passivity {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module. All must be strictly positive.
struct Tolerances {
  double rank_tol = 1e-10;    // relative to the largest singular value
  double psd_tol = 1e-10;     // relative to the matrix norm
  double eig_tol = 1e-12;
  double circle_tol = 1e-8;   // dead-band around |z| = 1
  double golden_tol = 1e-10;  // bracket length for golden-section search
  double bisect_tau = 1e-8;   // final bracket width of the Ξ bisections

  void Validate() const;
};

/// Dense Hermitian matrix. The stored value is exactly Hermitian: the input is
/// replaced by (H + H^H)/2 on construction. Non-finite entries are rejected.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& h);

  static HermitianMatrix Identity(int order);
  static HermitianMatrix Scalar(int order, double value);

  const Matrix& matrix() const { return h_; }
  int order() const { return static_cast<int>(h_.rows()); }
  Complex operator()(int i, int j) const { return h_(i, j); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;

 private:
  Matrix h_;
};

bool AllFinite(const Matrix& m);
void RequireFinite(const Matrix& m, const char* name);

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns match `values`
};

HermitianEig hermitian_eig(const HermitianMatrix& h);
double lambda_min(const HermitianMatrix& h);
double lambda_max(const HermitianMatrix& h);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Eigenvalue sign counts with a dead-band of psd_tol·‖H‖₂.
Inertia inertia(const HermitianMatrix& h, double psd_tol);

struct Svd {
  Matrix U;
  RealVector sigma;  // descending, nonnegative
  Matrix V;
};

/// Full SVD, M = U·diag(σ)·V^H with square unitary U and V.
Svd svd(const Matrix& m);
double norm2(const Matrix& m);
int numerical_rank(const Matrix& m, double rank_tol);

/// Upper-triangular T with positive diagonal such that H = T^H T.
/// Throws kDefiniteness (carrying λ_min) if λ_min(H) ≤ psd_tol·‖H‖.
Matrix cholesky(const HermitianMatrix& h, const Tolerances& tol);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  double bracket = 0.0;  // final bracket length
  int evaluations = 0;
};

/// Golden-section search for the minimizer of a unimodal f on [a, b].
GoldenResult golden_section_min(const std::function<double(double)>& f,
                                double a, double b, double tol);

/// Generalized eigenvalues of the pair (A, B), i.e. det(A − λB) = 0, as
/// homogeneous (α, β) pairs. λ = α/β; β = 0 marks an infinite eigenvalue.
struct GeneralizedEigenvalues {
  Vector alpha;
  Vector beta;

  int size() const { return static_cast<int>(alpha.size()); }
  bool IsInfinite(int i, double rel_tol) const;
  Complex Value(int i) const;  // infinity for β = 0
};

GeneralizedEigenvalues generalized_eig(const Matrix& a, const Matrix& b);

/// Ordered QZ decomposition of (A, B): the eigenvalues accepted by `select`
/// are moved to the leading block and the corresponding right deflating
/// subspace basis (orthonormal columns) is returned.
struct DeflatingSubspace {
  Matrix basis;
  GeneralizedEigenvalues eigenvalues;  // full spectrum (unordered)
  int selected = 0;
};

DeflatingSubspace ordered_deflating_subspace(
    const Matrix& a, const Matrix& b,
    const std::function<bool(Complex alpha, Complex beta)>& select);

/// Eigenvalues of a general square matrix.
Vector eigenvalues(const Matrix& a);
double spectral_radius(const Matrix& a);

}  // namespace passivity
