#include "passivity/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace passivity {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInput: return "input";
    case ErrorCode::kDefiniteness: return "definiteness";
    case ErrorCode::kSingularResolvent: return "singular_resolvent";
    case ErrorCode::kSchurDegenerate: return "schur_degenerate";
    case ErrorCode::kSpectralSplitting: return "spectral_splitting";
    case ErrorCode::kConditioning: return "conditioning";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kDegenerateFrame: return "degenerate_frame";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kMinimality: return "minimality";
    case ErrorCode::kPencil: return "pencil";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

void Tolerances::Validate() const {
  for (double t : {rank_tol, psd_tol, eig_tol, circle_tol, golden_tol,
                   bisect_tau}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw PassivityError(ErrorCode::kInput,
                           "tolerances must be finite and strictly positive");
    }
  }
}

bool AllFinite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void RequireFinite(const Matrix& m, const char* name) {
  if (!AllFinite(m)) {
    throw PassivityError(ErrorCode::kInput,
                         std::string(name) + " has non-finite entries");
  }
}

HermitianMatrix::HermitianMatrix(const Matrix& h) {
  if (h.rows() != h.cols()) {
    throw PassivityError(ErrorCode::kInput, "Hermitian matrix must be square");
  }
  RequireFinite(h, "Hermitian matrix");
  h_ = 0.5 * (h + h.adjoint());
}

HermitianMatrix HermitianMatrix::Identity(int order) {
  return HermitianMatrix(Matrix::Identity(order, order));
}

HermitianMatrix HermitianMatrix::Scalar(int order, double value) {
  return HermitianMatrix(value * Matrix::Identity(order, order));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(h_ + o.h_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(h_ - o.h_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(s * h_);
}

HermitianEig hermitian_eig(const HermitianMatrix& h) {
  if (h.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw PassivityError(ErrorCode::kConvergence,
                         "Hermitian eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_min(const HermitianMatrix& h) {
  return hermitian_eig(h).values(0);
}

double lambda_max(const HermitianMatrix& h) {
  const auto eig = hermitian_eig(h);
  return eig.values(eig.values.size() - 1);
}

Inertia inertia(const HermitianMatrix& h, double psd_tol) {
  const RealVector values = hermitian_eig(h).values;
  const double scale = values.cwiseAbs().maxCoeff();
  Inertia result;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > psd_tol * scale) {
      ++result.positive;
    } else if (values(i) < -psd_tol * scale) {
      ++result.negative;
    } else {
      ++result.zero;
    }
  }
  return result;
}

Svd svd(const Matrix& m) {
  RequireFinite(m, "svd input");
  if (m.size() == 0) {
    return {Matrix::Identity(m.rows(), m.rows()), RealVector(),
            Matrix::Identity(m.cols(), m.cols())};
  }
  Eigen::JacobiSVD<Matrix> jsvd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {jsvd.matrixU(), jsvd.singularValues(), jsvd.matrixV()};
}

double norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> jsvd(m);
  return jsvd.singularValues()(0);
}

int numerical_rank(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  const RealVector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol * s(0)) ++rank;
  }
  return rank;
}

Matrix cholesky(const HermitianMatrix& h, const Tolerances& tol) {
  const double lmin = lambda_min(h);
  const double scale = std::max(norm2(h.matrix()),
                                std::numeric_limits<double>::min());
  if (!(lmin > tol.psd_tol * scale)) {
    throw PassivityError(ErrorCode::kDefiniteness,
                         "matrix is not positive definite (lambda_min = " +
                             std::to_string(lmin) + ")",
                         lmin);
  }
  Eigen::LLT<Matrix> llt(h.matrix());
  if (llt.info() != Eigen::Success) {
    throw PassivityError(ErrorCode::kDefiniteness,
                         "Cholesky factorization failed", lmin);
  }
  Matrix t = llt.matrixU();
  // Eigen's LLT already yields a real positive diagonal; enforce it exactly.
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    t(i, i) = Complex(t(i, i).real(), 0.0);
  }
  return t;
}

GoldenResult golden_section_min(const std::function<double(double)>& f,
                                double a, double b, double tol) {
  if (!(tol > 0.0)) {
    throw PassivityError(ErrorCode::kInput, "golden-section tol must be > 0");
  }
  if (!(a < b)) {
    throw PassivityError(ErrorCode::kInput, "golden-section needs a < b");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenResult r;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  r.evaluations = 2;
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++r.evaluations;
  }
  if (f1 <= f2) {
    r.x = x1;
    r.fx = f1;
  } else {
    r.x = x2;
    r.fx = f2;
  }
  r.bracket = b - a;
  return r;
}

bool GeneralizedEigenvalues::IsInfinite(int i, double rel_tol) const {
  return std::abs(beta(i)) <= rel_tol * std::abs(alpha(i));
}

Complex GeneralizedEigenvalues::Value(int i) const {
  if (beta(i) == Complex(0.0, 0.0)) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return alpha(i) / beta(i);
}

GeneralizedEigenvalues generalized_eig(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw PassivityError(ErrorCode::kInput, "pencil blocks must be square");
  }
  RequireFinite(a, "pencil");
  RequireFinite(b, "pencil");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  GeneralizedEigenvalues out;
  out.alpha.resize(n);
  out.beta.resize(n);
  if (n == 0) return out;
  Matrix aa = a;
  Matrix bb = b;
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'N', n, aa.data(), n, bb.data(), n,
      out.alpha.data(), out.beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw PassivityError(ErrorCode::kPencil,
                         "zggev failed with info " + std::to_string(info));
  }
  return out;
}

DeflatingSubspace ordered_deflating_subspace(
    const Matrix& a, const Matrix& b,
    const std::function<bool(Complex, Complex)>& select) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw PassivityError(ErrorCode::kInput, "pencil blocks must be square");
  }
  RequireFinite(a, "pencil");
  RequireFinite(b, "pencil");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Matrix s = a;
  Matrix t = b;
  Vector alpha(n), beta(n);
  Matrix q(n, n), z(n, n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_zgges(LAPACK_COL_MAJOR, 'V', 'V', 'N', nullptr, n,
                                  s.data(), n, t.data(), n, &sdim,
                                  alpha.data(), beta.data(), q.data(), n,
                                  z.data(), n);
  if (info != 0) {
    throw PassivityError(ErrorCode::kPencil,
                         "zgges failed with info " + std::to_string(info));
  }
  DeflatingSubspace out;
  out.eigenvalues.alpha = alpha;
  out.eigenvalues.beta = beta;
  std::vector<lapack_logical> chosen(n, 0);
  for (lapack_int i = 0; i < n; ++i) {
    if (select(alpha(i), beta(i))) {
      chosen[i] = 1;
      ++out.selected;
    }
  }
  // Called through the Fortran interface: the LAPACKE wrapper mishandles the
  // integer workspace for ijob = 0 on some distributions.
  const lapack_int ijob = 0;
  const lapack_logical want = 1;
  lapack_int m = 0;
  double pl = 0.0, pr = 0.0;
  double dif[2] = {0.0, 0.0};
  const lapack_int lwork = std::max<lapack_int>(1, 2 * n * n);
  const lapack_int liwork = n + 2;
  std::vector<Complex> work(lwork);
  std::vector<lapack_int> iwork(liwork);
  LAPACK_ztgsen(&ijob, &want, &want, chosen.data(), &n, s.data(), &n,
                t.data(), &n, alpha.data(), beta.data(), q.data(), &n,
                z.data(), &n, &m, &pl, &pr, dif, work.data(), &lwork,
                iwork.data(), &liwork, &info);
  if (info != 0) {
    throw PassivityError(ErrorCode::kPencil,
                         "ztgsen reordering failed with info " +
                             std::to_string(info));
  }
  out.basis = z.leftCols(out.selected);
  return out;
}

Vector eigenvalues(const Matrix& a) {
  if (a.rows() == 0) return Vector();
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw PassivityError(ErrorCode::kConvergence,
                         "eigensolver did not converge");
  }
  return es.eigenvalues();
}

double spectral_radius(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return eigenvalues(a).cwiseAbs().maxCoeff();
}

}  // namespace passivity
