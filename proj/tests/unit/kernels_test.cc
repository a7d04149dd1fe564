#include "passivity/kernels.h"

#include <cmath>

#include <gtest/gtest.h>

namespace passivity {
namespace {

TEST(Tolerances, RejectNonPositive) {
  Tolerances t;
  t.psd_tol = 0.0;
  EXPECT_THROW(t.Validate(), PassivityError);
  t.psd_tol = NAN;
  EXPECT_THROW(t.Validate(), PassivityError);
  EXPECT_NO_THROW(Tolerances{}.Validate());
}

TEST(HermitianMatrix, Symmetrizes) {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(2, 1), Complex(0, 0), Complex(3, 0);
  const HermitianMatrix h(m);
  EXPECT_NEAR(std::abs(h.matrix()(0, 1) - std::conj(h.matrix()(1, 0))), 0.0, 1e-15);
}

TEST(HermitianMatrix, RejectsNonSquare) {
  EXPECT_THROW(HermitianMatrix(Matrix::Zero(2, 3)), PassivityError);
}

TEST(Kernels, InertiaCountsSigns) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  const Inertia in = inertia(HermitianMatrix(m), 1e-10);
  EXPECT_EQ(in.positive, 1);
  EXPECT_EQ(in.negative, 1);
  EXPECT_EQ(in.zero, 1);
}

TEST(Kernels, CholeskyUpperWithPositiveDiagonal) {
  Matrix m(2, 2);
  m << Complex(4, 0), Complex(2, 2), Complex(2, -2), Complex(5, 0);
  const HermitianMatrix h(m);
  const Matrix t = cholesky(h, {});
  EXPECT_LT((t.adjoint() * t - m).norm(), 1e-12);
  EXPECT_EQ(t(1, 0), Complex(0, 0));
  EXPECT_GT(t(0, 0).real(), 0.0);
  EXPECT_EQ(t(1, 1).imag(), 0.0);
}

TEST(Kernels, CholeskyRejectsIndefinite) {
  EXPECT_THROW(cholesky(HermitianMatrix::Scalar(2, -1.0), {}), PassivityError);
}

TEST(Kernels, NormAndRank) {
  Matrix m = Matrix::Zero(3, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 4.0;
  EXPECT_NEAR(norm2(m), 4.0, 1e-14);
  EXPECT_EQ(numerical_rank(m, 1e-10), 2);
  EXPECT_EQ(numerical_rank(Matrix::Zero(2, 2), 1e-10), 0);
}

TEST(Kernels, GoldenSectionFindsQuadraticMinimum) {
  const GoldenResult r = golden_section_min(
      [](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10);
  EXPECT_NEAR(r.x, 0.3, 1e-9);
  EXPECT_LE(r.bracket, 1e-10);
}

TEST(Kernels, GeneralizedEigenvalues) {
  Matrix a = Matrix::Zero(2, 2);
  Matrix b = Matrix::Identity(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 0.5;
  const GeneralizedEigenvalues ev = generalized_eig(a, b);
  std::vector<double> values{ev.Value(0).real(), ev.Value(1).real()};
  std::sort(values.begin(), values.end());
  EXPECT_NEAR(values[0], 0.5, 1e-14);
  EXPECT_NEAR(values[1], 2.0, 1e-14);
}

TEST(Kernels, OrderedSubspaceSelectsInsideDisc) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 0.5;
  a(2, 2) = 3.0;
  a(0, 1) = 1.0;
  const DeflatingSubspace sub = ordered_deflating_subspace(
      a, Matrix::Identity(3, 3),
      [](Complex al, Complex be) { return std::abs(al) < std::abs(be); });
  ASSERT_EQ(sub.selected, 1);
  const Vector v = sub.basis.col(0);
  EXPECT_LT((a * v - 0.5 * v).norm(), 1e-12);
}

TEST(Kernels, SpectralRadius) {
  Matrix a(2, 2);
  a << Complex(0, 0), Complex(1, 0), Complex(-0.25, 0), Complex(0, 0);
  EXPECT_NEAR(spectral_radius(a), 0.5, 1e-14);
}

}  // namespace
}  // namespace passivity
