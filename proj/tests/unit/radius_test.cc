#include "passivity/radius.h"

#include <gtest/gtest.h>

#include "passivity/kyp.h"

namespace passivity {
namespace {

TEST(Radius, ZeroModelHasUnitRadius) {
  StateSpaceModel m;
  m.A = Matrix::Zero(1, 1);
  m.B = Matrix::Zero(1, 1);
  m.C = Matrix::Zero(1, 1);
  m.D = Matrix::Identity(1, 1);
  const RadiusReport r = x_passivity_radius(m, HermitianMatrix::Identity(1));
  EXPECT_NEAR(r.rho, 1.0, 1e-8);
  EXPECT_NEAR(norm2(r.delta.Assembled()), 1.0, 1e-8);
}

TEST(Radius, PerturbationReachesBoundary) {
  const StateSpaceModel m = StateSpaceModel::Scalar(0.5, 1, 1, 1);
  const HermitianMatrix x = HermitianMatrix::Identity(1);
  const RadiusReport r = x_passivity_radius(m, x);
  EXPECT_NEAR(norm2(r.delta.Assembled()), r.rho, 1e-8);
  EXPECT_LE(r.lower_bound, r.rho + 1e-9);
  EXPECT_LE(r.rho, r.upper_bound + 1e-9);
  EXPECT_LE(r.scaled_eig_bound, r.rho + 1e-9);
  EXPECT_NEAR(lambda_min(build_What(x, r.delta.ApplyTo(m))), 0.0, 1e-8);
}

TEST(Radius, RequiresInteriorCertificate) {
  EXPECT_THROW(x_passivity_radius(StateSpaceModel::Scalar(0.5, 1, 1, 1),
                                  HermitianMatrix::Scalar(1, 0.5)),
               PassivityError);
}

TEST(Radius, DualCertificateIsUnitaryAndMapsVectors) {
  Vector u(2), v(2);
  u << Complex(0.6, 0), Complex(0, 0.8);
  v << Complex(0, 1), Complex(0, 0);
  const Matrix q = dual_certificate(u, v);
  EXPECT_LT((q.adjoint() * q - Matrix::Identity(2, 2)).norm(), 1e-12);
  // Q v is parallel to u.
  const Complex c = u.dot(q * v);
  EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
}

TEST(Radius, GammaObjectiveIsSquaredNorm) {
  Matrix f1 = Matrix::Identity(2, 2);
  Matrix f2 = Matrix::Identity(2, 2) * 2.0;
  EXPECT_NEAR(gamma_objective(f1, f2, 1.0), 5.0, 1e-12);
}

}  // namespace
}  // namespace passivity
