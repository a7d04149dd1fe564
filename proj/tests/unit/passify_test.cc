#include "passivity/passify.h"

#include <cmath>

#include <gtest/gtest.h>

#include "passivity/kyp.h"

namespace passivity {
namespace {

const StateSpaceModel kMnp = StateSpaceModel::Scalar(0.5, 1, 1, -0.2);

TEST(Passify, ConstrainedFamilyBracketsXi) {
  const double tau = 1e-8;
  const ConstrainedDistance c = constrained_distance(kMnp, tau);
  EXPECT_TRUE(shifted_back_passive(kMnp, c.xi_big));
  EXPECT_FALSE(shifted_back_passive(kMnp, c.xi_fail));
  EXPECT_LE(c.xi_big - c.xi_fail, tau * 1.0001);
}

TEST(Passify, ShiftPerturbationReproducesShiftedModel) {
  const Perturbation d = shift_perturbation(kMnp, 0.5);
  const StateSpaceModel p = d.ApplyTo(kMnp);
  EXPECT_NEAR(p.A(0, 0).real(), 0.5 / 1.5, 1e-15);
  EXPECT_NEAR(p.D(0, 0).real(), 0.3 / 1.5, 1e-15);
}

TEST(Passify, RefineNeverIncreasesNorm) {
  for (PerturbationNorm norm : {PerturbationNorm::kTwo, PerturbationNorm::kFrobenius}) {
    RefineOptions opt;
    opt.norm = norm;
    const DistanceReport r = distance_to_passivity(kMnp, 1e-8, opt);
    const double constrained = norm == PerturbationNorm::kTwo
                                   ? r.constrained_sigma2
                                   : r.constrained_sigma_frob;
    const double got = norm == PerturbationNorm::kTwo ? r.sigma2 : r.sigma_frob;
    EXPECT_LE(got, constrained + 1e-12);
    const Perturbation& d = r.delta_refined ? *r.delta_refined : r.delta_constrained;
    EXPECT_GE(lambda_min(build_W(r.X_cert.X, d.ApplyTo(kMnp))),
              -1e-6 * norm2(build_W(r.X_cert.X, d.ApplyTo(kMnp)).matrix()));
  }
}

TEST(Passify, FrobeniusRefineImprovesOnShift) {
  // The fixed-certificate optimum is about 0.66244; the shift gives 0.76544.
  RefineOptions opt;
  opt.norm = PerturbationNorm::kFrobenius;
  const DistanceReport r = distance_to_passivity(kMnp, 1e-8, opt);
  EXPECT_LT(r.sigma_frob, 0.67);
  EXPECT_GT(r.sigma_frob, 0.6624);
}

TEST(Passify, StabilityDistance) {
  Matrix a = Matrix::Identity(2, 2) * 1.25;
  const StabilityDistance s = distance_to_stability(a);
  EXPECT_NEAR(s.xi, 0.25, 1e-14);
  EXPECT_NEAR(s.relative_error_2, 0.2, 1e-14);
  EXPECT_EQ(distance_to_stability(Matrix::Identity(2, 2) * 0.5).xi, 0.0);
}

}  // namespace
}  // namespace passivity
