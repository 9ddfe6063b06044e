#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qlab/closed_form.hpp"
#include "qlab/constants.hpp"

using namespace qlab;

TEST(Constants, FourDimensions) {
  const Constants c = constants(4);
  EXPECT_EQ(c.A, Rational(-1, 6));
  EXPECT_EQ(c.B, Rational(-1, 2));
  EXPECT_EQ(c.C, Rational(1, 6));
  EXPECT_EQ(c.Lambda, Rational(-1, 2));
  EXPECT_EQ(c.trace_identity(), 0);
}

TEST(Constants, ThreeDimensions) {
  const Constants c = constants(3);
  EXPECT_EQ(c.A, Rational(-1, 4));
  EXPECT_EQ(c.B, Rational(-2));
  EXPECT_EQ(c.C, Rational(23, 32));
  EXPECT_EQ(c.Lambda, Rational(-5, 12));
}

TEST(Constants, SweepSigns) {
  for (int n = 3; n <= 64; ++n) {
    const Constants c = constants(n);
    EXPECT_EQ(c.trace_identity(), 0) << n;
    EXPECT_LT(c.Lambda, 0) << n;
    EXPECT_GT(c.alpha, 0) << n;
    EXPECT_EQ(c.Lambda, Rational(-(n + 2) * (n - 2), 2 * n * (n - 1))) << n;
    EXPECT_DOUBLE_EQ(c.A_d, to_double(c.A));
  }
}

TEST(Constants, RejectsLowDimensions) {
  EXPECT_THROW(constants(2), std::invalid_argument);
}

TEST(ClosedForm, EinsteinQ) {
  EXPECT_EQ(einstein_q(EinsteinBackground::unit_sphere(4)), 6);
  EXPECT_EQ(einstein_q(EinsteinBackground::unit_sphere(3)), Rational(15, 8));
  EXPECT_EQ(einstein_q(EinsteinBackground::ricci_flat(5)), 0);
}

TEST(ClosedForm, BackgroundValidation) {
  EXPECT_THROW(EinsteinBackground(4, Rational(-1), Model::sphere), std::invalid_argument);
  EXPECT_THROW(EinsteinBackground(4, Rational(1), Model::ricci_flat), std::invalid_argument);
  EXPECT_THROW(EinsteinBackground(2, Rational(2), Model::sphere), std::invalid_argument);
  EXPECT_NEAR(*EinsteinBackground(3, Rational(24), Model::sphere).radius(), 0.5, 1e-15);
  EXPECT_FALSE(EinsteinBackground::unit_hyperbolic(3).radius().has_value());
}

TEST(ClosedForm, PotentialsOnlyWhereTheyExist) {
  EXPECT_THROW(ModelPotential::make(EinsteinBackground::ricci_flat(4), PotentialKind::first_eigenfunction),
               std::invalid_argument);
  EXPECT_THROW(ModelPotential::make(EinsteinBackground::unit_sphere(4), PotentialKind::coordinate_function),
               std::invalid_argument);
  const ModelPotential p = canonical_potential(EinsteinBackground::unit_sphere(5));
  EXPECT_EQ(p.kappa, -1);
  EXPECT_EQ(p.mu, -5);
}

TEST(ClosedForm, SpaceFormsAreQSingular) {
  for (int n = 3; n <= 10; ++n)
    for (const auto& bg : {EinsteinBackground::unit_sphere(n), EinsteinBackground::unit_hyperbolic(n),
                           EinsteinBackground::ricci_flat(n)}) {
      const SingularReport r = verify_q_singular(bg, canonical_potential(bg));
      EXPECT_TRUE(r.singular()) << n << " " << to_string(bg.model);
      EXPECT_EQ(r.hessian_residual, 0);
      EXPECT_EQ(r.reduced, r.gamma_star);
    }
}

TEST(ClosedForm, ConstantOnSphereIsNotSingular) {
  const auto bg = EinsteinBackground::unit_sphere(4);
  const SingularReport r = verify_q_singular(bg, ModelPotential::make(bg, PotentialKind::constant));
  EXPECT_FALSE(r.singular());
  EXPECT_EQ(r.reduced, r.gamma_star);
}

TEST(ClosedForm, SphereSpectralIdentity) {
  const SphereSpectral s4 = sphere_spectral_check(4);
  EXPECT_EQ(s4.eigenvalue, 24);
  EXPECT_EQ(s4.target, 24);
  EXPECT_EQ(s4.lambda1, 4);
  EXPECT_EQ(s4.kernel_dimension, 5);
  for (int n = 3; n <= 10; ++n) {
    EXPECT_EQ(sphere_spectral_check(n).residual, 0) << n;
    EXPECT_EQ(sphere_spectral_check(n, Rational(7)).residual, 0) << n;
  }
}

TEST(ClosedForm, VacuumStatic) {
  for (const auto& bg : {EinsteinBackground::unit_sphere(4), EinsteinBackground::ricci_flat(4)}) {
    const VacuumStatic v = verify_vacuum_static(bg, canonical_potential(bg));
    EXPECT_EQ(v.coefficient, 0);
    EXPECT_EQ(v.einstein_trace, 0);
  }
}

TEST(ClosedForm, NonsingularNegativeEinstein) {
  // Lambda_3 R = (-5/12)(-6) = 5/2.
  const Rational R(-6);
  const NonsingularCheck hits = nonsingular_negative_einstein_check(3, R, {0, Rational(5, 2), 5});
  EXPECT_EQ(hits.lambda_R, Rational(5, 2));
  EXPECT_TRUE(hits.first_exclusion);
  EXPECT_FALSE(hits.hypothesis_holds());
  EXPECT_TRUE(nonsingular_negative_einstein_check(3, R, {0, 3, 6}).hypothesis_holds());
  EXPECT_TRUE(nonsingular_negative_einstein_check(3, R, {0, 2, 5}).hypothesis_holds());
  EXPECT_THROW(nonsingular_negative_einstein_check(3, Rational(6), {0}), std::invalid_argument);
  EXPECT_THROW(nonsingular_negative_einstein_check(3, R, {-1}), std::invalid_argument);
}

TEST(ClosedForm, GaussBonnetOnS4) {
  const GaussBonnetS4 g = gauss_bonnet_s4();
  EXPECT_EQ(g.q, 6);
  EXPECT_NEAR(g.volume, 8.0 * std::numbers::pi * std::numbers::pi / 3.0, 1e-13);
  EXPECT_NEAR(g.integral, 16.0 * std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_NEAR(sphere_volume(2), 4.0 * std::numbers::pi, 1e-14);
}
