#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qlab/operators.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/variations.hpp"

using namespace qlab;
using qlab::testing::sup_diff;

namespace {

const qlab::testing::TorusCase kSmall{3, 12, 0.05, 2, 24};

SymTensor2Field conformal_direction(const ScalarField& phi) {
  return SymTensor2Field::diagonal(phi, Variance::lower);
}

}  // namespace

TEST(Gamma, FlatConformalDirection) {
  // At a flat metric gamma(phi g) = D^2 phi / 2 in every dimension.
  for (int n : {3, 4, 5}) {
    const Grid g(n, 8);
    const Background bg(MetricField::flat(g));
    const ScalarField phi = random_scalar(g, {2, 1.0, 1});
    EXPECT_LE(sup_diff(gamma(bg, conformal_direction(phi)), 0.5 * bilaplacian(bg.geometry(), phi)),
              1e-11)
        << n;
  }
}

TEST(Gamma, FlatScalarCurvatureVariation) {
  const Grid g(4, 8);
  const Background bg(MetricField::flat(g));
  const ScalarField phi = random_scalar(g, {2, 1.0, 2});
  const ScalarLinearization lin = linearize_scalar(bg, conformal_direction(phi));
  EXPECT_LE(sup_diff(lin.scalar, -3.0 * laplacian(bg.geometry(), phi)), 1e-12);
}

TEST(Gamma, KillsLieDerivativesAtFlatMetric) {
  const Grid g(3, 12);
  const Background bg(MetricField::flat(g));
  const VectorField X = random_vector(g, {2, 1.0, 3});
  EXPECT_LE(gamma(bg, lie_derivative_metric(bg.geometry(), X)).max_abs(), 1e-11);
}

TEST(Gamma, AdjointOnSmallGrid) {
  const Background bg(qlab::testing::perturbed_metric(kSmall.nominal(), 0));
  const AdjointCheck a = adjoint_check(bg, qlab::testing::test_function(kSmall.nominal(), 0),
                                       qlab::testing::test_direction(kSmall.nominal(), 0));
  EXPECT_LE(a.relative, 1e-8);
  EXPECT_GT(a.scale, 0.0);
}

TEST(Gamma, TraceOfAdjoint) {
  const Background bg(qlab::testing::perturbed_metric(kSmall, 1));
  const TraceIdentity t = trace_gamma_star(bg, qlab::testing::test_function(kSmall, 1));
  EXPECT_LE(t.residual, 1e-7 * std::max(1.0, t.scale));
}

TEST(FiniteDifferences, ScalarCurvatureIsSecondOrder) {
  const Background bg(qlab::testing::perturbed_metric(kSmall, 2));
  const FdConvergence c = fd_check_scalar(bg, qlab::testing::test_direction(kSmall, 2));
  EXPECT_NEAR(c.order, 2.0, 0.1);
  EXPECT_LT(c.err_fine, c.err_coarse);
}

TEST(FiniteDifferences, ConvergenceRecord) {
  const FdConvergence c = make_convergence(1e-2, 4e-4, 1e-3, 4e-6);
  EXPECT_NEAR(c.order, 2.0, 1e-12);
}

TEST(SecondVariation, MatchesSecondDifference) {
  const qlab::testing::TorusCase c{3, 8, 0.05, 1, 16};
  const Background bg(qlab::testing::perturbed_metric(c, 3));
  const FdConvergence fd = fd_check_second_variation(bg, qlab::testing::test_direction(c, 3));
  EXPECT_NEAR(fd.order, 2.0, 0.2);
}

TEST(QuadraticForm, ConformalSineExample) {
  // h = sin(x_0) g on T^3: D^2 tr h = 9 sin^2 integrated, traceless part zero.
  const Grid g(3, 12);
  const MetricField flat = MetricField::flat(g);
  const ScalarField s = ScalarField::sample(g, [](std::span<const double> x) { return std::sin(x[0]); });
  const double alpha = constants(3).alpha_d;
  const double want = -2.0 * alpha * 9.0 * std::pow(2.0 * std::numbers::pi, 3) / 2.0;
  EXPECT_NEAR(quadratic_form_flat(flat, conformal_direction(s), -1.0), want, 1e-9 * std::abs(want));
}

TEST(QuadraticForm, RequiresDivergenceFreeDirection) {
  const Grid g(3, 12);
  const ScalarField s = ScalarField::sample(g, [](std::span<const double> x) { return std::sin(x[0]); });
  EXPECT_THROW(quadratic_form_flat(MetricField::flat(g), conformal_direction(s)), std::invalid_argument);
}

TEST(QuadraticForm, RequiresConstantMetric) {
  const MetricField m = random_perturbed_metric(Grid(3, 8), {2, 0.05, 4});
  EXPECT_THROW(quadratic_form_flat(m, random_sym2(m.grid(), {1, 1.0, 5}), -1.0), std::invalid_argument);
}

TEST(QuadraticForm, TransverseTracelessExample) {
  // h_01 = cos(x_2) is transverse and traceless: B/2 int |D h|^2 = B/2 (2 pi)^3.
  const Grid g(3, 12);
  SymTensor2Field h(g, Variance::lower);
  const ScalarField c = ScalarField::sample(g, [](std::span<const double> x) { return std::cos(x[2]); });
  std::copy(c.values().begin(), c.values().end(), h.component(sym_index(3, 0, 1)).begin());
  const double want = 0.5 * constants(3).B_d * std::pow(2.0 * std::numbers::pi, 3);
  EXPECT_NEAR(quadratic_form_flat(MetricField::flat(g), h), want, 1e-9 * std::abs(want));
}

TEST(Functional, VanishesAtFlatMetricAndIsLinearInF) {
  const Grid g(3, 12);
  const MetricField flat = MetricField::flat(g);
  const ScalarField f = random_scalar(g, {2, 1.0, 6});
  EXPECT_EQ(functional_F(flat, f, flat.volume_density()), 0.0);

  const MetricField m = qlab::testing::perturbed_metric(kSmall.nominal(), 7);
  const ScalarField& dv = flat.volume_density();
  const double a = functional_F(m, f, dv);
  const double b = functional_F(m, 2.0 * f, dv);
  EXPECT_NEAR(b, 2.0 * a, 1e-12 * std::max(1.0, std::abs(a)));
}

TEST(Functional, FirstVariationVanishesAtFlatMetric) {
  // Q vanishes to first order at a flat metric along divergence-free h.
  const Grid g(3, 12);
  const MetricField flat = MetricField::flat(g);
  SymTensor2Field h(g, Variance::lower);
  const ScalarField c = ScalarField::sample(g, [](std::span<const double> x) { return std::cos(x[2]); });
  std::copy(c.values().begin(), c.values().end(), h.component(sym_index(3, 0, 1)).begin());
  const ScalarField one(g, 1.0);
  const double t = 1e-3;
  SymTensor2Field plus = flat.lower(), minus = flat.lower();
  plus.add_scaled(t, h);
  minus.add_scaled(-t, h);
  const double d = (functional_F(MetricField(plus), one, flat.volume_density()) -
                    functional_F(MetricField(minus), one, flat.volume_density())) /
                   (2.0 * t);
  EXPECT_LE(std::abs(d), 1e-9);
}
