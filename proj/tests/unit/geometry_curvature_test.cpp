#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qlab/curvature.hpp"
#include "qlab/geometry.hpp"
#include "qlab/operators.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/spectral.hpp"

using namespace qlab;
using qlab::testing::sup_diff;

namespace {

ScalarField bump(const Grid& g, double amp = 0.1) {
  return ScalarField::sample(g, [amp](std::span<const double> x) { return amp * std::sin(x[0]); });
}

}  // namespace

TEST(Christoffel, FlatVanishes) {
  EXPECT_EQ(christoffel(MetricField::flat(Grid(3, 8))).max_abs(), 0.0);
}

TEST(Christoffel, ConformallyFlatFormula) {
  const Grid g(3, 16);
  const ScalarField u = bump(g);
  const Christoffel gam = christoffel(MetricField::conformally_flat(u));
  const auto du = gradient_components(u);
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          const double want = (k == i ? du[j][p] : 0.0) + (k == j ? du[i][p] : 0.0) -
                              (i == j ? du[k][p] : 0.0);
          err = std::max(err, std::abs(gam(k, i, j, p) - want));
        }
  EXPECT_LE(err, 1e-10);
}

TEST(Christoffel, ScaleInvariant) {
  const MetricField m = random_perturbed_metric(Grid(3, 12), {2, 0.05, 1});
  const MetricField scaled(4.0 * m.lower());
  EXPECT_LE(sup_diff(christoffel(m), christoffel(scaled)), 1e-13);
}

TEST(Curvature, FlatVanishes) {
  const Curvature c = curvature(Geometry(MetricField::flat(Grid(3, 8))));
  EXPECT_EQ(c.riemann.max_abs(), 0.0);
  EXPECT_EQ(c.ricci.max_abs(), 0.0);
  EXPECT_EQ(c.scalar.max_abs(), 0.0);
}

TEST(Curvature, ConformallyFlatScalarCurvature) {
  // e^{2u} delta: R = -e^{-2u} (2(n-1) lap u + (n-2)(n-1) |du|^2).
  const Grid g(3, 32);
  const ScalarField u = bump(g, 0.2);
  const Curvature c = curvature(Geometry(MetricField::conformally_flat(u)));
  ScalarField want(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = g.spacing(0) * static_cast<double>(p / g.stride(0));
    const double lap = -0.2 * std::sin(x), du = 0.2 * std::cos(x);
    want[p] = -std::exp(-2.0 * u[p]) * (4.0 * lap + 2.0 * du * du);
  }
  EXPECT_LE(sup_diff(c.scalar, want), 1e-10);
}

TEST(Curvature, RiemannSymmetries) {
  // Only the first pair is antisymmetric by construction; the rest hold up to
  // aliasing, so the metric is evaluated on a padded grid.
  const MetricField m = qlab::testing::perturbed_metric({3, 12, 0.05, 2, 24}, 2);
  const Grid& g = m.grid();
  const Riemann4 rm = riemann_tensor(Geometry(m));
  double first = 0.0, anti = 0.0, pair = 0.0, bianchi = 0.0;
  for (std::size_t p = 0; p < g.size(); p += 7)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            first = std::max(first, std::abs(rm(i, j, k, l, p) + rm(j, i, k, l, p)));
            anti = std::max(anti, std::abs(rm(i, j, k, l, p) + rm(i, j, l, k, p)));
            pair = std::max(pair, std::abs(rm(i, j, k, l, p) - rm(k, l, i, j, p)));
            bianchi = std::max(bianchi, std::abs(rm(i, j, k, l, p) + rm(j, k, i, l, p) +
                                                 rm(k, i, j, l, p)));
          }
  EXPECT_EQ(first, 0.0);
  EXPECT_LE(anti, 1e-9);
  EXPECT_LE(pair, 1e-9);
  EXPECT_LE(bianchi, 1e-9);
}

TEST(Curvature, LeanRicciMatchesFullContraction) {
  const Geometry geo(random_perturbed_metric(Grid(4, 8), {2, 0.05, 3}));
  const Curvature full = curvature(geo);
  const RicciCurvature lean = ricci_curvature(geo);
  EXPECT_LE(sup_diff(full.ricci, lean.ricci), 1e-11);
  EXPECT_LE(sup_diff(full.scalar, lean.scalar), 1e-11);
}

TEST(Curvature, WeylVanishesWhenConformallyFlat) {
  const Grid g(4, 12);
  const Curvature c = curvature(Geometry(MetricField::conformally_flat(bump(g))));
  EXPECT_GT(c.riemann.max_abs(), 1e-3);
  EXPECT_LE(c.weyl.max_abs(), 1e-9);
}

TEST(Curvature, WeylVanishesInThreeDimensions) {
  const Curvature c = curvature(Geometry(random_perturbed_metric(Grid(3, 12), {2, 0.05, 4})));
  EXPECT_LE(c.weyl.max_abs(), 1e-12);
}

TEST(Curvature, ContractedBianchi) {
  // delta Ric + dR / 2 = 0.
  const Geometry geo(qlab::testing::perturbed_metric({3, 16, 0.05, 2, 24}, 0));
  const RicciCurvature rc = ricci_curvature(geo);
  VectorField lhs = divergence_delta(geo, rc.ricci);
  lhs.add_scaled(0.5, differential(rc.scalar));
  EXPECT_LE(lhs.max_abs(), 1e-9);
}

TEST(Curvature, ScalarCurvatureScalesInversely) {
  const MetricField m = random_perturbed_metric(Grid(3, 12), {2, 0.05, 5});
  const ScalarField r = ricci_curvature(Geometry(m)).scalar;
  const ScalarField r2 = ricci_curvature(Geometry(MetricField(2.0 * m.lower()))).scalar;
  EXPECT_LE(sup_diff(r2, 0.5 * r), 1e-12);
}
