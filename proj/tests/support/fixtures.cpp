#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/constants.hpp"
#include "qlab/curvature.hpp"
#include "qlab/operators.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/spectral.hpp"

namespace qlab::testing {

namespace {

Grid grid_for(const TorusCase& c) { return Grid(c.n, c.res); }
Grid eval_grid(const TorusCase& c) { return Grid(c.n, c.evaluation_resolution()); }

}  // namespace

MetricField perturbed_metric(const TorusCase& c, std::uint64_t seed) {
  return prolong(random_perturbed_metric(grid_for(c), {c.max_mode, c.amp, seed}), eval_grid(c));
}

ScalarField test_function(const TorusCase& c, std::uint64_t seed) {
  return prolong(random_scalar(grid_for(c), {c.max_mode, 1.0, 1000 + seed}), eval_grid(c));
}

SymTensor2Field test_direction(const TorusCase& c, std::uint64_t seed) {
  return prolong(random_sym2(grid_for(c), {c.max_mode, 1.0, 2000 + seed}), eval_grid(c));
}

VectorField test_vector(const TorusCase& c, std::uint64_t seed, Variance v) {
  return prolong(random_vector(grid_for(c), {c.max_mode, 1.0, 3000 + seed}, v), eval_grid(c));
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
  return sup_diff(static_cast<const FieldData&>(a), static_cast<const FieldData&>(b));
}

double sup_diff(const FieldData& a, const FieldData& b) {
  double m = 0.0;
  auto x = a.raw();
  auto y = b.raw();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

ScalarField q_reference(const MetricField& g) {
  const Geometry geo(g);
  const Curvature cv = curvature(geo);
  const int n = g.dim();
  const Constants c = constants(n);
  ScalarField ric_sq(g.grid()), scal(g.grid());
  for (std::size_t p = 0; p < g.points(); ++p) {
    double rc[kMaxDim][kMaxDim] = {};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < n; ++l) rc[j][k] += g.ginv(i, l, p) * cv.riemann(i, j, k, l, p);
    double s = 0.0, q2 = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        s += g.ginv(j, k, p) * rc[j][k];
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) q2 += g.ginv(j, a, p) * g.ginv(k, b, p) * rc[j][k] * rc[a][b];
      }
    scal[p] = s;
    ric_sq[p] = q2;
  }
  ScalarField q = laplacian(geo, scal);
  q *= c.A_d;
  q.add_scaled(c.B_d, ric_sq);
  q.add_scaled(c.C_d, scal * scal);
  return q;
}

}  // namespace qlab::testing
