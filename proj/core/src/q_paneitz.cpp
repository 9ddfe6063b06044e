#include "qlab/q_paneitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlab/operators.hpp"

namespace qlab {

namespace {

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
  return m;
}

void require_positive(const ScalarField& u, double floor) {
  for (std::size_t p = 0; p < u.points(); ++p)
    if (!(u[p] > floor))
      throw std::domain_error("conformal law: u must exceed the positivity floor everywhere");
}

ScalarField pow_field(const ScalarField& u, double e) {
  ScalarField out(u.grid());
  for (std::size_t p = 0; p < u.points(); ++p) out[p] = std::pow(u[p], e);
  return out;
}

ScalarField exp_field(const ScalarField& u, double s) {
  ScalarField out(u.grid());
  for (std::size_t p = 0; p < u.points(); ++p) out[p] = std::exp(s * u[p]);
  return out;
}

}  // namespace

ScalarField q_from_curvature(const Geometry& geo, const SymTensor2Field& ric,
                             const ScalarField& scalar) {
  const Constants c = constants(geo.dim());
  ScalarField q = laplacian(geo, scalar);
  q *= c.A_d;
  q.add_scaled(c.B_d, dot(geo.metric(), ric, ric));
  q.add_scaled(c.C_d, scalar * scalar);
  return q;
}

ScalarField q_curvature(const Geometry& geo) {
  const RicciCurvature rc = ricci_curvature(geo);
  return q_from_curvature(geo, rc.ricci, rc.scalar);
}

ScalarField q_curvature(const MetricField& g) { return q_curvature(Geometry(g)); }

ScalarField paneitz(const Geometry& geo, const SymTensor2Field& ric, const ScalarField& scalar,
                    const ScalarField& q, const ScalarField& f) {
  const int n = geo.dim();
  const Constants c = constants(n);
  const auto& g = geo.metric();
  const VectorField df = differential(f);
  const VectorField df_up = raise(g, df);
  // w_i = a R d_i f + b R_ij (df)^j
  VectorField w = (c.a_d * scalar) * df;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto rij = ric.component(sym_index(n, i, j));
      auto dj = df_up.component(j);
      auto wi = w.component(i);
      for (std::size_t p = 0; p < g.points(); ++p) wi[p] += c.b_d * rij[p] * dj[p];
    }
  ScalarField out = bilaplacian(geo, f);
  out += divergence_delta(geo, w);  // -div w
  out.add_scaled(0.5 * (n - 4), q * f);
  return out;
}

ScalarField paneitz(const Geometry& geo, const ScalarField& f) {
  const RicciCurvature rc = ricci_curvature(geo);
  const ScalarField q = q_from_curvature(geo, rc.ricci, rc.scalar);
  return paneitz(geo, rc.ricci, rc.scalar, q, f);
}

MetricField conformal_metric(const MetricField& g, const ScalarField& u,
                             const ConformalOptions& opts) {
  const int n = g.dim();
  if (n == 4) return MetricField(exp_field(u, 2.0) * g.lower());
  require_positive(u, opts.positivity_floor);
  return MetricField(pow_field(u, 4.0 / (n - 4)) * g.lower());
}

ScalarField conformal_q(const MetricField& g, const ScalarField& u, const ConformalOptions& opts) {
  const int n = g.dim();
  const Geometry geo(g);
  const RicciCurvature rc = ricci_curvature(geo);
  const ScalarField q = q_from_curvature(geo, rc.ricci, rc.scalar);
  if (n == 4) {
    ScalarField pu = paneitz(geo, rc.ricci, rc.scalar, q, u);
    pu += q;
    return exp_field(u, -4.0) * pu;
  }
  require_positive(u, opts.positivity_floor);
  ScalarField out = pow_field(u, -double(n + 4) / (n - 4)) * paneitz(geo, rc.ricci, rc.scalar, q, u);
  out *= 2.0 / (n - 4);
  return out;
}

ScalarField conformal_paneitz(const MetricField& g, const ScalarField& u, const ScalarField& phi,
                              const ConformalOptions& opts) {
  const int n = g.dim();
  const Geometry geo(g);
  if (n == 4) return exp_field(u, -4.0) * paneitz(geo, phi);
  require_positive(u, opts.positivity_floor);
  return pow_field(u, -double(n + 4) / (n - 4)) * paneitz(geo, u * phi);
}

ConformalCheck conformal_paneitz_check(const MetricField& g, const ScalarField& u,
                                       const ScalarField& phi, const ConformalOptions& opts) {
  ConformalCheck out;
  {
    const ScalarField law_q = conformal_q(g, u, opts);
    const ScalarField law_p = conformal_paneitz(g, u, phi, opts);
    const Geometry tilde(conformal_metric(g, u, opts));
    const RicciCurvature rc = ricci_curvature(tilde);
    const ScalarField q = q_from_curvature(tilde, rc.ricci, rc.scalar);
    const ScalarField p = paneitz(tilde, rc.ricci, rc.scalar, q, phi);
    out.q_residual = sup_diff(q, law_q);
    out.p_residual = sup_diff(p, law_p);
    out.q_scale = q.max_abs();
    out.p_scale = p.max_abs();
  }
  return out;
}

}  // namespace qlab
