#include "qlab/prescribe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "qlab/operators.hpp"
#include "qlab/q_paneitz.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/spectral.hpp"
#include "qlab/variations.hpp"

namespace qlab {

namespace {

using cplx = std::complex<double>;
using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

Mat constant_inverse(const MetricField& gbar) {
  if (!gbar.is_constant(1e-12))
    throw std::invalid_argument("flat solver: background metric must be constant");
  const int n = gbar.dim();
  Mat gi{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gi[i][j] = gbar.ginv(i, j, 0);
  return gi;
}

// |k|^2 in the metric gbar for every spectral index.
std::vector<double> symbol_norm(const SpectralTransform& t, const Mat& gi, int n) {
  std::vector<double> k2(t.spectral_size(), 0.0);
  for (std::size_t q = 0; q < k2.size(); ++q) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gi[i][j] * t.wavenumber(i)[q] * t.wavenumber(j)[q];
    k2[q] = s;
  }
  return k2;
}

void require_zero_mean(const ScalarField& psi, const char* what) {
  const double m = psi.mean();
  if (std::abs(m) > 1e-12 * std::max(1.0, psi.max_abs()))
    throw std::invalid_argument(std::string(what) + ": target must have zero mean (mean = " +
                                std::to_string(m) + ")");
}

// Solves Delta_gbar v = f (f zero mean) spectrally; v has zero mean.
ScalarField inverse_laplacian_flat(const MetricField& gbar, const ScalarField& f) {
  const Mat gi = constant_inverse(gbar);
  ComponentSpectrum s(f.grid(), f.values());
  const auto k2 = symbol_norm(s.transform(), gi, gbar.dim());
  ScalarField out(f.grid());
  s.apply([&](std::size_t q) { return k2[q] > 0.0 ? cplx(-1.0 / k2[q], 0.0) : cplx(0.0, 0.0); },
          out.values());
  return out;
}

}  // namespace

Projection project_divergence_free(const MetricField& gbar, const SymTensor2Field& h) {
  const int n = gbar.dim();
  const Mat gi = constant_inverse(gbar);
  const Geometry geo(gbar);
  const VectorField b = divergence_delta(geo, h);
  const auto& t = SpectralTransform::for_grid(gbar.grid());
  const auto k2 = symbol_norm(t, gi, n);

  std::vector<std::vector<cplx>> bh(n), xh(n, std::vector<cplx>(t.spectral_size()));
  for (int i = 0; i < n; ++i) {
    bh[i].resize(t.spectral_size());
    t.forward(b.component(i), bh[i]);
  }
  // (|k|^2 I + k k#^T) X = b  =>  X = (b - k (k#.b) / (2|k|^2)) / |k|^2
  for (std::size_t q = 0; q < t.spectral_size(); ++q) {
    if (k2[q] <= 0.0) continue;
    cplx ks_b(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      double ks = 0.0;
      for (int j = 0; j < n; ++j) ks += gi[i][j] * t.wavenumber(j)[q];
      ks_b += ks * bh[i][q];
    }
    for (int i = 0; i < n; ++i)
      xh[i][q] = (bh[i][q] - t.wavenumber(i)[q] * ks_b / (2.0 * k2[q])) / k2[q];
  }
  Projection out{h, VectorField(gbar.grid(), Variance::lower)};
  for (int i = 0; i < n; ++i) t.inverse(xh[i], out.X.component(i));
  out.h_df -= lie_derivative_metric(geo, out.X);
  return out;
}

ScalarField conformal_potential_flat(const MetricField& gbar, const ScalarField& psi) {
  require_zero_mean(psi, "linear_solve_flat");
  const Mat gi = constant_inverse(gbar);
  ComponentSpectrum s(psi.grid(), psi.values());
  const auto k2 = symbol_norm(s.transform(), gi, gbar.dim());
  ScalarField phi(psi.grid());
  s.apply([&](std::size_t q) {
    return k2[q] > 0.0 ? cplx(2.0 / (k2[q] * k2[q]), 0.0) : cplx(0.0, 0.0);
  }, phi.values());
  return phi;
}

SymTensor2Field linear_solve_flat(const MetricField& gbar, const ScalarField& psi) {
  return metric_times(gbar, conformal_potential_flat(gbar, psi));
}

SolveReport prescribe_q(const MetricField& gbar, const ScalarField& psi, const SolveOptions& opts) {
  require_zero_mean(psi, "prescribe_q");
  constant_inverse(gbar);
  SolveReport rep;
  const double amp = psi.max_abs();
  if (amp == 0.0) {
    rep.converged = true;
    rep.residuals.push_back(0.0);
    rep.mean_defects.push_back(0.0);
    rep.metric = gbar;
    rep.gauge = VectorField(gbar.grid(), Variance::upper);
    return rep;
  }

  // Q(g / r^2) = r^4 Q(g): solve for psi / r^4 and rescale at the end.
  double r = 1.0;
  if (amp > opts.basin) r = std::pow(amp / opts.basin, 0.25);
  const double r4 = r * r * r * r;
  const ScalarField target = (1.0 / r4) * psi;

  MetricField g = gbar;
  VectorField gauge(gbar.grid(), Variance::upper);
  for (int it = 0;; ++it) {
    const ScalarField q = q_curvature(g);
    ScalarField res = target - q;
    const double sup = res.max_abs();
    const double m = res.mean();
    rep.residuals.push_back(sup * r4);
    rep.mean_defects.push_back(m * r4);
    rep.accumulated_mean_defect += std::abs(m) * r4;
    rep.iterations = it;
    if (sup <= opts.tol / r4) {
      rep.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    const Geometry geo(g);
    VectorField X(gbar.grid(), Variance::upper);
    if (opts.mean_correction) {
      // X = eps grad v with Delta v = Q - mean Q; the first-order change
      // X.dQ then has mean -eps mean((Q - mean Q)^2).
      ScalarField qc = q;
      for (double& v : qc.values()) v -= q.mean();
      const double n2 = (qc * qc).mean();
      if (n2 > 0.0) {
        const double eps = -m / n2;
        X = raise(gbar, differential(inverse_laplacian_flat(gbar, qc)));
        X *= eps;
        res -= contract(X, differential(q));
      }
    }
    for (double& v : res.values()) v -= res.mean();
    SymTensor2Field next = g.lower();
    next += linear_solve_flat(gbar, res);
    if (opts.mean_correction) next += lie_derivative_metric(geo, X);
    gauge += X;
    g = MetricField(std::move(next));
  }
  rep.mean_defect = rep.mean_defects.back();
  if (r != 1.0) {
    rep.scaling = 1.0 / (r * r);
    g = MetricField(rep.scaling * g.lower());
  }
  rep.metric = std::move(g);
  rep.gauge = std::move(gauge);
  return rep;
}

namespace {

// int |nabla^2 h|^2 dv at a constant metric.
double hessian_norm_sq(const MetricField& gbar, const SymTensor2Field& h) {
  const int n = gbar.dim();
  const Mat gi = constant_inverse(gbar);
  std::vector<SymTensor2Field> d;
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      SymTensor2Field dkl(h.grid(), Variance::lower);
      for (int c = 0; c < h.components(); ++c)
        ComponentSpectrum(h.grid(), h.component(c)).derivative({k, l}, dkl.component(c));
      d.push_back(std::move(dkl));
      idx.emplace_back(k, l);
    }
  auto find = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (idx[i] == std::make_pair(a, b)) return i;
    return std::size_t(0);
  };
  ScalarField acc(h.grid());
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double w = gi[k][a] * gi[l][b];
          if (w == 0.0) continue;
          acc.add_scaled(w, dot(gbar, d[find(k, l)], d[find(a, b)]));
        }
  return integrate(acc, gbar.volume_density());
}

}  // namespace

RigidityReport rigidity_experiment(const MetricField& gbar, const RigidityOptions& opts) {
  constant_inverse(gbar);
  const Grid& grid = gbar.grid();
  const ScalarField one(grid, 1.0);
  const auto& dv = gbar.volume_density();
  RigidityReport rep;
  rep.max_quadratic_form = -std::numeric_limits<double>::infinity();
  rep.min_order = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < opts.trials; ++trial) {
    const SymTensor2Field raw =
        random_sym2(grid, {opts.max_mode, 1.0, opts.seed + static_cast<std::uint64_t>(trial)});
    SymTensor2Field h = project_divergence_free(gbar, raw).h_df;
    const double sup = h.max_abs();
    if (sup == 0.0) continue;
    h *= 1.0 / sup;

    RigidityTrial tr;
    tr.divergence = divergence_delta(Geometry(gbar), h).max_abs();
    tr.quadratic_form = quadratic_form_flat(gbar, h);
    rep.max_quadratic_form = std::max(rep.max_quadratic_form, tr.quadratic_form);

    if (trial < opts.order_trials) {
      double t = opts.amplitude;
      for (int k = 0; k <= opts.halvings; ++k, t *= 0.5) {
        SymTensor2Field m = gbar.lower();
        m.add_scaled(t, h);
        const double F = functional_F(MetricField(std::move(m)), one, dv);
        const double E = F - 0.5 * t * t * tr.quadratic_form;
        tr.amplitudes.push_back(t);
        tr.remainders.push_back(E);
        const double denom = t * t * t * hessian_norm_sq(gbar, h);
        if (denom > 0.0) tr.constant_fit = std::max(tr.constant_fit, std::abs(E) / denom);
      }
      for (std::size_t i = 1; i < tr.remainders.size(); ++i) {
        const double o = std::log2(std::abs(tr.remainders[i - 1]) / std::abs(tr.remainders[i]));
        tr.orders.push_back(o);
      }
      // The largest amplitudes are not yet asymptotic when h has short
      // wavelengths; the finest halving is the one that measures the order.
      if (!tr.orders.empty()) {
        tr.asymptotic_order = tr.orders.back();
        rep.min_order = std::min(rep.min_order, tr.asymptotic_order);
      }
      rep.constant_fit = std::max(rep.constant_fit, tr.constant_fit);
    }
    rep.trials.push_back(std::move(tr));
  }

  // A parallel (constant-coefficient) perturbation keeps the metric flat.
  SymTensor2Field hc(grid, Variance::lower);
  const int n = gbar.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (double& v : hc.component(sym_index(n, i, j))) v = (i == j) ? 0.02 : 0.01;
  rep.constant_mode_form = quadratic_form_flat(gbar, hc);
  SymTensor2Field m = gbar.lower();
  m += hc;
  rep.constant_mode_F = functional_F(MetricField(std::move(m)), one, dv);
  return rep;
}

}  // namespace qlab
