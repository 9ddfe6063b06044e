// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: qlab_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fixtures.hpp"
#include "qlab/closed_form.hpp"
#include "qlab/constants.hpp"
#include "qlab/curvature.hpp"
#include "qlab/operators.hpp"
#include "qlab/prescribe.hpp"
#include "qlab/q_paneitz.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/spectral.hpp"
#include "qlab/variations.hpp"

using namespace qlab;
using qlab::testing::TorusCase;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

constexpr int kSeeds = 5;
const TorusCase kCases[] = {qlab::testing::kT3, qlab::testing::kT4};

std::string label(const TorusCase& c) {
  std::string s = "T" + std::to_string(c.n) + "/" + std::to_string(c.res);
  if (c.evaluation_resolution() != c.res) s += "@" + std::to_string(c.evaluation_resolution());
  return s;
}

void constants_identities(Outcome& o) {
  int checked = 0;
  for (int n = 3; n <= 64; ++n) {
    const Constants c = constants(n);
    o.require(c.trace_identity() == 0, "trace identity n=" + std::to_string(n));
    o.require(c.Lambda < 0, "Lambda<0 n=" + std::to_string(n));
    o.require(c.alpha > 0, "alpha>0 n=" + std::to_string(n));
    ++checked;
  }
  o.detail << "n=3.." << 2 + checked << " exact";
}

void adjointness(Outcome& o) {
  for (const auto& padded : kCases) {
    const TorusCase tc = padded.nominal();
    double worst = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const Background bg(qlab::testing::perturbed_metric(tc, s));
      const AdjointCheck a = adjoint_check(bg, qlab::testing::test_function(tc, s),
                                           qlab::testing::test_direction(tc, s));
      worst = std::max(worst, a.relative);
    }
    o.detail << label(tc) << " max rel " << worst << "; ";
    o.require(worst <= 1e-7, label(tc) + " adjoint residual");
  }
}

// The FD order only needs the quadratic error term to dominate aliasing,
// which a lighter padding already achieves; keeps the runtime under budget.
TorusCase fd_case(TorusCase tc) {
  if (tc.n == 4) tc.eval_res = 24;
  return tc;
}

void linearization(Outcome& o) {
  for (const auto& padded : kCases) {
    const TorusCase tc = fd_case(padded);
    double worst = 1e300;
    for (int s = 0; s < kSeeds; ++s) {
      const Background bg(qlab::testing::perturbed_metric(tc, s));
      const FdConvergence c =
          fd_check_gamma(bg, qlab::testing::test_direction(tc, s), 1e-2, 1e-3);
      worst = std::min(worst, c.order);
    }
    o.detail << label(tc) << " min order " << worst << "; ";
    o.require(worst >= 1.9, label(tc) + " FD order");
  }
}

void trace_identity(Outcome& o) {
  for (const auto& tc : kCases) {
    double worst = 0.0, worst_one = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const Background bg(qlab::testing::perturbed_metric(tc, s));
      const TraceIdentity t = trace_gamma_star(bg, qlab::testing::test_function(tc, s));
      worst = std::max(worst, t.residual / t.scale);
      const TraceIdentity t1 = trace_gamma_star(bg, ScalarField(bg.grid(), 1.0));
      const ScalarField minus_2q = -2.0 * bg.q();
      worst_one = std::max(worst_one, qlab::testing::sup_diff(t1.trace, minus_2q) /
                                          std::max(minus_2q.max_abs(), t1.trace.max_abs()));
    }
    o.detail << label(tc) << " rel " << worst << ", L1+2Q rel " << worst_one << "; ";
    o.require(worst <= 1e-8, label(tc) + " trace identity");
    o.require(worst_one <= 1e-8, label(tc) + " L1 = -2Q");
  }
}

void gauss_bonnet(Outcome& o) {
  const MetricField g = qlab::testing::perturbed_metric({4, 12, 0.02, 3}, 0);
  const Geometry geo(g);
  const Curvature cv = curvature(geo);
  const ScalarField q = q_from_curvature(geo, cv.ricci, cv.scalar);
  const ScalarField w2 = norm_squared(g, cv.weyl);
  ScalarField integrand = q;
  integrand.add_scaled(0.25, w2);
  ScalarField absolute(g.grid());
  for (std::size_t p = 0; p < g.points(); ++p) absolute[p] = std::abs(q[p]) + 0.25 * w2[p];
  const double rel = std::abs(integrate(integrand, g)) / integrate(absolute, g);
  o.detail << "T4 rel " << rel;
  o.require(rel <= 1e-3, "torus Gauss-Bonnet-Chern");

  const GaussBonnetS4 s4 = gauss_bonnet_s4();
  o.detail << "; Q(S4) = " << to_string(s4.q) << ", Q Vol - 16 pi^2 = " << s4.integral - s4.expected;
  o.require(s4.q == 6, "Q(S4) = 6");
  o.require(std::abs(s4.integral - s4.expected) <= 1e-12 * s4.expected, "Q Vol(S4)");
}

void q_singular(Outcome& o) {
  int zeros = 0;
  for (int n = 3; n <= 10; ++n) {
    for (const auto& bg : {EinsteinBackground::unit_sphere(n), EinsteinBackground::unit_hyperbolic(n),
                           EinsteinBackground::ricci_flat(n)}) {
      const SingularReport r = verify_q_singular(bg, canonical_potential(bg));
      const std::string tag = std::string(to_string(bg.model)) + " n=" + std::to_string(n);
      o.require(r.hessian_residual == 0, tag + " reduced residual");
      o.require(r.gamma_star == 0, tag + " full residual");
      o.require(r.reduced == r.gamma_star, tag + " reduction");
      zeros += (r.gamma_star == 0);
    }
    const SphereSpectral sp = sphere_spectral_check(n);
    o.require(sp.residual == 0, "sphere spectral n=" + std::to_string(n));
    o.require(sp.kernel_dimension == n + 1, "kernel dimension");
  }
  const SphereSpectral s4 = sphere_spectral_check(4);
  o.require(s4.eigenvalue == 24, "P f = 24 f on S4");
  o.detail << zeros << "/24 exact zeros; S4 Pf/f = " << to_string(s4.eigenvalue);
}

void conformal(Outcome& o) {
  // e^{2u} g is not band-limited, so the transformed metric is evaluated on a
  // padded grid. Five dimensions cannot be padded within memory; there the
  // data is drawn one mode lower instead.
  struct Case {
    int n, res, eval_res, max_mode;
  };
  for (const Case cs : {Case{4, 16, 24, 2}, Case{3, 24, 36, 2}, Case{5, 16, 16, 1}}) {
    const Grid grid(cs.n, cs.res);
    const Grid eval(cs.n, cs.eval_res);
    const MetricField g = prolong(random_perturbed_metric(grid, {cs.max_mode, 0.05, 7}), eval);
    ScalarField u = random_scalar(grid, {cs.max_mode, 0.1, 8});
    if (cs.n != 4)
      for (double& v : u.values()) v += 1.0;
    const ScalarField phi = prolong(random_scalar(grid, {cs.max_mode, 1.0, 9}), eval);
    const ConformalCheck c = conformal_paneitz_check(g, prolong(u, eval), phi);
    const double rq = c.q_residual / std::max(1.0, c.q_scale);
    const double rp = c.p_residual / std::max(1.0, c.p_scale);
    o.detail << "n=" << cs.n << "@" << cs.eval_res << " Q " << rq << " P " << rp << "; ";
    o.require(rq <= 1e-7 && rp <= 1e-7, "conformal law n=" + std::to_string(cs.n));
  }
}

void diffeo(Outcome& o) {
  for (const auto& tc : kCases) {
    double worst_g = 0.0, worst_d = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const Background bg(qlab::testing::perturbed_metric(tc, s));
      const VectorField X = qlab::testing::test_vector(tc, s, Variance::upper);
      const ScalarField lhs = gamma(bg, lie_derivative_metric(bg.geometry(), X));
      const ScalarField rhs = contract(X, differential(bg.q()));
      worst_g = std::max(worst_g, qlab::testing::sup_diff(lhs, rhs));

      const ScalarField f = qlab::testing::test_function(tc, s);
      const VectorField d = divergence_delta(bg.geometry(), gamma_star(bg, f));
      const VectorField half = 0.5 * (f * differential(bg.q()));
      worst_d = std::max(worst_d, qlab::testing::sup_diff(d, half));
    }
    o.detail << label(tc) << " Gamma(L_X g) " << worst_g << " delta Gamma* " << worst_d << "; ";
    o.require(worst_g <= 1e-6, label(tc) + " Gamma(L_X g) = X.dQ");
    o.require(worst_d <= 1e-6, label(tc) + " delta Gamma* f = f dQ / 2");
  }
}

void prescribing(Outcome& o) {
  const Grid grid(3, 24);
  const ScalarField psi = ScalarField::sample(grid, [](std::span<const double> x) {
    return 1e-3 * (std::sin(x[0]) + 0.5 * std::cos(x[1] + x[2]) - 0.3 * std::sin(x[0] - 2 * x[1]) +
                   0.2 * std::cos(2 * x[2]));
  });
  const MetricField flat = MetricField::flat(grid);
  const SolveReport rep = prescribe_q(flat, psi);
  const ScalarField q = qlab::testing::q_reference(*rep.metric);
  const double err = qlab::testing::sup_diff(q, psi);
  o.detail << "iterations " << rep.iterations << ", recomputed |Q - psi| " << err;
  o.require(rep.converged && rep.iterations <= 30, "solver converged within 30 iterations");
  o.require(err <= 1e-9, "independent recomputation");

  const double lambda = 2.5;
  const ScalarField q_scaled = q_curvature(MetricField(lambda * rep.metric->lower()));
  const double scale_err = qlab::testing::sup_diff(q_scaled, (1.0 / (lambda * lambda)) * q);
  o.detail << ", Q(lambda g) - Q(g)/lambda^2 " << scale_err;
  o.require(scale_err <= 1e-9, "scaling law");

  // Targets beyond the direct basin go through Q(g / r^2) = r^4 Q(g).
  const ScalarField big = 20.0 * psi;
  const SolveReport rep_big = prescribe_q(flat, big);
  const double err_big = qlab::testing::sup_diff(q_curvature(*rep_big.metric), big);
  o.detail << ", rescaled target |Q - psi| " << err_big << " (scaling " << rep_big.scaling << ")";
  o.require(rep_big.converged && err_big <= 1e-9 * 20.0, "rescaled target");
}

void second_variation(Outcome& o) {
  const Grid grid(3, 16);
  const MetricField flat = MetricField::flat(grid);
  const ScalarField one(grid, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    SymTensor2Field h = project_divergence_free(flat, random_sym2(grid, {2, 1.0, 40u + s})).h_df;
    h *= 1.0 / h.max_abs();
    const double form = quadratic_form_flat(flat, h);
    auto F = [&](double t) {
      SymTensor2Field m = flat.lower();
      m.add_scaled(t, h);
      return functional_F(MetricField(std::move(m)), one, flat.volume_density());
    };
    const double F0 = F(0.0);
    auto d2 = [&](double t) { return (F(t) - 2.0 * F0 + F(-t)) / (t * t); };
    const double t = 1e-2;
    const double fd = (4.0 * d2(t / 2) - d2(t)) / 3.0;
    worst = std::max(worst, std::abs(fd - form) / std::abs(form));
  }
  o.detail << "form vs FD rel " << worst;
  o.require(worst <= 1e-4, "quadratic form vs nested FD");

  const RigidityReport r = rigidity_experiment(flat, {});
  o.detail << "; max form " << r.max_quadratic_form << " over " << r.trials.size()
           << " trials, constant-mode form " << r.constant_mode_form << ", min order " << r.min_order;
  o.require(r.trials.size() == 100 && r.max_quadratic_form < 0.0, "form negative");
  o.require(std::abs(r.constant_mode_form) <= 1e-12 && std::abs(r.constant_mode_F) <= 1e-12,
            "constant mode");
  o.require(r.min_order >= 2.9, "cubic remainder order");
}

void decomposition(Outcome& o) {
  const Grid grid(3, 16);
  SymTensor2Field gc(grid, Variance::lower);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (double& v : gc.component(sym_index(3, i, j))) v = (i == j) ? 1.0 + 0.2 * i : 0.1;
  double idem = 0.0, annih = 0.0, div = 0.0;
  for (const MetricField& gbar : {MetricField::flat(grid), MetricField(gc)}) {
    const Geometry geo(gbar);
    for (int s = 0; s < kSeeds; ++s) {
      const SymTensor2Field h = random_sym2(grid, {3, 1.0, 60u + s});
      const Projection p = project_divergence_free(gbar, h);
      idem = std::max(idem, qlab::testing::sup_diff(project_divergence_free(gbar, p.h_df).h_df, p.h_df));
      const VectorField X = random_vector(grid, {3, 1.0, 70u + s});
      annih = std::max(annih,
                       project_divergence_free(gbar, lie_derivative_metric(geo, X)).h_df.max_abs());
      div = std::max(div, divergence_delta(geo, p.h_df).max_abs());
    }
  }
  o.detail << "idempotence " << idem << ", L_X g residue " << annih << ", divergence " << div;
  o.require(idem <= 1e-10, "idempotent");
  o.require(annih <= 1e-10, "annihilates L_X g");
  o.require(div <= 1e-10, "divergence free");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "constants identities", constants_identities},
      {2, "adjointness", adjointness},
      {3, "linearization FD order", linearization},
      {4, "trace identity", trace_identity},
      {5, "Gauss-Bonnet-Chern", gauss_bonnet},
      {6, "Q-singular examples", q_singular},
      {7, "conformal covariance", conformal},
      {8, "diffeomorphism duality", diffeo},
      {9, "prescribing solver", prescribing},
      {10, "second variation and rigidity", second_variation},
      {11, "decomposition", decomposition},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    int id = 0;
    const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), id);
    if (ec != std::errc{} || end != arg.data() + arg.size() || id < 1 ||
        id > static_cast<int>(all.size())) {
      std::cerr << "usage: qlab_acceptance [criterion ...]  (numbers 1.." << all.size() << ")\n";
      return 2;
    }
    only.insert(id);
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-30s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
