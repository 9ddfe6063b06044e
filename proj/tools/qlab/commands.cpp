#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "qlab/closed_form.hpp"
#include "qlab/curvature.hpp"
#include "qlab/operators.hpp"
#include "qlab/prescribe.hpp"
#include "qlab/q_paneitz.hpp"
#include "qlab/random_fields.hpp"
#include "qlab/serialize.hpp"
#include "qlab/spectral.hpp"
#include "qlab/variations.hpp"

namespace qlab::cli {

namespace {

using qlab::to_string;
using qlab::cli::to_string;

using Bound = Check::Bound;

template <class F>
double sup_diff(const F& a, const F& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) m = std::max(m, std::abs(a.raw()[k] - b.raw()[k]));
  return m;
}

// Band-limited samples drawn on the nominal grid and prolonged to the
// evaluation grid. Seed offsets keep f, h and X independent of the metric.
struct Sample {
  Grid grid;
  Grid eval;
  std::uint64_t seed;

  Sample(const ExperimentConfig& c, std::uint64_t s)
      : grid(c.n, c.resolution), eval(c.n, c.eval_resolution), seed(s) {}

  MetricField metric(const ExperimentConfig& c) const {
    return prolong(random_perturbed_metric(grid, {c.max_mode, c.amplitude, seed}), eval);
  }
  ScalarField function(const ExperimentConfig& c) const {
    return prolong(random_scalar(grid, {c.max_mode, 1.0, 1000 + seed}), eval);
  }
  SymTensor2Field direction(const ExperimentConfig& c) const {
    return prolong(random_sym2(grid, {c.max_mode, 1.0, 2000 + seed}), eval);
  }
  VectorField vector(const ExperimentConfig& c) const {
    return prolong(random_vector(grid, {c.max_mode, 1.0, 3000 + seed}, Variance::upper), eval);
  }
};

template <class Row, class Fn>
std::vector<Row> per_seed(const ExperimentConfig& cfg, Fn&& fn) {
  std::vector<Row> rows(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), [&](std::size_t i) { rows[i] = fn(cfg.seeds[i]); });
  return rows;
}

double column_max(const std::vector<std::vector<double>>& rows, std::size_t col) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r[col]);
  return m;
}

double column_min(const std::vector<std::vector<double>>& rows, std::size_t col) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r[col]);
  return m;
}

void fill(Report& rep, const ExperimentConfig& cfg, std::vector<std::string> columns,
          const std::vector<std::vector<double>>& rows) {
  rep.table().columns = std::move(columns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<nlohmann::json> r{cfg.seeds[i]};
    for (double v : rows[i]) r.emplace_back(v);
    rep.table().rows.push_back(std::move(r));
  }
}

void verify_adjoint(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    const Background bg(smp.metric(cfg));
    const AdjointCheck a = adjoint_check(bg, smp.function(cfg), smp.direction(cfg));
    return std::vector<double>{a.lhs, a.rhs, a.scale, a.relative};
  });
  fill(rep, cfg, {"seed", "lhs", "rhs", "scale", "relative"}, rows);
  rep.check("max relative adjoint residual", column_max(rows, 3), cfg.tol("relative"));
}

void verify_gamma_fd(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    const Background bg(smp.metric(cfg));
    const FdConvergence c = fd_check_gamma(bg, smp.direction(cfg), 1e-2, 1e-3);
    return std::vector<double>{c.eps_coarse, c.err_coarse, c.eps_fine, c.err_fine, c.order};
  });
  fill(rep, cfg, {"seed", "eps_coarse", "err_coarse", "eps_fine", "err_fine", "order"}, rows);
  rep.check("min convergence order", column_min(rows, 4), cfg.tol("min_order"), Bound::at_least);
}

void verify_trace(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    const Background bg(smp.metric(cfg));
    const TraceIdentity t = trace_gamma_star(bg, smp.function(cfg));
    const TraceIdentity t1 = trace_gamma_star(bg, ScalarField(bg.grid(), 1.0));
    const ScalarField minus_2q = -2.0 * bg.q();
    const double one = sup_diff(t1.trace, minus_2q) / std::max(minus_2q.max_abs(), t1.trace.max_abs());
    return std::vector<double>{t.residual, t.scale, t.residual / t.scale, one};
  });
  fill(rep, cfg, {"seed", "residual", "scale", "relative", "L1_plus_2Q_relative"}, rows);
  rep.check("max relative trace residual", column_max(rows, 2), cfg.tol("relative"));
  rep.check("max relative |L1 + 2Q|", column_max(rows, 3), cfg.tol("relative"));
}

void verify_conformal(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    ScalarField u = random_scalar(smp.grid, {cfg.max_mode, cfg.u_amplitude, 100 + s});
    if (cfg.n != 4)
      for (double& v : u.values()) v += 1.0;
    const ConformalCheck c =
        conformal_paneitz_check(smp.metric(cfg), prolong(u, smp.eval), smp.function(cfg));
    return std::vector<double>{c.q_residual, c.q_scale, c.p_residual, c.p_scale,
                               c.q_residual / std::max(1.0, c.q_scale),
                               c.p_residual / std::max(1.0, c.p_scale)};
  });
  fill(rep, cfg,
       {"seed", "q_residual", "q_scale", "p_residual", "p_scale", "q_relative", "p_relative"}, rows);
  rep.check("max Q law residual / max(1, |Q|)", column_max(rows, 4), cfg.tol("relative"));
  rep.check("max P law residual / max(1, |P phi|)", column_max(rows, 5), cfg.tol("relative"));
}

void verify_diffeo(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    const Background bg(smp.metric(cfg));
    const VectorField X = smp.vector(cfg);
    const VectorField dq = differential(bg.q());
    const double lie = sup_diff(gamma(bg, lie_derivative_metric(bg.geometry(), X)), contract(X, dq));
    const ScalarField f = smp.function(cfg);
    const double dual =
        sup_diff(divergence_delta(bg.geometry(), gamma_star(bg, f)), 0.5 * (f * dq));
    return std::vector<double>{lie, dual};
  });
  fill(rep, cfg, {"seed", "gamma_lie_residual", "delta_gamma_star_residual"}, rows);
  rep.check("max |Gamma(L_X g) - X.dQ|", column_max(rows, 0), cfg.tol("absolute"));
  rep.check("max |delta Gamma* f - f dQ / 2|", column_max(rows, 1), cfg.tol("absolute"));
}

// Flat metric and a constant non-identity metric.
std::vector<MetricField> constant_metrics(const Grid& grid) {
  const int n = grid.dim();
  SymTensor2Field gc(grid, Variance::lower);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (double& v : gc.component(sym_index(n, i, j))) v = (i == j) ? 1.0 + 0.2 * i : 0.1;
  return {MetricField::flat(grid), MetricField(std::move(gc))};
}

void verify_decomposition(const ExperimentConfig& cfg, Report& rep) {
  const Grid grid(cfg.n, cfg.resolution);
  const auto metrics = constant_metrics(grid);
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    std::vector<double> r(3, 0.0);
    for (const MetricField& gbar : metrics) {
      const Geometry geo(gbar);
      const Projection p = project_divergence_free(gbar, random_sym2(grid, {cfg.max_mode, 1.0, s}));
      r[0] = std::max(r[0], sup_diff(project_divergence_free(gbar, p.h_df).h_df, p.h_df));
      const VectorField X = random_vector(grid, {cfg.max_mode, 1.0, 3000 + s});
      r[1] = std::max(r[1], project_divergence_free(gbar, lie_derivative_metric(geo, X)).h_df.max_abs());
      r[2] = std::max(r[2], divergence_delta(geo, p.h_df).max_abs());
    }
    return r;
  });
  fill(rep, cfg, {"seed", "idempotence", "lie_residue", "divergence"}, rows);
  rep.check("idempotence", column_max(rows, 0), cfg.tol("absolute"));
  rep.check("annihilates L_X g", column_max(rows, 1), cfg.tol("absolute"));
  rep.check("divergence of output", column_max(rows, 2), cfg.tol("absolute"));
}

void gbc(const ExperimentConfig& cfg, Report& rep) {
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    const Sample smp(cfg, s);
    const MetricField g = smp.metric(cfg);
    const Geometry geo(g);
    const Curvature cv = curvature(geo);
    const ScalarField q = q_from_curvature(geo, cv.ricci, cv.scalar);
    const ScalarField w2 = norm_squared(g, cv.weyl);
    ScalarField integrand = q;
    integrand.add_scaled(0.25, w2);
    ScalarField absolute(g.grid());
    for (std::size_t p = 0; p < g.points(); ++p) absolute[p] = std::abs(q[p]) + 0.25 * w2[p];
    const double total = integrate(integrand, g);
    const double mass = integrate(absolute, g);
    return std::vector<double>{total, mass, std::abs(total) / mass};
  });
  fill(rep, cfg, {"seed", "integral", "absolute_integral", "relative_defect"}, rows);
  rep.check("max relative Gauss-Bonnet-Chern defect", column_max(rows, 2), cfg.tol("relative"));

  const GaussBonnetS4 s4 = gauss_bonnet_s4();
  rep.details()["unit_s4"] = {{"q", to_string(s4.q)},
                              {"volume", s4.volume},
                              {"q_volume", s4.integral},
                              {"expected", s4.expected}};
  rep.check_exact("Q(unit S4) = 6", s4.q == 6);
  rep.check("|Q Vol(S4) - 16 pi^2| / 16 pi^2", std::abs(s4.integral - s4.expected) / s4.expected,
            1e-12);
}

void models(const ExperimentConfig& cfg, Report& rep) {
  rep.table().columns = {"n",          "model",         "potential",  "kappa",
                         "phi",        "hessian",       "gamma_star", "reduced",
                         "vacuum_static", "einstein_q", "sphere_pf_over_f", "sphere_target"};
  bool all_zero = true;
  for (int n = cfg.n; n <= cfg.n_last; ++n) {
    const SphereSpectral sp = sphere_spectral_check(n);
    all_zero = all_zero && sp.residual == 0;
    for (const auto& bg : {EinsteinBackground::unit_sphere(n), EinsteinBackground::unit_hyperbolic(n),
                           EinsteinBackground::ricci_flat(n)}) {
      const ModelPotential pot = canonical_potential(bg);
      const SingularReport r = verify_q_singular(bg, pot);
      const VacuumStatic v = verify_vacuum_static(bg, pot);
      all_zero = all_zero && r.hessian_residual == 0 && r.gamma_star == 0 && r.reduced == 0 &&
                 v.coefficient == 0;
      const bool sphere = bg.model == Model::sphere;
      rep.table().rows.push_back({n, std::string(to_string(bg.model)),
                                  std::string(to_string(pot.kind)), to_string(pot.kappa),
                                  to_string(r.phi), to_string(r.hessian_residual),
                                  to_string(r.gamma_star), to_string(r.reduced),
                                  to_string(v.coefficient), to_string(einstein_q(bg)),
                                  sphere ? to_string(sp.eigenvalue) : std::string(),
                                  sphere ? to_string(sp.target) : std::string()});
    }
  }
  rep.check_exact("all closed-form residuals are exact zeros", all_zero);
  if (cfg.n <= 4 && cfg.n_last >= 4) rep.check_exact("P f = 24 f on S4", sphere_spectral_check(4).eigenvalue == 24);
}

ScalarField default_target(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Grid grid(cfg.n, cfg.resolution);
  ScalarField psi = random_scalar(grid, {cfg.max_mode, 1.0, 5000 + seed});
  const double m = psi.mean();
  for (double& v : psi.values()) v -= m;
  psi *= cfg.amplitude / psi.max_abs();
  return psi;
}

void prescribe(const ExperimentConfig& cfg, Report& rep) {
  const Grid grid(cfg.n, cfg.resolution);
  std::optional<ScalarField> given;
  if (cfg.psi) {
    try {
      given = load(*cfg.psi).as_scalar();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("psi: ") + e.what());
    } catch (const std::runtime_error& e) {
      throw ConfigError(std::string("psi: ") + e.what());
    }
    if (given->grid().resolution() != grid.resolution())
      throw ConfigError("psi: grid differs from n/resolution");
  }
  const MetricField flat = MetricField::flat(grid);
  constexpr double kLambda = 2.5;

  struct Outcome {
    SolveReport solve;
    double recomputed = 0;
    double scaling = 0;
  };
  std::vector<Outcome> out(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), [&](std::size_t i) {
    const ScalarField psi = given ? *given : default_target(cfg, cfg.seeds[i]);
    Outcome o;
    o.solve = prescribe_q(flat, psi, {.tol = cfg.tol("residual")});
    if (o.solve.metric) {
      // Full Riemann pipeline, independent of the solver's own Q evaluations.
      const Geometry geo(*o.solve.metric);
      const Curvature cv = curvature(geo);
      const ScalarField q = q_from_curvature(geo, cv.ricci, cv.scalar);
      o.recomputed = sup_diff(q, psi);
      const ScalarField q_scaled = q_curvature(MetricField(kLambda * o.solve.metric->lower()));
      o.scaling = sup_diff(q_scaled, (1.0 / (kLambda * kLambda)) * q) /
                  std::max(1.0, q.max_abs() / (kLambda * kLambda));
    } else {
      o.recomputed = o.scaling = std::numeric_limits<double>::infinity();
    }
    out[i] = std::move(o);
  });

  rep.table().columns = {"seed", "converged", "iterations", "final_residual", "recomputed_residual",
                         "mean_defect", "scaling", "scaling_law_relative"};
  nlohmann::json solves = nlohmann::json::array();
  double worst = 0.0, worst_scale = 0.0;
  int max_iter = 0;
  bool converged = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    const double final_res = o.solve.residuals.empty() ? 0.0 : o.solve.residuals.back();
    rep.table().rows.push_back({cfg.seeds[i], o.solve.converged, o.solve.iterations, final_res,
                                o.recomputed, o.solve.mean_defect, o.solve.scaling, o.scaling});
    solves.push_back({{"n", cfg.n},
                      {"resolution", cfg.resolution},
                      {"seed", cfg.seeds[i]},
                      {"iterations", o.solve.iterations},
                      {"residuals", o.solve.residuals},
                      {"mean_defect", o.solve.mean_defect},
                      {"mean_defects", o.solve.mean_defects},
                      {"scaling", o.solve.scaling}});
    worst = std::max(worst, o.recomputed);
    worst_scale = std::max(worst_scale, o.scaling);
    max_iter = std::max(max_iter, o.solve.iterations);
    converged = converged && o.solve.converged;
  }
  rep.details()["solves"] = std::move(solves);
  rep.check_exact("converged within the iteration budget", converged);
  rep.check("max recomputed |Q_g - psi|", worst, cfg.tol("residual"));
  rep.check("|Q(2.5 g) - Q(g) / 6.25| / max(1, |Q|)", worst_scale, cfg.tol("scaling"));

  if (cfg.metric_out && out.front().solve.metric) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::filesystem::path p = *cfg.metric_out;
      if (out.size() > 1)
        p.replace_filename(p.stem().string() + "_seed" + std::to_string(cfg.seeds[i]) +
                           p.extension().string());
      save(p, store(*out[i].solve.metric));
    }
  }
}

void rigidity(const ExperimentConfig& cfg, Report& rep) {
  const Grid grid(cfg.n, cfg.resolution);
  RigidityOptions opts;
  opts.trials = cfg.trials;
  opts.amplitude = cfg.amplitude;
  opts.max_mode = cfg.max_mode;
  opts.seed = cfg.seeds.front();
  const RigidityReport r = rigidity_experiment(MetricField::flat(grid), opts);

  rep.table().columns = {"trial", "quadratic_form", "divergence", "asymptotic_order", "constant_fit"};
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto& tr = r.trials[t];
    rep.table().rows.push_back({static_cast<int>(t), tr.quadratic_form, tr.divergence,
                                tr.orders.empty() ? nlohmann::json("") : nlohmann::json(tr.asymptotic_order),
                                tr.orders.empty() ? nlohmann::json("") : nlohmann::json(tr.constant_fit)});
  }
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& tr : r.trials)
    if (!tr.orders.empty())
      sweeps.push_back({{"amplitudes", tr.amplitudes}, {"remainders", tr.remainders}, {"orders", tr.orders}});
  rep.details()["sweeps"] = std::move(sweeps);
  rep.details()["constant_fit"] = r.constant_fit;

  rep.check("max quadratic form", r.max_quadratic_form, 0.0, Bound::below);
  rep.check("|form| of a constant-mode h", std::abs(r.constant_mode_form), cfg.tol("constant_mode"));
  rep.check("|F| of a constant-mode h", std::abs(r.constant_mode_F), cfg.tol("constant_mode"));
  rep.check("min cubic remainder order", r.min_order, cfg.tol("min_order"), Bound::at_least);
}

void secondvar(const ExperimentConfig& cfg, Report& rep) {
  const Grid grid(cfg.n, cfg.resolution);
  const MetricField flat = MetricField::flat(grid);
  const ScalarField one(grid, 1.0);
  auto rows = per_seed<std::vector<double>>(cfg, [&](std::uint64_t s) {
    SymTensor2Field h =
        project_divergence_free(flat, random_sym2(grid, {cfg.max_mode, 1.0, 40 + s})).h_df;
    h *= 1.0 / h.max_abs();
    const double form = quadratic_form_flat(flat, h);
    auto F = [&](double t) {
      SymTensor2Field m = flat.lower();
      m.add_scaled(t, h);
      return functional_F(MetricField(std::move(m)), one, flat.volume_density());
    };
    const double F0 = F(0.0);
    auto d2 = [&](double t) { return (F(t) - 2.0 * F0 + F(-t)) / (t * t); };
    const double t = cfg.step;
    const double fd = (4.0 * d2(t / 2) - d2(t)) / 3.0;
    return std::vector<double>{form, fd, std::abs(fd - form) / std::abs(form)};
  });
  fill(rep, cfg, {"seed", "quadratic_form", "nested_fd", "relative"}, rows);
  rep.check("max |form - nested FD| / |form|", column_max(rows, 2), cfg.tol("relative"));
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  Report rep(cfg);
  if (cfg.command != Command::models) rep.set_grid(cfg.n, cfg.resolution, cfg.eval_resolution);
  switch (cfg.command) {
    case Command::verify_adjoint: verify_adjoint(cfg, rep); break;
    case Command::verify_gamma_fd: verify_gamma_fd(cfg, rep); break;
    case Command::verify_trace: verify_trace(cfg, rep); break;
    case Command::verify_conformal: verify_conformal(cfg, rep); break;
    case Command::verify_diffeo: verify_diffeo(cfg, rep); break;
    case Command::verify_decomposition: verify_decomposition(cfg, rep); break;
    case Command::gbc: gbc(cfg, rep); break;
    case Command::models: models(cfg, rep); break;
    case Command::prescribe: prescribe(cfg, rep); break;
    case Command::rigidity: rigidity(cfg, rep); break;
    case Command::secondvar: secondvar(cfg, rep); break;
  }
  return rep;
}

}  // namespace qlab::cli
