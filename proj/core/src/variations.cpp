#include "qlab/variations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qlab/operators.hpp"
#include "qlab/q_paneitz.hpp"

namespace qlab {

namespace {

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
  return m;
}

MetricField shifted(const MetricField& g, double t, const SymTensor2Field& h) {
  SymTensor2Field m = g.lower();
  m.add_scaled(t, h);
  return MetricField(std::move(m));
}

void require_lower_sym(const SymTensor2Field& h, const Background& bg) {
  if (!(h.grid() == bg.grid())) throw std::invalid_argument("variation: grid mismatch");
  if (h.variance() != Variance::lower)
    throw std::invalid_argument("variation: h must have lower indices");
}

// Building blocks shared by the first-variation operators.
struct FirstVariationTerms {
  ScalarField trh;
  VectorField dtrh;
  VectorField delta_h;
  ScalarField delta2_h;
  ScalarField ric_dot_h;
  ScalarField lap_trh;
  SymTensor2Field hess_trh;
  SymTensor2Field lichnerowicz_h;
  SymTensor2Field sym_nabla_delta_h;

  FirstVariationTerms(const Background& bg, const SymTensor2Field& h)
      : trh(trace(bg.metric(), h)),
        dtrh(differential(trh)),
        delta_h(divergence_delta(bg.geometry(), h)),
        delta2_h(divergence_delta(bg.geometry(), delta_h)),
        ric_dot_h(dot(bg.metric(), bg.ricci(), h)),
        lap_trh(laplacian(bg.geometry(), trh)),
        hess_trh(hessian(bg.geometry(), trh)),
        lichnerowicz_h(lichnerowicz(bg.geometry(), bg.riemann(), bg.ricci(), h)),
        sym_nabla_delta_h(symmetrized_derivative(bg.geometry(), delta_h)) {}

  // R' = -Delta tr h + delta^2 h - Ric . h
  ScalarField scalar_variation() const {
    ScalarField r = delta2_h - lap_trh;
    r -= ric_dot_h;
    return r;
  }

  // d tr h + 2 delta h
  VectorField omega() const {
    VectorField w = dtrh;
    w.add_scaled(2.0, delta_h);
    return w;
  }
};

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

void load_sym(const FieldData& s, std::size_t p, int n, Mat& m) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m[i][j] = m[j][i] = s.at(sym_index(n, i, j), p);
}

}  // namespace

Background::Background(MetricField g)
    : geo_(std::move(g)),
      c_(qlab::constants(geo_.dim())),
      rm_(riemann_tensor(geo_)),
      rc_(ricci_from_riemann(geo_.metric(), rm_)),
      dR_(differential(rc_.scalar)),
      hessR_(hessian(geo_, rc_.scalar)),
      lapR_(trace(geo_.metric(), hessR_)),
      q_(geo_.grid()),
      ric_x_ric_(symmetrize(product_x(geo_.metric(), rc_.ricci, rc_.ricci))),
      rm_dot_ric_(rm_dot(geo_.metric(), rm_, rc_.ricci)) {
  q_ = c_.A_d * lapR_;
  q_.add_scaled(c_.B_d, dot(geo_.metric(), rc_.ricci, rc_.ricci));
  q_.add_scaled(c_.C_d, rc_.scalar * rc_.scalar);
}

ScalarLinearization linearize_scalar(const Background& bg, const SymTensor2Field& h) {
  require_lower_sym(h, bg);
  const FirstVariationTerms t(bg, h);
  ScalarLinearization out{SymTensor2Field(bg.grid(), Variance::lower), t.scalar_variation(),
                          ScalarField(bg.grid())};
  out.ricci = t.lichnerowicz_h + t.hess_trh;
  out.ricci.add_scaled(2.0, t.sym_nabla_delta_h);
  out.ricci *= -0.5;

  out.laplacian_R = laplacian(bg.geometry(), out.scalar);
  out.laplacian_R -= dot(bg.metric(), bg.hessian_R(), h);
  out.laplacian_R.add_scaled(0.5, dot(bg.metric(), bg.dR(), t.omega()));
  return out;
}

ScalarField gamma(const Background& bg, const SymTensor2Field& h) {
  require_lower_sym(h, bg);
  const auto& geo = bg.geometry();
  const auto& g = bg.metric();
  const auto& c = bg.constants();
  const auto& ric = bg.ricci();
  const FirstVariationTerms t(bg, h);

  // A ( -D^2 tr h + D delta^2 h - D(Ric.h) + 1/2 dR.(d tr h + 2 delta h) - hess R . h )
  ScalarField a = laplacian(geo, t.delta2_h) - laplacian(geo, t.lap_trh);
  a -= laplacian(geo, t.ric_dot_h);
  a.add_scaled(0.5, dot(g, bg.dR(), t.omega()));
  a -= dot(g, bg.hessian_R(), h);

  // -B ( Ric.Delta_L h + Ric.hess tr h + 2 Ric.nabla delta h + 2 (Ric x Ric).h )
  ScalarField b = dot(g, ric, t.lichnerowicz_h) + dot(g, ric, t.hess_trh);
  b.add_scaled(2.0, dot(g, ric, t.sym_nabla_delta_h));
  b.add_scaled(2.0, dot(g, bg.ric_x_ric(), h));

  // 2C R ( -Delta tr h + delta^2 h - Ric.h )
  const ScalarField r1 = t.scalar_variation();

  ScalarField out = c.A_d * a;
  out.add_scaled(-c.B_d, b);
  out.add_scaled(2.0 * c.C_d, bg.scalar() * r1);
  return out;
}

SymTensor2Field gamma_star(const Background& bg, const ScalarField& f) {
  if (!(f.grid() == bg.grid())) throw std::invalid_argument("gamma_star: grid mismatch");
  const auto& geo = bg.geometry();
  const auto& g = bg.metric();
  const auto& c = bg.constants();
  const auto& ric = bg.ricci();

  // A ( -g D^2 f + hess D f - Ric D f + 1/2 g delta(f dR) + nabla(f dR) - f hess R )
  const ScalarField lapf = laplacian(geo, f);
  const VectorField fdR = f * bg.dR();
  ScalarField trace_part = laplacian(geo, lapf);
  trace_part *= -1.0;
  trace_part.add_scaled(0.5, divergence_delta(geo, fdR));
  SymTensor2Field a = hessian(geo, lapf);
  a -= lapf * ric;
  a += metric_times(g, trace_part);
  a += symmetrized_derivative(geo, fdR);
  a -= f * bg.hessian_R();

  // -B ( D(f Ric) + 2 f Rm.Ric + g delta^2(f Ric) + 2 nabla delta(f Ric) )
  const SymTensor2Field fric = f * ric;
  const VectorField delta_fric = divergence_delta(geo, fric);
  SymTensor2Field b = laplacian(geo, fric);
  b.add_scaled(2.0, f * bg.rm_dot_ric());
  b += metric_times(g, divergence_delta(geo, delta_fric));
  b.add_scaled(2.0, symmetrized_derivative(geo, delta_fric));

  // -2C ( g D(fR) - hess(fR) + f R Ric )
  const ScalarField fR = f * bg.scalar();
  SymTensor2Field cc = metric_times(g, laplacian(geo, fR));
  cc -= hessian(geo, fR);
  cc += fR * ric;

  SymTensor2Field out = c.A_d * a;
  out.add_scaled(-c.B_d, b);
  out.add_scaled(-2.0 * c.C_d, cc);
  return out;
}

TraceIdentity trace_gamma_star(const Background& bg, const ScalarField& f) {
  const int n = bg.dim();
  TraceIdentity out{trace(bg.metric(), gamma_star(bg, f)), ScalarField(bg.grid()), 0.0, 0.0};
  out.rhs = paneitz(bg.geometry(), bg.ricci(), bg.scalar(), bg.q(), f);
  out.rhs.add_scaled(-0.5 * (n + 4), bg.q() * f);
  out.rhs *= 0.5;
  out.residual = sup_diff(out.trace, out.rhs);
  out.scale = std::max(out.trace.max_abs(), out.rhs.max_abs());
  return out;
}

namespace {

struct SecondOrderInner {
  SymTensor2Field ricci;  // Ric''
  ScalarField scalar;     // R''
};

SecondOrderInner central_inner(const Background& bg, const SymTensor2Field& h, double eps) {
  const ScalarLinearization plus = linearize_scalar(Background(shifted(bg.metric(), eps, h)), h);
  const ScalarLinearization minus = linearize_scalar(Background(shifted(bg.metric(), -eps, h)), h);
  SecondOrderInner out{plus.ricci - minus.ricci, plus.scalar - minus.scalar};
  out.ricci *= 1.0 / (2.0 * eps);
  out.scalar *= 1.0 / (2.0 * eps);
  return out;
}

// tr(H R H R) with H = g^{-1} h g^{-1}, i.e. h^{ik} h^{jl} R_{ij} R_{kl}.
ScalarField trace_hRhR(const MetricField& g, const SymTensor2Field& h, const SymTensor2Field& ric) {
  const int n = g.dim();
  const SymTensor2Field hu = raise(g, h);
  ScalarField out(g.grid());
  Mat H{}, R{}, M{};
  for (std::size_t p = 0; p < g.points(); ++p) {
    load_sym(hu, p, n, H);
    load_sym(ric, p, n, R);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += H[i][k] * R[k][j];
        M[i][j] = s;
      }
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += M[i][j] * M[j][i];
    out[p] = s;
  }
  return out;
}

}  // namespace

ScalarField second_variation_q(const Background& bg, const SymTensor2Field& h,
                               const SecondVariationOptions& opts) {
  require_lower_sym(h, bg);
  if (h.max_abs() == 0.0) return ScalarField(bg.grid());
  const int n = bg.dim();
  const auto& geo = bg.geometry();
  const auto& g = bg.metric();
  const auto& c = bg.constants();
  const auto& ric = bg.ricci();

  SecondOrderInner inner = central_inner(bg, h, opts.epsilon);
  if (opts.richardson) {
    const SecondOrderInner fine = central_inner(bg, h, 0.5 * opts.epsilon);
    inner.ricci = (4.0 / 3.0) * fine.ricci - (1.0 / 3.0) * inner.ricci;
    inner.scalar = (4.0 / 3.0) * fine.scalar - (1.0 / 3.0) * inner.scalar;
  }

  const FirstVariationTerms t(bg, h);
  const ScalarLinearization first = linearize_scalar(bg, h);
  const VectorField omega = t.omega();
  const SymTensor2Field hxh = symmetrize(product_x(g, h, h));

  // A-bracket
  ScalarField a = laplacian(geo, inner.scalar);
  a.add_scaled(2.0, dot(g, bg.hessian_R(), hxh));
  a.add_scaled(-2.0, dot(g, h, hessian(geo, first.scalar)));
  a += dot(g, omega, differential(first.scalar));
  {
    // h^{ij} (2 nabla_i h_{jl} - nabla_l h_{ij}) nabla^l R  -  h^{kl} omega_k d_l R
    const SymTensorGradient nh = covariant_derivative(geo, h);
    const SymTensor2Field hu = raise(g, h);
    const VectorField dR_up = raise(g, bg.dR());
    Mat H{};
    for (std::size_t p = 0; p < g.points(); ++p) {
      load_sym(hu, p, n, H);
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (H[i][j] == 0.0) continue;
          for (int l = 0; l < n; ++l)
            s += H[i][j] * (2.0 * nh(i, j, l, p) - nh(l, i, j, p)) * dR_up(l, p);
        }
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s -= H[k][l] * omega(k, p) * bg.dR()(l, p);
      a[p] += s;
    }
  }

  // B-bracket
  ScalarField b = 4.0 * dot(g, bg.ric_x_ric(), hxh);
  b.add_scaled(2.0, trace_hRhR(g, h, ric));
  b.add_scaled(-8.0, dot(g, first.ricci, product_x(g, ric, h)));
  b.add_scaled(2.0, dot(g, inner.ricci, ric));
  b.add_scaled(2.0, dot(g, first.ricci, first.ricci));

  // C-bracket
  ScalarField cc = 2.0 * (bg.scalar() * inner.scalar);
  cc.add_scaled(2.0, first.scalar * first.scalar);

  ScalarField out = c.A_d * a;
  out.add_scaled(c.B_d, b);
  out.add_scaled(c.C_d, cc);
  return out;
}

double functional_F(const MetricField& g, const ScalarField& f, const ScalarField& density) {
  return integrate(q_curvature(g) * f, density);
}

double quadratic_form_flat(const MetricField& gbar, const SymTensor2Field& h,
                           double divergence_tol) {
  if (!gbar.is_constant(1e-12))
    throw std::invalid_argument("quadratic_form_flat: background metric must be constant");
  if (!(h.grid() == gbar.grid())) throw std::invalid_argument("quadratic_form_flat: grid mismatch");
  const Geometry geo(gbar);
  if (divergence_tol >= 0.0) {
    const double div = divergence_delta(geo, h).max_abs();
    if (div > divergence_tol)
      throw std::invalid_argument("quadratic_form_flat: h is not divergence free (sup |delta h| = " +
                                  std::to_string(div) + ")");
  }
  const Constants c = constants(gbar.dim());
  const auto& dv = gbar.volume_density();
  const ScalarField lap_tr = laplacian(geo, trace(gbar, h));
  const SymTensor2Field lap_h0 = laplacian(geo, traceless_part(gbar, h));
  return -2.0 * c.alpha_d * integrate(lap_tr * lap_tr, dv) +
         0.5 * c.B_d * integrate(dot(gbar, lap_h0, lap_h0), dv);
}

FdConvergence make_convergence(double eps_coarse, double err_coarse, double eps_fine,
                               double err_fine) {
  FdConvergence out{eps_coarse, eps_fine, err_coarse, err_fine, 0.0};
  if (err_coarse > 0.0 && err_fine > 0.0)
    out.order = std::log(err_coarse / err_fine) / std::log(eps_coarse / eps_fine);
  else
    out.order = std::numeric_limits<double>::infinity();
  return out;
}

FdConvergence fd_check_gamma(const Background& bg, const SymTensor2Field& h, double eps_coarse,
                             double eps_fine) {
  const ScalarField exact = gamma(bg, h);
  auto err = [&](double eps) {
    ScalarField d = q_curvature(shifted(bg.metric(), eps, h)) -
                    q_curvature(shifted(bg.metric(), -eps, h));
    d *= 1.0 / (2.0 * eps);
    return sup_diff(d, exact);
  };
  return make_convergence(eps_coarse, err(eps_coarse), eps_fine, err(eps_fine));
}

FdConvergence fd_check_scalar(const Background& bg, const SymTensor2Field& h, double eps_coarse,
                              double eps_fine) {
  const ScalarField exact = linearize_scalar(bg, h).scalar;
  auto err = [&](double eps) {
    ScalarField d = ricci_curvature(Geometry(shifted(bg.metric(), eps, h))).scalar -
                    ricci_curvature(Geometry(shifted(bg.metric(), -eps, h))).scalar;
    d *= 1.0 / (2.0 * eps);
    return sup_diff(d, exact);
  };
  return make_convergence(eps_coarse, err(eps_coarse), eps_fine, err(eps_fine));
}

FdConvergence fd_check_second_variation(const Background& bg, const SymTensor2Field& h,
                                        double eps_coarse, double eps_fine) {
  const ScalarField exact = second_variation_q(bg, h);
  const ScalarField q0 = q_curvature(bg.metric());
  auto err = [&](double eps) {
    ScalarField d = q_curvature(shifted(bg.metric(), eps, h)) +
                    q_curvature(shifted(bg.metric(), -eps, h));
    d.add_scaled(-2.0, q0);
    d *= 1.0 / (eps * eps);
    return sup_diff(d, exact);
  };
  return make_convergence(eps_coarse, err(eps_coarse), eps_fine, err(eps_fine));
}

double l2_norm(const ScalarField& f, const ScalarField& density) {
  return std::sqrt(std::max(0.0, integrate(f * f, density)));
}

double l2_norm(const MetricField& g, const SymTensor2Field& h, const ScalarField& density) {
  return std::sqrt(std::max(0.0, integrate(dot(g, h, h), density)));
}

AdjointCheck adjoint_check(const Background& bg, const ScalarField& f, const SymTensor2Field& h) {
  const auto& g = bg.metric();
  const auto& dv = g.volume_density();
  const ScalarField gh = gamma(bg, h);
  const SymTensor2Field gs = gamma_star(bg, f);
  AdjointCheck out;
  out.lhs = integrate(f * gh, dv);
  out.rhs = integrate(dot(g, gs, h), dv);
  out.scale = l2_norm(f, dv) * l2_norm(gh, dv) + l2_norm(g, gs, dv) * l2_norm(g, h, dv);
  out.relative = out.scale > 0.0 ? std::abs(out.lhs - out.rhs) / out.scale : 0.0;
  return out;
}

}  // namespace qlab
