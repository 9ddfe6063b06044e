#include "qlab/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qlab {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::sphere: return "sphere";
    case Model::hyperbolic: return "hyperbolic";
    case Model::ricci_flat: return "ricci_flat";
  }
  return "?";
}

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::constant: return "constant";
    case PotentialKind::first_eigenfunction: return "first_eigenfunction";
    case PotentialKind::coordinate_function: return "coordinate_function";
  }
  return "?";
}

EinsteinBackground::EinsteinBackground(int n_, Rational R_, Model model_)
    : n(n_), R(std::move(R_)), model(model_) {
  if (n < 3) throw std::invalid_argument("einstein background: n must be at least 3");
  const bool ok = (model == Model::sphere && R > 0) || (model == Model::hyperbolic && R < 0) ||
                  (model == Model::ricci_flat && R == 0);
  if (!ok)
    throw std::invalid_argument("einstein background: sign of R (" + to_string(R) +
                                ") does not match model " + std::string(to_string(model)));
}

EinsteinBackground EinsteinBackground::unit_sphere(int n) {
  return {n, Rational(n * (n - 1)), Model::sphere};
}
EinsteinBackground EinsteinBackground::unit_hyperbolic(int n) {
  return {n, Rational(-n * (n - 1)), Model::hyperbolic};
}
EinsteinBackground EinsteinBackground::ricci_flat(int n) { return {n, Rational(0), Model::ricci_flat}; }

Rational EinsteinBackground::sectional() const { return R / (n * (n - 1)); }

std::optional<double> EinsteinBackground::radius() const {
  if (model != Model::sphere) return std::nullopt;
  return std::sqrt(n * (n - 1) / to_double(R));
}

ModelPotential ModelPotential::make(const EinsteinBackground& bg, PotentialKind kind) {
  ModelPotential p;
  p.kind = kind;
  switch (kind) {
    case PotentialKind::constant:
      p.kappa = 0;
      break;
    case PotentialKind::first_eigenfunction:
      if (bg.model != Model::sphere)
        throw std::invalid_argument("first eigenfunction potential needs the sphere model");
      p.kappa = -bg.sectional();
      break;
    case PotentialKind::coordinate_function:
      if (bg.model != Model::hyperbolic)
        throw std::invalid_argument("coordinate function potential needs the hyperbolic model");
      p.kappa = -bg.sectional();
      break;
  }
  p.mu = bg.n * p.kappa;
  return p;
}

ModelPotential canonical_potential(const EinsteinBackground& bg) {
  switch (bg.model) {
    case Model::sphere: return ModelPotential::make(bg, PotentialKind::first_eigenfunction);
    case Model::hyperbolic: return ModelPotential::make(bg, PotentialKind::coordinate_function);
    case Model::ricci_flat: break;
  }
  return ModelPotential::make(bg, PotentialKind::constant);
}

Rational einstein_q(const EinsteinBackground& bg) {
  const Constants c = constants(bg.n);
  return (c.B / bg.n + c.C) * bg.R * bg.R;
}

SingularReport verify_q_singular(const EinsteinBackground& bg, const ModelPotential& pot) {
  const Constants c = constants(bg.n);
  const int n = bg.n;
  const Rational& R = bg.R;
  const Rational& k = pot.kappa;
  if (pot.mu != n * k) throw std::invalid_argument("q-singular check: mu must equal n kappa");

  SingularReport out;
  out.phi = pot.mu + c.Lambda * R;
  out.hessian_residual = out.phi * (k + R / (n * (n - 1)));

  // hess f = k f g, Ric = R/n g, dR = 0, Rm.Ric = R^2/n^2 g.
  const Rational lap = n * k;                 // Delta f / f
  const Rational a_part = -lap * lap + lap * k - (R / n) * lap;
  const Rational b_part = (R / n) * lap       // Delta(f Ric)
                          + 2 * R * R / (n * n)  // 2 f Rm.Ric
                          + (R / n) * lap     // g delta^2(f Ric)
                          - 2 * (R / n) * k;  // 2 sym nabla delta(f Ric)
  const Rational c_part = R * lap - R * k + R * R / n;
  out.gamma_star = c.A * a_part - c.B * b_part - 2 * c.C * c_part;
  out.reduced = c.A * out.phi * (k * (1 - n) - R / n);
  return out;
}

SphereSpectral sphere_spectral_check(int n, const Rational& R) {
  const EinsteinBackground bg(n, R, Model::sphere);
  const Constants c = constants(n);
  SphereSpectral s;
  s.n = n;
  s.lambda1 = R / (n - 1);
  const Rational q = einstein_q(bg);
  // P f = D^2 f + delta((a R + b R/n) df) + (n-4)/2 Q f with Delta f = -lambda1 f.
  s.eigenvalue = s.lambda1 * s.lambda1 + (c.a * R + c.b * R / n) * s.lambda1 + Rational(n - 4, 2) * q;
  s.target = Rational(n + 4, 2) * q;
  s.residual = s.eigenvalue - s.target;
  s.kernel_dimension = n + 1;
  return s;
}

SphereSpectral sphere_spectral_check(int n) {
  return sphere_spectral_check(n, Rational(n * (n - 1)));
}

VacuumStatic verify_vacuum_static(const EinsteinBackground& bg, const ModelPotential& pot) {
  const int n = bg.n;
  const Rational& R = bg.R;
  VacuumStatic v;
  v.coefficient = pot.kappa - (R / n - R / (n - 1));
  const Rational traceless = R / n - R / n;  // Ric - R/n g = traceless * g
  v.einstein_trace = n * (n * traceless * traceless);
  return v;
}

NonsingularCheck nonsingular_negative_einstein_check(int n, const Rational& R,
                                                     const std::vector<Rational>& spectrum) {
  if (!(R < 0)) throw std::invalid_argument("nonsingular check: R must be negative");
  const Constants c = constants(n);
  NonsingularCheck out;
  out.lambda_R = c.Lambda * R;
  out.ricci_bound = R / (n - 1);
  out.first_exclusion = true;
  out.second_exclusion = true;
  for (const Rational& s : spectrum) {
    if (s < 0) throw std::invalid_argument("nonsingular check: spectrum of -Delta is nonnegative");
    if (s == out.ricci_bound) out.first_exclusion = false;
    if (s == out.lambda_R) out.second_exclusion = false;
  }
  return out;
}

double sphere_volume(int n, double r) {
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h) * std::pow(r, n);
}

GaussBonnetS4 gauss_bonnet_s4() {
  GaussBonnetS4 g;
  g.q = einstein_q(EinsteinBackground::unit_sphere(4));
  g.volume = sphere_volume(4);
  g.integral = to_double(g.q) * g.volume;
  g.expected = 8.0 * std::numbers::pi * std::numbers::pi * 2.0;
  return g;
}

}  // namespace qlab
