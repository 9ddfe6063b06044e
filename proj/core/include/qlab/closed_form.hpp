#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qlab/constants.hpp"

namespace qlab {

enum class Model { sphere, hyperbolic, ricci_flat };

std::string_view to_string(Model m);

/// Einstein space form with Ric = (R/n) g and constant R. Nothing here is
/// gridded: every identity reduces to rational arithmetic in n and R.
struct EinsteinBackground {
  int n = 0;
  Rational R;
  Model model = Model::ricci_flat;

  /// Throws std::invalid_argument when n < 3 or the sign of R disagrees with
  /// the model.
  EinsteinBackground(int n, Rational R, Model model);

  static EinsteinBackground unit_sphere(int n);      // R = n(n-1)
  static EinsteinBackground unit_hyperbolic(int n);  // R = -n(n-1)
  static EinsteinBackground ricci_flat(int n);

  /// Sectional curvature R / (n(n-1)).
  Rational sectional() const;
  /// Sphere radius sqrt(n(n-1)/R); empty for the other models.
  std::optional<double> radius() const;
};

enum class PotentialKind { constant, first_eigenfunction, coordinate_function };

std::string_view to_string(PotentialKind k);

/// A potential f with hess f = kappa f g, so Delta f = mu f with mu = n kappa.
struct ModelPotential {
  PotentialKind kind = PotentialKind::constant;
  Rational kappa;
  Rational mu;

  /// Constant on any model; first eigenfunction on spheres (kappa = -R/(n(n-1)),
  /// mu = -lambda_1); restricted coordinate function on hyperbolic space
  /// (kappa = -R/(n(n-1)) > 0). Throws std::invalid_argument for a pair that
  /// does not exist.
  static ModelPotential make(const EinsteinBackground& bg, PotentialKind kind);
};

/// The canonical kernel element of each model.
ModelPotential canonical_potential(const EinsteinBackground& bg);

/// (B/n + C) R^2.
Rational einstein_q(const EinsteinBackground& bg);

struct SingularReport {
  Rational phi;             // Delta f + Lambda R f = phi f
  Rational hessian_residual;  // coefficient of hess(phi) + R/(n(n-1)) g phi
  Rational gamma_star;      // coefficient of Gamma* f = c f g, expanded term by term
  Rational reduced;         // A (n kappa + Lambda R)(kappa (1 - n) - R/n)
  bool singular() const { return gamma_star == 0; }
};

SingularReport verify_q_singular(const EinsteinBackground& bg, const ModelPotential& pot);

struct SphereSpectral {
  int n = 0;
  Rational lambda1;         // R/(n-1)
  Rational eigenvalue;      // P f / f
  Rational target;          // (n+4)/2 Q
  Rational residual;        // eigenvalue - target
  int kernel_dimension = 0; // n + 1
};

/// Pf/f for a first eigenfunction on the sphere of scalar curvature R.
SphereSpectral sphere_spectral_check(int n, const Rational& R);
SphereSpectral sphere_spectral_check(int n);

struct VacuumStatic {
  Rational coefficient;     // hess f - (Ric - R/(n-1) g) f = coefficient f g
  Rational einstein_trace;  // n |Ric - R/n g|^2
};

VacuumStatic verify_vacuum_static(const EinsteinBackground& bg, const ModelPotential& pot);

struct NonsingularCheck {
  Rational lambda_R;          // Lambda R
  Rational ricci_bound;       // R/(n-1)
  bool first_exclusion = false;   // R/(n-1) is not in the spectrum
  bool second_exclusion = false;  // Lambda R is not in the spectrum
  bool hypothesis_holds() const { return first_exclusion && second_exclusion; }
};

/// For R < 0 and a supplied list of eigenvalues of -Delta. Throws
/// std::invalid_argument for R >= 0 or a negative entry.
NonsingularCheck nonsingular_negative_einstein_check(int n, const Rational& R,
                                                     const std::vector<Rational>& spectrum);

/// Volume of the round sphere S^n of radius r.
double sphere_volume(int n, double r = 1.0);

struct GaussBonnetS4 {
  Rational q;         // Q of the unit S^4
  double volume = 0;  // 8 pi^2 / 3
  double integral = 0;
  double expected = 0;  // 8 pi^2 chi, chi = 2
};

GaussBonnetS4 gauss_bonnet_s4();

}  // namespace qlab
