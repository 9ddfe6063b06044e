#pragma once

#include <string>
#include <vector>

#include "qlab/constants.hpp"
#include "qlab/curvature.hpp"
#include "qlab/field.hpp"
#include "qlab/geometry.hpp"

namespace qlab {

/// Curvature data of a fixed metric, shared by every variational operator
/// evaluated at that metric.
class Background {
 public:
  explicit Background(MetricField g);

  const Geometry& geometry() const { return geo_; }
  const MetricField& metric() const { return geo_.metric(); }
  const Grid& grid() const { return geo_.grid(); }
  int dim() const { return geo_.dim(); }
  const Constants& constants() const { return c_; }
  const Riemann4& riemann() const { return rm_; }
  const SymTensor2Field& ricci() const { return rc_.ricci; }
  const ScalarField& scalar() const { return rc_.scalar; }
  const VectorField& dR() const { return dR_; }
  const SymTensor2Field& hessian_R() const { return hessR_; }
  const ScalarField& laplacian_R() const { return lapR_; }
  const ScalarField& q() const { return q_; }
  /// Symmetric Ric x Ric.
  const SymTensor2Field& ric_x_ric() const { return ric_x_ric_; }
  /// Rm . Ric.
  const SymTensor2Field& rm_dot_ric() const { return rm_dot_ric_; }

 private:
  Geometry geo_;
  Constants c_;
  Riemann4 rm_;
  RicciCurvature rc_;
  VectorField dR_;
  SymTensor2Field hessR_;
  ScalarField lapR_;
  ScalarField q_;
  SymTensor2Field ric_x_ric_;
  SymTensor2Field rm_dot_ric_;
};

struct ScalarLinearization {
  SymTensor2Field ricci;     // Ric'
  ScalarField scalar;        // R'
  ScalarField laplacian_R;   // (Delta R)'
};

/// First variations of Ric, R and Delta R along h.
ScalarLinearization linearize_scalar(const Background& bg, const SymTensor2Field& h);

/// Gamma_g h = DQ_g . h.
ScalarField gamma(const Background& bg, const SymTensor2Field& h);

/// L^2(dv_g)-formal adjoint of gamma.
SymTensor2Field gamma_star(const Background& bg, const ScalarField& f);

struct TraceIdentity {
  ScalarField trace;   // tr_g Gamma*_g f
  ScalarField rhs;     // 1/2 (P f - (n+4)/2 Q f)
  double residual = 0; // sup |trace - rhs|
  double scale = 0;    // max(sup |trace|, sup |rhs|)
};

TraceIdentity trace_gamma_star(const Background& bg, const ScalarField& f);

struct SecondVariationOptions {
  /// Step of the central differences producing Ric'' and R''.
  double epsilon = 1e-3;
  /// One level of Richardson extrapolation (steps epsilon and epsilon / 2).
  bool richardson = true;
};

/// d^2/dt^2 Q(g + t h) at t = 0, with Ric'' and R'' obtained by central
/// differences of the first-variation operators along g + t h.
ScalarField second_variation_q(const Background& bg, const SymTensor2Field& h,
                               const SecondVariationOptions& opts = {});

/// int Q_g f dv against a frozen density (normally the background sqrt(det g)).
double functional_F(const MetricField& g, const ScalarField& f, const ScalarField& density);

/// -2 alpha int |Delta tr h|^2 + B/2 int |Delta h0|^2 at a constant metric,
/// h0 the traceless part. Throws std::invalid_argument when
/// sup |delta h| exceeds `divergence_tol` (pass a negative tolerance to skip
/// the check) or when g is not constant.
double quadratic_form_flat(const MetricField& gbar, const SymTensor2Field& h,
                           double divergence_tol = 1e-10);

/// Convergence of a finite-difference oracle between two step sizes.
struct FdConvergence {
  double eps_coarse = 0;
  double eps_fine = 0;
  double err_coarse = 0;
  double err_fine = 0;
  double order = 0;
};

FdConvergence make_convergence(double eps_coarse, double err_coarse, double eps_fine,
                               double err_fine);

/// Central difference of Q along h compared with gamma in sup-norm.
FdConvergence fd_check_gamma(const Background& bg, const SymTensor2Field& h,
                             double eps_coarse = 1e-2, double eps_fine = 1e-3);
/// Central difference of R along h compared with R'.
FdConvergence fd_check_scalar(const Background& bg, const SymTensor2Field& h,
                              double eps_coarse = 1e-2, double eps_fine = 1e-3);
/// Second central difference of Q along h compared with second_variation_q.
FdConvergence fd_check_second_variation(const Background& bg, const SymTensor2Field& h,
                                        double eps_coarse = 2e-2, double eps_fine = 1e-2);

/// Summary of one adjointness experiment.
struct AdjointCheck {
  double lhs = 0;       // int f Gamma h dv_g
  double rhs = 0;       // int <Gamma* f, h> dv_g
  double scale = 0;     // |f| |Gamma h| + |Gamma* f| |h| (L^2(dv_g) norms)
  double relative = 0;  // |lhs - rhs| / scale
};

AdjointCheck adjoint_check(const Background& bg, const ScalarField& f, const SymTensor2Field& h);

/// Outcome record for the variational identities, serialised by the CLI.
struct VariationReport {
  std::string name;
  double value = 0;
  double residual = 0;
  double scale = 0;
  std::vector<FdConvergence> convergence;
};

/// L^2(dv) norm helpers.
double l2_norm(const ScalarField& f, const ScalarField& density);
double l2_norm(const MetricField& g, const SymTensor2Field& h, const ScalarField& density);

}  // namespace qlab
