#pragma once

#include "qlab/constants.hpp"
#include "qlab/curvature.hpp"
#include "qlab/field.hpp"
#include "qlab/geometry.hpp"

namespace qlab {

/// Q = A dR + B |Ric|^2 + C R^2 assembled from precomputed curvature.
ScalarField q_from_curvature(const Geometry& geo, const SymTensor2Field& ric,
                             const ScalarField& scalar);
ScalarField q_curvature(const Geometry& geo);
ScalarField q_curvature(const MetricField& g);

/// P f = D^2 f - div((a R g + b Ric) df) + (n-4)/2 Q f.
ScalarField paneitz(const Geometry& geo, const SymTensor2Field& ric, const ScalarField& scalar,
                    const ScalarField& q, const ScalarField& f);
ScalarField paneitz(const Geometry& geo, const ScalarField& f);

struct ConformalOptions {
  /// Smallest admissible value of u in the n != 4 branch.
  double positivity_floor = 1e-6;
};

/// n = 4: e^{2u} g. Otherwise u^{4/(n-4)} g, which requires u > floor.
MetricField conformal_metric(const MetricField& g, const ScalarField& u,
                             const ConformalOptions& opts = {});

/// Right-hand side of the conformal law for Q:
///   n = 4:  e^{-4u} (P u + Q),
///   n != 4: 2/(n-4) u^{-(n+4)/(n-4)} P u.
/// Throws std::domain_error when u <= floor somewhere in the n != 4 branch.
ScalarField conformal_q(const MetricField& g, const ScalarField& u,
                        const ConformalOptions& opts = {});

/// Right-hand side of the conformal law for P applied to phi:
///   n = 4:  e^{-4u} P phi,
///   n != 4: u^{-(n+4)/(n-4)} P (u phi).
ScalarField conformal_paneitz(const MetricField& g, const ScalarField& u, const ScalarField& phi,
                              const ConformalOptions& opts = {});

struct ConformalCheck {
  double q_residual = 0;  // sup |Q(g~) - law|
  double p_residual = 0;  // sup |P(g~) phi - law|
  double q_scale = 0;     // sup |Q(g~)|
  double p_scale = 0;     // sup |P(g~) phi|
};

/// Compares both laws with the direct pipeline on the transformed metric.
ConformalCheck conformal_paneitz_check(const MetricField& g, const ScalarField& u,
                                       const ScalarField& phi, const ConformalOptions& opts = {});

}  // namespace qlab
