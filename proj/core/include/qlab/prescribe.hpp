#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qlab/field.hpp"

namespace qlab {

struct Projection {
  SymTensor2Field h_df;  // divergence-free part
  VectorField X;         // covariant gauge field with h = h_df + L_X gbar
};

/// Splits h = h_df + L_X gbar with delta_gbar h_df = 0 at a constant metric.
/// X is obtained spectrally from -(Delta X + d div X) = delta h; its constant
/// Fourier mode is zero.
Projection project_divergence_free(const MetricField& gbar, const SymTensor2Field& h);

/// Conformal solution h = phi gbar of gamma(gbar, h) = psi at a constant
/// metric, i.e. 1/2 D^2 phi = psi with phi of zero mean.
/// Throws std::invalid_argument when psi has nonzero mean.
SymTensor2Field linear_solve_flat(const MetricField& gbar, const ScalarField& psi);

/// The scalar phi behind linear_solve_flat.
ScalarField conformal_potential_flat(const MetricField& gbar, const ScalarField& psi);

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 30;
  /// Largest sup |psi| handled directly; larger targets are rescaled with
  /// Q(g / r^2) = r^4 Q(g).
  double basin = 1e-2;
  /// Use the diffeomorphism direction to steer the mean of Q.
  bool mean_correction = true;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residuals;     // sup |Q_g - psi| per iterate, starting at g = gbar
  std::vector<double> mean_defects;  // mean of psi - Q_g against dv_gbar per iterate
  double mean_defect = 0;            // final value
  double accumulated_mean_defect = 0;
  /// Factor lambda with final metric = lambda * (metric solved at reduced amplitude).
  double scaling = 1.0;
  std::optional<MetricField> metric;
  std::optional<VectorField> gauge;  // sum of the vector fields X used in the diffeomorphism steps
};

/// Quasi-Newton iteration for Q_g = psi near the constant metric gbar.
SolveReport prescribe_q(const MetricField& gbar, const ScalarField& psi,
                        const SolveOptions& opts = {});

struct RigidityOptions {
  int trials = 100;
  int order_trials = 3;   // trials that also run the amplitude sweep
  double amplitude = 0.04;
  int halvings = 4;       // sweep amplitude, amplitude/2, ..., amplitude/2^halvings
  int max_mode = 2;
  std::uint64_t seed = 0;
};

struct RigidityTrial {
  double quadratic_form = 0;       // Q(h_dir) for the unit sup-norm direction
  double divergence = 0;           // sup |delta h_dir|
  std::vector<double> amplitudes;  // sweep t
  std::vector<double> remainders;  // F(gbar + t h) - t^2 Q(h) / 2
  std::vector<double> orders;      // log2 ratios of consecutive remainders
  double asymptotic_order = 0;     // order at the smallest halving
  double constant_fit = 0;         // max |E| / (|t h|_inf |hess(t h)|_2^2)
};

struct RigidityReport {
  std::vector<RigidityTrial> trials;
  double max_quadratic_form = 0;
  double min_order = 0;            // min asymptotic_order over the swept trials
  double constant_fit = 0;
  double constant_mode_form = 0;   // quadratic form of a constant-mode h
  double constant_mode_F = 0;      // F(gbar + constant h)
};

RigidityReport rigidity_experiment(const MetricField& gbar, const RigidityOptions& opts = {});

}  // namespace qlab
