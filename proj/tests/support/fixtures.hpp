#pragma once

#include <cstdint>

#include "qlab/field.hpp"

namespace qlab::testing {

/// One torus experiment: dimension, points per axis, metric perturbation.
/// Fields are drawn at `res`; `eval_res` is the grid they are spectrally
/// prolonged to before any nonlinear evaluation (equal to res: no padding).
struct TorusCase {
  int n = 3;
  int res = 24;
  double amp = 0.05;
  int max_mode = 3;
  int eval_res = 0;

  int evaluation_resolution() const { return eval_res > 0 ? eval_res : res; }
  TorusCase nominal() const { return {n, res, amp, max_mode, res}; }
};

inline constexpr TorusCase kT3{3, 24, 0.05, 3, 48};
inline constexpr TorusCase kT4{4, 12, 0.05, 3, 28};

MetricField perturbed_metric(const TorusCase& c, std::uint64_t seed);
/// Unit-amplitude test function and direction, band-limited like the metric.
ScalarField test_function(const TorusCase& c, std::uint64_t seed);
SymTensor2Field test_direction(const TorusCase& c, std::uint64_t seed);
VectorField test_vector(const TorusCase& c, std::uint64_t seed, Variance v);

double sup_diff(const ScalarField& a, const ScalarField& b);
double sup_diff(const FieldData& a, const FieldData& b);

/// Q assembled from the full Riemann tensor with explicit index loops, sharing
/// nothing with the lean Ricci path used by q_curvature.
ScalarField q_reference(const MetricField& g);

}  // namespace qlab::testing
