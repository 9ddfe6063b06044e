#pragma once

#include <cstdint>

#include "qlab/field.hpp"

namespace qlab {

struct BandLimitedSpec {
  int max_mode = 2;        // integer-mode Euclidean cutoff
  double amplitude = 0.05;  // sup-norm over all components and points
  std::uint64_t seed = 0;
};

/// Random real trigonometric polynomials with every Fourier mode of integer
/// norm > max_mode exactly zero. Deterministic for a fixed seed; the result is
/// rescaled so its sup-norm equals the requested amplitude.
///
/// Throws std::invalid_argument when 2 * max_mode >= resolution on any axis.
ScalarField random_scalar(const Grid& grid, const BandLimitedSpec& spec);
VectorField random_vector(const Grid& grid, const BandLimitedSpec& spec,
                          Variance variance = Variance::lower);
SymTensor2Field random_sym2(const Grid& grid, const BandLimitedSpec& spec,
                            Variance variance = Variance::lower);

/// Test-metric contract: identity plus a random symmetric perturbation.
MetricField random_perturbed_metric(const Grid& grid, const BandLimitedSpec& spec);

}  // namespace qlab
