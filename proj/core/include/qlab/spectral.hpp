#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "qlab/aligned.hpp"
#include "qlab/field.hpp"
#include "qlab/grid.hpp"

namespace qlab {

/// Real-to-half-complex discrete Fourier transform for one grid shape.
///
/// Instances are cached per (resolution, period) and shared; all methods are
/// const and safe to call concurrently.
class SpectralTransform {
 public:
  static const SpectralTransform& for_grid(const Grid& grid);

  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const Grid& grid() const { return grid_; }
  std::size_t spectral_size() const { return spectral_size_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Normalised inverse; `in` is used as scratch and overwritten.
  void inverse(std::span<std::complex<double>> in, std::span<double> out) const;
  /// Same without the 1/N factor.
  void inverse_unnormalized(std::span<std::complex<double>> in, std::span<double> out) const;

  /// Angular wavenumber along `axis` for each spectral index. The Nyquist
  /// mode is mapped to zero so odd derivatives stay real.
  std::span<const double> wavenumber(int axis) const { return k_[axis]; }
  /// Signed integer mode along `axis` for each spectral index.
  std::span<const int> mode(int axis) const { return m_[axis]; }
  /// Euclidean norm of the integer mode vector.
  double mode_norm(std::size_t q) const;
  /// Multiplicity of spectral index q in a full-spectrum sum (1 or 2).
  int hermitian_weight(std::size_t q) const { return weight_[q]; }

 private:
  explicit SpectralTransform(const Grid& grid);

  Grid grid_;
  std::size_t spectral_size_ = 0;
  // SIMD plans for aligned arrays and fallbacks for anything else.
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
  void* plan_forward_unaligned_ = nullptr;
  void* plan_inverse_unaligned_ = nullptr;
  std::vector<std::vector<double>> k_;
  std::vector<std::vector<int>> m_;
  std::vector<int> weight_;
};

/// Fourier coefficients of one real component, reusable for any number of
/// derivatives.
class ComponentSpectrum {
 public:
  ComponentSpectrum(const Grid& grid, std::span<const double> values);

  const SpectralTransform& transform() const { return *t_; }
  std::span<const std::complex<double>> coefficients() const { return coeffs_; }

  /// Mixed partial derivative along the listed axes (empty list = identity).
  void derivative(std::initializer_list<int> axes, std::span<double> out) const;
  void derivative(std::span<const int> axes, std::span<double> out) const;
  /// Multiplies each coefficient by symbol(q) and synthesises the result.
  void apply(const std::function<std::complex<double>(std::size_t)>& symbol,
             std::span<double> out) const;

 private:
  const SpectralTransform* t_;
  AlignedVector<std::complex<double>> coeffs_;
};

/// Spectral derivative of the trigonometric interpolant along `axis`.
ScalarField partial_derivative(const ScalarField& f, int axis);
/// Same, applied to every component of an arbitrary field.
template <class F>
F partial_derivative_components(const F& f, int axis) {
  F out = f;
  for (int c = 0; c < f.components(); ++c)
    ComponentSpectrum(f.grid(), f.component(c)).derivative({axis}, out.component(c));
  return out;
}

/// All first partials d_a f, a = 0..n-1, with a single forward transform.
std::vector<ScalarField> gradient_components(const ScalarField& f);

/// Trigonometric interpolation onto a grid with the same periods and at least
/// as many points per axis. Exact for data without Nyquist content, which is
/// discarded. Throws std::invalid_argument otherwise.
void prolong(std::span<const double> coarse, const Grid& coarse_grid, std::span<double> fine,
             const Grid& fine_grid);
ScalarField prolong(const ScalarField& f, const Grid& fine);
VectorField prolong(const VectorField& f, const Grid& fine);
SymTensor2Field prolong(const SymTensor2Field& f, const Grid& fine);
MetricField prolong(const MetricField& g, const Grid& fine);

/// Largest |coefficient| among modes whose integer-mode norm exceeds
/// `max_mode`, normalised so a unit-amplitude wave has coefficient 1/2.
double spectral_tail(std::span<const double> values, const Grid& grid, double max_mode);

}  // namespace qlab
