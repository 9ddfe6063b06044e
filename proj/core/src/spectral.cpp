#include "qlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using CacheKey = std::pair<std::vector<int>, std::vector<double>>;

std::map<CacheKey, std::unique_ptr<SpectralTransform>>& cache() {
  static std::map<CacheKey, std::unique_ptr<SpectralTransform>> c;
  return c;
}

}  // namespace

const SpectralTransform& SpectralTransform::for_grid(const Grid& grid) {
  std::lock_guard lock(planner_mutex());
  CacheKey key{grid.resolution(), grid.period()};
  auto& c = cache();
  auto it = c.find(key);
  if (it == c.end())
    it = c.emplace(key, std::unique_ptr<SpectralTransform>(new SpectralTransform(grid))).first;
  return *it->second;
}

SpectralTransform::SpectralTransform(const Grid& grid) : grid_(grid) {
  const int n = grid.dim();
  const auto& res = grid.resolution();
  std::vector<int> cdims(res.begin(), res.end());
  cdims[n - 1] = res[n - 1] / 2 + 1;
  spectral_size_ = 1;
  for (int d : cdims) spectral_size_ *= static_cast<std::size_t>(d);

  k_.assign(n, std::vector<double>(spectral_size_));
  m_.assign(n, std::vector<int>(spectral_size_));
  weight_.assign(spectral_size_, 1);
  std::vector<std::size_t> cstride(n, 1);
  for (int a = n - 2; a >= 0; --a) cstride[a] = cstride[a + 1] * cdims[a + 1];
  for (std::size_t q = 0; q < spectral_size_; ++q) {
    for (int a = 0; a < n; ++a) {
      const int j = static_cast<int>((q / cstride[a]) % cdims[a]);
      const int N = res[a];
      const int m = (j <= N / 2) ? j : j - N;
      m_[a][q] = m;
      const double scale = 2.0 * std::numbers::pi / grid.period()[a];
      k_[a][q] = (2 * std::abs(m) == N) ? 0.0 : scale * m;
    }
    const int last = m_[n - 1][q];
    weight_[q] = (last == 0 || 2 * last == res[n - 1]) ? 1 : 2;
  }

  double* rbuf = fftw_alloc_real(grid.size());
  fftw_complex* cbuf = fftw_alloc_complex(spectral_size_);
  plan_forward_ = fftw_plan_dft_r2c(n, res.data(), rbuf, cbuf, FFTW_ESTIMATE);
  plan_inverse_ = fftw_plan_dft_c2r(n, res.data(), cbuf, rbuf, FFTW_ESTIMATE);
  plan_forward_unaligned_ =
      fftw_plan_dft_r2c(n, res.data(), rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inverse_unaligned_ =
      fftw_plan_dft_c2r(n, res.data(), cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!plan_forward_ || !plan_inverse_ || !plan_forward_unaligned_ || !plan_inverse_unaligned_)
    throw std::runtime_error("SpectralTransform: FFTW planning failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_unaligned_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_unaligned_));
}

void SpectralTransform::forward(std::span<const double> in,
                                std::span<std::complex<double>> out) const {
  if (in.size() != grid_.size() || out.size() != spectral_size_)
    throw std::invalid_argument("SpectralTransform::forward: size mismatch");
  // FFTW does not modify the input of an out-of-place r2c transform.
  auto* src = const_cast<double*>(in.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  const bool aligned = fftw_alignment_of(src) == 0 && fftw_alignment_of(reinterpret_cast<double*>(dst)) == 0;
  fftw_execute_dft_r2c(static_cast<fftw_plan>(aligned ? plan_forward_ : plan_forward_unaligned_),
                       src, dst);
}

void SpectralTransform::inverse(std::span<std::complex<double>> in, std::span<double> out) const {
  if (out.size() != grid_.size() || in.size() != spectral_size_)
    throw std::invalid_argument("SpectralTransform::inverse: size mismatch");
  inverse_unnormalized(in, out);
  const double norm = 1.0 / static_cast<double>(grid_.size());
  for (double& v : out) v *= norm;
}

void SpectralTransform::inverse_unnormalized(std::span<std::complex<double>> in,
                                             std::span<double> out) const {
  if (out.size() != grid_.size() || in.size() != spectral_size_)
    throw std::invalid_argument("SpectralTransform::inverse: size mismatch");
  auto* src = reinterpret_cast<fftw_complex*>(in.data());
  const bool aligned =
      fftw_alignment_of(reinterpret_cast<double*>(src)) == 0 && fftw_alignment_of(out.data()) == 0;
  fftw_execute_dft_c2r(static_cast<fftw_plan>(aligned ? plan_inverse_ : plan_inverse_unaligned_),
                       src, out.data());
}

double SpectralTransform::mode_norm(std::size_t q) const {
  double s = 0.0;
  for (const auto& m : m_) s += static_cast<double>(m[q]) * m[q];
  return std::sqrt(s);
}

ComponentSpectrum::ComponentSpectrum(const Grid& grid, std::span<const double> values)
    : t_(&SpectralTransform::for_grid(grid)), coeffs_(t_->spectral_size()) {
  t_->forward(values, coeffs_);
}

void ComponentSpectrum::derivative(std::initializer_list<int> axes, std::span<double> out) const {
  derivative(std::span<const int>(axes.begin(), axes.size()), out);
}

namespace {

// Per-thread scratch so repeated syntheses do not reallocate.
AlignedVector<std::complex<double>>& scratch(std::size_t size) {
  thread_local AlignedVector<std::complex<double>> work;
  work.resize(size);
  return work;
}

}  // namespace

void ComponentSpectrum::derivative(std::span<const int> axes, std::span<double> out) const {
  const int n = t_->grid().dim();
  for (int a : axes)
    if (a < 0 || a >= n) throw std::out_of_range("derivative: axis out of range");
  auto& work = scratch(coeffs_.size());
  const double norm = 1.0 / static_cast<double>(t_->grid().size());
  // (i k_a)(i k_b)... ; the power of i is applied once per coefficient.
  std::complex<double> ipow(norm, 0.0);
  for (std::size_t r = 0; r < axes.size(); ++r) ipow *= std::complex<double>(0.0, 1.0);
  if (axes.size() == 1) {
    const auto k = t_->wavenumber(axes[0]);
    for (std::size_t q = 0; q < work.size(); ++q) work[q] = coeffs_[q] * (ipow * k[q]);
  } else {
    for (std::size_t q = 0; q < work.size(); ++q) {
      double prod = 1.0;
      for (int a : axes) prod *= t_->wavenumber(a)[q];
      work[q] = coeffs_[q] * (ipow * prod);
    }
  }
  t_->inverse_unnormalized(work, out);
}

void ComponentSpectrum::apply(const std::function<std::complex<double>(std::size_t)>& symbol,
                              std::span<double> out) const {
  auto& work = scratch(coeffs_.size());
  const double norm = 1.0 / static_cast<double>(t_->grid().size());
  for (std::size_t q = 0; q < work.size(); ++q) work[q] = coeffs_[q] * symbol(q) * norm;
  t_->inverse_unnormalized(work, out);
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.dim())
    throw std::out_of_range("partial_derivative: axis out of range");
  ScalarField out(f.grid());
  ComponentSpectrum(f.grid(), f.values()).derivative({axis}, out.values());
  return out;
}

std::vector<ScalarField> gradient_components(const ScalarField& f) {
  ComponentSpectrum s(f.grid(), f.values());
  std::vector<ScalarField> out;
  out.reserve(f.dim());
  for (int a = 0; a < f.dim(); ++a) {
    out.emplace_back(f.grid());
    s.derivative({a}, out.back().values());
  }
  return out;
}

void prolong(std::span<const double> coarse, const Grid& cg, std::span<double> fine,
             const Grid& fg) {
  const int n = cg.dim();
  if (fg.dim() != n || fg.period() != cg.period())
    throw std::invalid_argument("prolong: grids differ in dimension or period");
  for (int a = 0; a < n; ++a)
    if (fg.resolution()[a] < cg.resolution()[a])
      throw std::invalid_argument("prolong: target grid is coarser");
  if (coarse.size() != cg.size() || fine.size() != fg.size())
    throw std::invalid_argument("prolong: size mismatch");

  const ComponentSpectrum s(cg, coarse);
  const auto& tc = s.transform();
  const auto& tf = SpectralTransform::for_grid(fg);
  std::vector<std::size_t> stride(n, 1);
  for (int a = n - 2; a >= 0; --a)
    stride[a] = stride[a + 1] *
                static_cast<std::size_t>(a + 1 == n - 1 ? fg.resolution()[a + 1] / 2 + 1
                                                        : fg.resolution()[a + 1]);
  AlignedVector<std::complex<double>> work(tf.spectral_size());
  const double norm = 1.0 / static_cast<double>(cg.size());
  for (std::size_t q = 0; q < tc.spectral_size(); ++q) {
    std::size_t idx = 0;
    bool nyquist = false;
    for (int a = 0; a < n; ++a) {
      const int m = tc.mode(a)[q];
      nyquist |= 2 * std::abs(m) == cg.resolution()[a];
      idx += stride[a] * static_cast<std::size_t>(m >= 0 ? m : m + fg.resolution()[a]);
    }
    if (!nyquist) work[idx] = s.coefficients()[q] * norm;
  }
  tf.inverse_unnormalized(work, fine);
}

namespace {

template <class F>
F prolong_components(const F& f, F out) {
  for (int c = 0; c < f.components(); ++c)
    prolong(f.component(c), f.grid(), out.component(c), out.grid());
  return out;
}

}  // namespace

ScalarField prolong(const ScalarField& f, const Grid& fine) {
  return prolong_components(f, ScalarField(fine));
}
VectorField prolong(const VectorField& f, const Grid& fine) {
  return prolong_components(f, VectorField(fine, f.variance()));
}
SymTensor2Field prolong(const SymTensor2Field& f, const Grid& fine) {
  return prolong_components(f, SymTensor2Field(fine, f.variance()));
}
MetricField prolong(const MetricField& g, const Grid& fine) {
  return MetricField(prolong(g.lower(), fine));
}

double spectral_tail(std::span<const double> values, const Grid& grid, double max_mode) {
  ComponentSpectrum s(grid, values);
  const auto& t = s.transform();
  const double norm = 1.0 / static_cast<double>(grid.size());
  double worst = 0.0;
  for (std::size_t q = 0; q < t.spectral_size(); ++q)
    if (t.mode_norm(q) > max_mode + 1e-12)
      worst = std::max(worst, std::abs(s.coefficients()[q]) * norm);
  return worst;
}

}  // namespace qlab
