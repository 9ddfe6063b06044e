#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qlab/aligned.hpp"
#include "qlab/grid.hpp"

namespace qlab {

/// Whether tensor indices are covariant (lower) or contravariant (upper).
enum class Variance { lower, upper };

std::string_view to_string(Variance v);

/// Largest manifold dimension supported by the gridded pipeline.
inline constexpr int kMaxDim = 6;

constexpr int sym_size(int n) { return n * (n + 1) / 2; }

/// Packed index of the (i, j) entry of a symmetric n x n matrix, upper
/// triangle in row-major order.
constexpr int sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

/// Component-major storage shared by every sampled field: component c
/// occupies data[c * points, (c + 1) * points).
class FieldData {
 public:
  FieldData(Grid grid, int components, Variance variance = Variance::lower);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  int components() const { return components_; }
  std::size_t points() const { return grid_.size(); }
  Variance variance() const { return variance_; }

  std::span<double> component(int c) {
    return {data_.data() + c * points(), points()};
  }
  std::span<const double> component(int c) const {
    return {data_.data() + c * points(), points()};
  }
  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  double& at(int c, std::size_t p) { return data_[c * points() + p]; }
  double at(int c, std::size_t p) const { return data_[c * points() + p]; }

  double max_abs() const;
  bool all_finite() const;

  /// Throws std::invalid_argument unless `other` lives on the same grid with
  /// the same layout and variance.
  void require_compatible(const FieldData& other, std::string_view what) const;

 protected:
  void axpy(double alpha, const FieldData& other);
  void scale(double alpha);
  void set_variance(Variance v) { variance_ = v; }

 private:
  Grid grid_;
  int components_;
  Variance variance_;
  AlignedVector<double> data_;
};

/// Linear-space arithmetic for concrete field types.
template <class Derived>
class FieldOps : public FieldData {
 public:
  using FieldData::FieldData;

  Derived& operator+=(const Derived& b) {
    axpy(1.0, b);
    return self();
  }
  Derived& operator-=(const Derived& b) {
    axpy(-1.0, b);
    return self();
  }
  Derived& operator*=(double s) {
    scale(s);
    return self();
  }
  Derived& add_scaled(double s, const Derived& b) {
    axpy(s, b);
    return self();
  }

  friend Derived operator+(Derived a, const Derived& b) { return a += b; }
  friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
  friend Derived operator*(double s, Derived a) { return a *= s; }
  friend Derived operator*(Derived a, double s) { return a *= s; }
  friend Derived operator-(Derived a) { return a *= -1.0; }

 private:
  Derived& self() { return static_cast<Derived&>(*this); }
};

class ScalarField : public FieldOps<ScalarField> {
 public:
  explicit ScalarField(Grid grid, double value = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  /// Samples `f(x)` at every grid point; x has dim() coordinates.
  static ScalarField sample(const Grid& grid,
                            const std::function<double(std::span<const double>)>& f);

  std::span<double> values() { return component(0); }
  std::span<const double> values() const { return component(0); }
  double operator[](std::size_t p) const { return at(0, p); }
  double& operator[](std::size_t p) { return at(0, p); }

  double mean() const;
};

ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// n components per point, covariant or contravariant.
class VectorField : public FieldOps<VectorField> {
 public:
  VectorField(Grid grid, Variance variance);

  double operator()(int i, std::size_t p) const { return at(i, p); }
  double& operator()(int i, std::size_t p) { return at(i, p); }
};

/// Symmetric 2-tensor with n(n+1)/2 stored components per point.
class SymTensor2Field : public FieldOps<SymTensor2Field> {
 public:
  SymTensor2Field(Grid grid, Variance variance);

  double operator()(int i, int j, std::size_t p) const {
    return at(sym_index(dim(), i, j), p);
  }
  double& operator()(int i, int j, std::size_t p) {
    return at(sym_index(dim(), i, j), p);
  }

  /// f(x) * delta_ij, i.e. a conformal multiple of the coordinate metric.
  static SymTensor2Field diagonal(const ScalarField& f, Variance variance);
};

/// General (not necessarily symmetric) 2-tensor, n*n components.
class Tensor2Field : public FieldOps<Tensor2Field> {
 public:
  Tensor2Field(Grid grid, Variance variance);

  double operator()(int i, int j, std::size_t p) const {
    return at(i * dim() + j, p);
  }
  double& operator()(int i, int j, std::size_t p) { return at(i * dim() + j, p); }

  SymTensor2Field symmetric_part() const;
};

VectorField operator*(const ScalarField& f, VectorField v);
SymTensor2Field operator*(const ScalarField& f, SymTensor2Field h);

/// Riemannian metric sampled on the grid, with cached pointwise inverse and
/// volume density sqrt(det g).
class MetricField {
 public:
  /// Throws std::domain_error if g is not positive definite at every point.
  explicit MetricField(SymTensor2Field g);

  static MetricField flat(const Grid& grid);
  /// exp(2u) * delta.
  static MetricField conformally_flat(const ScalarField& u);

  const Grid& grid() const { return g_.grid(); }
  int dim() const { return g_.dim(); }
  std::size_t points() const { return g_.points(); }

  const SymTensor2Field& lower() const { return g_; }
  const SymTensor2Field& inverse() const { return inverse_; }
  const ScalarField& volume_density() const { return sqrt_det_; }

  double g(int i, int j, std::size_t p) const { return g_(i, j, p); }
  double ginv(int i, int j, std::size_t p) const { return inverse_(i, j, p); }

  /// True when every component is constant over the grid.
  bool is_constant(double tol = 1e-14) const;

 private:
  SymTensor2Field g_;
  SymTensor2Field inverse_;
  ScalarField sqrt_det_;
};

/// Uniform-grid quadrature of f against dv_g.
double integrate(const ScalarField& f, const MetricField& g);
/// Quadrature against a fixed density (e.g. a frozen background volume form).
double integrate(const ScalarField& f, const ScalarField& density);
/// Quadrature against the coordinate volume dx.
double integrate_flat(const ScalarField& f);

}  // namespace qlab
