#include "qlab/field.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qlab {

std::string_view to_string(Variance v) {
  return v == Variance::lower ? "lower" : "upper";
}

FieldData::FieldData(Grid grid, int components, Variance variance)
    : grid_(std::move(grid)),
      components_(components),
      variance_(variance),
      data_(static_cast<std::size_t>(components) * grid_.size(), 0.0) {}

double FieldData::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool FieldData::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void FieldData::require_compatible(const FieldData& other, std::string_view what) const {
  if (!(grid_ == other.grid_))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  if (components_ != other.components_)
    throw std::invalid_argument(std::string(what) + ": component count mismatch");
  if (variance_ != other.variance_)
    throw std::invalid_argument(std::string(what) + ": index variance mismatch");
}

void FieldData::axpy(double alpha, const FieldData& other) {
  require_compatible(other, "field arithmetic");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

void FieldData::scale(double alpha) {
  for (double& v : data_) v *= alpha;
}

ScalarField::ScalarField(Grid grid, double value) : FieldOps(std::move(grid), 1) {
  std::fill(raw().begin(), raw().end(), value);
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : FieldOps(std::move(grid), 1) {
  if (values.size() != points())
    throw std::invalid_argument("ScalarField: value count does not match grid");
  std::copy(values.begin(), values.end(), raw().begin());
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(std::span<const double>)>& f) {
  ScalarField out(grid);
  std::vector<double> x(grid.dim());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coordinates(p, x);
    out[p] = f(x);
  }
  return out;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values()) s += v;
  return s / static_cast<double>(points());
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  a.require_compatible(b, "pointwise product");
  ScalarField out(a.grid());
  for (std::size_t p = 0; p < a.points(); ++p) out[p] = a[p] * b[p];
  return out;
}

VectorField::VectorField(Grid grid, Variance variance)
    : FieldOps(grid, grid.dim(), variance) {}

SymTensor2Field::SymTensor2Field(Grid grid, Variance variance)
    : FieldOps(grid, sym_size(grid.dim()), variance) {}

SymTensor2Field SymTensor2Field::diagonal(const ScalarField& f, Variance variance) {
  SymTensor2Field out(f.grid(), variance);
  const int n = f.dim();
  for (int i = 0; i < n; ++i) {
    auto c = out.component(sym_index(n, i, i));
    std::copy(f.values().begin(), f.values().end(), c.begin());
  }
  return out;
}

Tensor2Field::Tensor2Field(Grid grid, Variance variance)
    : FieldOps(grid, grid.dim() * grid.dim(), variance) {}

SymTensor2Field Tensor2Field::symmetric_part() const {
  SymTensor2Field out(grid(), variance());
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (std::size_t p = 0; p < points(); ++p)
        out(i, j, p) = 0.5 * ((*this)(i, j, p) + (*this)(j, i, p));
  return out;
}

namespace {

template <class T>
T scale_pointwise(const ScalarField& f, T t) {
  if (!(f.grid() == t.grid()))
    throw std::invalid_argument("pointwise scaling: grid mismatch");
  for (int c = 0; c < t.components(); ++c) {
    auto comp = t.component(c);
    for (std::size_t p = 0; p < t.points(); ++p) comp[p] *= f[p];
  }
  return t;
}

}  // namespace

VectorField operator*(const ScalarField& f, VectorField v) {
  return scale_pointwise(f, std::move(v));
}

SymTensor2Field operator*(const ScalarField& f, SymTensor2Field h) {
  return scale_pointwise(f, std::move(h));
}

MetricField::MetricField(SymTensor2Field g)
    : g_(std::move(g)),
      inverse_(g_.grid(), Variance::upper),
      sqrt_det_(g_.grid()) {
  if (g_.variance() != Variance::lower)
    throw std::invalid_argument("MetricField: metric must have lower indices");
  if (!g_.all_finite()) throw std::domain_error("MetricField: non-finite metric");
  const int n = g_.dim();
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
  if (n > kMaxDim) throw std::invalid_argument("MetricField: dimension too large");
  Mat m(n, n);
  Mat id = Mat::Identity(n, n);
  for (std::size_t p = 0; p < points(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g_(i, j, p);
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("MetricField: metric is not positive definite at point " +
                              std::to_string(p));
    Mat inv = llt.solve(id);
    double det = 1.0;
    for (int i = 0; i < n; ++i) det *= llt.matrixL()(i, i);
    sqrt_det_[p] = det;  // product of Cholesky diagonal = sqrt(det g)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) inverse_(i, j, p) = 0.5 * (inv(i, j) + inv(j, i));
  }
}

MetricField MetricField::flat(const Grid& grid) {
  return MetricField(SymTensor2Field::diagonal(ScalarField(grid, 1.0), Variance::lower));
}

MetricField MetricField::conformally_flat(const ScalarField& u) {
  ScalarField e(u.grid());
  for (std::size_t p = 0; p < u.points(); ++p) e[p] = std::exp(2.0 * u[p]);
  return MetricField(SymTensor2Field::diagonal(e, Variance::lower));
}

bool MetricField::is_constant(double tol) const {
  for (int c = 0; c < g_.components(); ++c) {
    auto comp = g_.component(c);
    auto [lo, hi] = std::minmax_element(comp.begin(), comp.end());
    if (*hi - *lo > tol * std::max(1.0, std::abs(*hi))) return false;
  }
  return true;
}

double integrate(const ScalarField& f, const ScalarField& density) {
  f.require_compatible(density, "integrate");
  double s = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) s += f[p] * density[p];
  return s * f.grid().cell_volume();
}

double integrate(const ScalarField& f, const MetricField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("integrate: grid mismatch");
  return integrate(f, g.volume_density());
}

double integrate_flat(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

}  // namespace qlab
