#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qlab {

/// Uniform periodic grid on the torus prod_a [0, period_a).
///
/// Points are enumerated in row-major order: axis 0 varies slowest.
class Grid {
 public:
  Grid(int dim, int resolution, double period = 2.0 * std::numbers::pi);
  Grid(std::vector<int> resolution, std::vector<double> period);

  int dim() const { return static_cast<int>(resolution_.size()); }
  const std::vector<int>& resolution() const { return resolution_; }
  const std::vector<double>& period() const { return period_; }

  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }

  double spacing(int axis) const { return period_[axis] / resolution_[axis]; }
  double cell_volume() const;
  double volume() const;

  int index(std::size_t point, int axis) const {
    return static_cast<int>((point / stride_[axis]) % resolution_[axis]);
  }
  double coordinate(std::size_t point, int axis) const {
    return index(point, axis) * spacing(axis);
  }
  void coordinates(std::size_t point, std::span<double> x) const;

  /// Same point count per axis multiplied by `factor`, same periods.
  Grid refined(int factor) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.resolution_ == b.resolution_ && a.period_ == b.period_;
  }

 private:
  void validate() const;

  std::vector<int> resolution_;
  std::vector<double> period_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

}  // namespace qlab
