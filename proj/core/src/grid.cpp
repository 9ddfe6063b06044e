#include "qlab/grid.hpp"

#include <stdexcept>
#include <string>

namespace qlab {

Grid::Grid(int dim, int resolution, double period)
    : Grid(std::vector<int>(dim > 0 ? dim : 0, resolution),
           std::vector<double>(dim > 0 ? dim : 0, period)) {
  if (dim < 2) throw std::invalid_argument("Grid: dimension must be >= 2");
}

Grid::Grid(std::vector<int> resolution, std::vector<double> period)
    : resolution_(std::move(resolution)), period_(std::move(period)) {
  validate();
  const int n = dim();
  stride_.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * resolution_[a + 1];
  size_ = stride_[0] * resolution_[0];
}

void Grid::validate() const {
  if (resolution_.size() < 2)
    throw std::invalid_argument("Grid: dimension must be >= 2");
  if (resolution_.size() != period_.size())
    throw std::invalid_argument("Grid: resolution and period lengths differ");
  for (std::size_t a = 0; a < resolution_.size(); ++a) {
    if (resolution_[a] < 8)
      throw std::invalid_argument("Grid: resolution must be >= 8 on axis " +
                                  std::to_string(a));
    if (resolution_[a] % 2 != 0)
      throw std::invalid_argument("Grid: resolution must be even on axis " +
                                  std::to_string(a));
    if (!(period_[a] > 0.0))
      throw std::invalid_argument("Grid: period must be positive on axis " +
                                  std::to_string(a));
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (double p : period_) v *= p;
  return v;
}

void Grid::coordinates(std::size_t point, std::span<double> x) const {
  for (int a = 0; a < dim(); ++a) x[a] = coordinate(point, a);
}

Grid Grid::refined(int factor) const {
  std::vector<int> res = resolution_;
  for (int& r : res) r *= factor;
  return Grid(std::move(res), period_);
}

}  // namespace qlab
