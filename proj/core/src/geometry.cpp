#include "qlab/geometry.hpp"

#include <vector>

#include "qlab/spectral.hpp"

namespace qlab {

Christoffel::Christoffel(const Grid& grid)
    : FieldData(grid, grid.dim() * sym_size(grid.dim()), Variance::upper) {}

Christoffel christoffel(const MetricField& g) {
  const int n = g.dim();
  const int ns = sym_size(n);
  const std::size_t np = g.points();

  // dg[s * n + l] = d_l g_s
  std::vector<ScalarField> dg;
  dg.reserve(static_cast<std::size_t>(ns) * n);
  for (int s = 0; s < ns; ++s) {
    ComponentSpectrum spec(g.grid(), g.lower().component(s));
    for (int l = 0; l < n; ++l) {
      dg.emplace_back(g.grid());
      spec.derivative({l}, dg.back().values());
    }
  }
  auto d = [&](int i, int j, int l) -> const ScalarField& { return dg[sym_index(n, i, j) * n + l]; };

  Christoffel out(g.grid());
  std::vector<double> lowered(np);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const auto& a = d(j, l, i);
        const auto& b = d(i, l, j);
        const auto& c = d(i, j, l);
        for (std::size_t p = 0; p < np; ++p) lowered[p] = 0.5 * (a[p] + b[p] - c[p]);
        for (int k = 0; k < n; ++k) {
          auto ginv = g.inverse().component(sym_index(n, k, l));
          auto dst = out.component(k * ns + sym_index(n, i, j));
          for (std::size_t p = 0; p < np; ++p) dst[p] += ginv[p] * lowered[p];
        }
      }
  return out;
}

Geometry::Geometry(MetricField g) : g_(std::move(g)), gamma_(qlab::christoffel(g_)) {}

}  // namespace qlab
