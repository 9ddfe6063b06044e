#include "qlab/curvature.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "qlab/spectral.hpp"

namespace qlab {

namespace {

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;
using Gam = std::array<Mat, kMaxDim>;

void load_sym(const FieldData& s, std::size_t p, int n, Mat& m) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m[i][j] = m[j][i] = s.at(sym_index(n, i, j), p);
}

}  // namespace

Riemann4::Riemann4(const Grid& grid)
    : FieldData(grid, grid.dim() * grid.dim() * grid.dim() * grid.dim(), Variance::lower) {}

Riemann4 riemann_tensor(const Geometry& geo) {
  const int n = geo.dim();
  const int ns = sym_size(n);
  const std::size_t np = geo.points();
  const auto& G = geo.christoffel();
  const auto& g = geo.metric();
  Riemann4 rm(geo.grid());
  auto slot = [n](int i, int j, int k, int l) { return ((i * n + j) * n + k) * n + l; };

  // Derivative terms one axis at a time: d_a Gamma^m_{jk} enters R^m_{ajk}
  // and, with the opposite sign, R^m_{jak}. Slot (i, j, k, m) holds R^m_{ijk}
  // until the last index is lowered.
  {
    std::vector<ComponentSpectrum> spectra;
    spectra.reserve(static_cast<std::size_t>(n) * ns);
    for (int c = 0; c < n * ns; ++c) spectra.emplace_back(geo.grid(), G.component(c));
    ScalarField d(geo.grid());
    for (int a = 0; a < n; ++a)
      for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
          for (int k = j; k < n; ++k) {
            spectra[m * ns + sym_index(n, j, k)].derivative({a}, d.values());
            for (int kk : {j, k}) {
              const int jj = (kk == j) ? k : j;
              auto plus = rm.component(slot(a, jj, kk, m));
              auto minus = rm.component(slot(jj, a, kk, m));
              for (std::size_t p = 0; p < np; ++p) {
                plus[p] += d[p];
                minus[p] -= d[p];
              }
              if (j == k) break;
            }
          }
  }

  // Quadratic terms and lowering, blockwise over points for i < j; the
  // remaining slots follow from antisymmetry of the formula in (i, j).
  constexpr std::size_t B = 256;
  auto gam = [&](int m, int i, int j) { return G.component(m * ns + sym_index(n, i, j)).data(); };
  std::vector<double> tmp(static_cast<std::size_t>(n) * B);
  for (std::size_t p0 = 0; p0 < np; p0 += B) {
    const std::size_t len = std::min(B, np - p0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          for (int m = 0; m < n; ++m) {
            double* t = tmp.data() + m * B;
            const double* src = rm.component(slot(i, j, k, m)).data() + p0;
            for (std::size_t p = 0; p < len; ++p) t[p] = src[p];
            for (int q = 0; q < n; ++q) {
              const double* a = gam(m, i, q) + p0;
              const double* b = gam(q, j, k) + p0;
              const double* c = gam(m, j, q) + p0;
              const double* e = gam(q, i, k) + p0;
              for (std::size_t p = 0; p < len; ++p) t[p] += a[p] * b[p] - c[p] * e[p];
            }
          }
          for (int l = 0; l < n; ++l) {
            double* dst = rm.component(slot(i, j, k, l)).data() + p0;
            double* mirror = rm.component(slot(j, i, k, l)).data() + p0;
            for (std::size_t p = 0; p < len; ++p) dst[p] = 0.0;
            for (int m = 0; m < n; ++m) {
              const double* glm = g.lower().component(sym_index(n, l, m)).data() + p0;
              const double* t = tmp.data() + m * B;
              for (std::size_t p = 0; p < len; ++p) dst[p] += glm[p] * t[p];
            }
            for (std::size_t p = 0; p < len; ++p) mirror[p] = -dst[p];
          }
        }
  }
  return rm;
}

RicciCurvature ricci_from_riemann(const MetricField& g, const Riemann4& rm) {
  const int n = g.dim();
  const std::size_t np = g.points();
  RicciCurvature out{SymTensor2Field(g.grid(), Variance::lower), ScalarField(g.grid())};
  auto slot = [n](int i, int j, int k, int l) { return ((i * n + j) * n + k) * n + l; };
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      auto dst = out.ricci.component(sym_index(n, j, k));
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
          auto gil = g.inverse().component(sym_index(n, i, l));
          auto a = rm.component(slot(i, j, k, l));
          auto b = rm.component(slot(i, k, j, l));
          for (std::size_t p = 0; p < np; ++p) dst[p] += 0.5 * gil[p] * (a[p] + b[p]);
        }
      auto gjk = g.inverse().component(sym_index(n, j, k));
      const double w = (j == k) ? 1.0 : 2.0;
      for (std::size_t p = 0; p < np; ++p) out.scalar[p] += w * gjk[p] * dst[p];
    }
  return out;
}

Riemann4 weyl_tensor(const MetricField& g, const Riemann4& rm, const RicciCurvature& rc) {
  const int n = g.dim();
  Riemann4 w(g.grid());
  if (n < 4) return w;
  Mat gl{};
  for (std::size_t p = 0; p < g.points(); ++p) {
    load_sym(g.lower(), p, n, gl);
    Mat A{};
    const double c = rc.scalar[p] / (2.0 * (n - 1));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) A[j][k] = (rc.ricci(j, k, p) - c * gl[j][k]) / (n - 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double kn = A[j][k] * gl[i][l] + A[i][l] * gl[j][k] - A[i][k] * gl[j][l] -
                              A[j][l] * gl[i][k];
            w(i, j, k, l, p) = rm(i, j, k, l, p) - kn;
          }
  }
  return w;
}

Curvature curvature(const Geometry& geo) {
  Riemann4 rm = riemann_tensor(geo);
  RicciCurvature rc = ricci_from_riemann(geo.metric(), rm);
  Riemann4 w = weyl_tensor(geo.metric(), rm, rc);
  return {std::move(rm), std::move(rc.ricci), std::move(rc.scalar), std::move(w)};
}

RicciCurvature ricci_curvature(const Geometry& geo) {
  const int n = geo.dim();
  const int ns = sym_size(n);
  const std::size_t np = geo.points();
  const auto& G = geo.christoffel();
  const auto& g = geo.metric();

  RicciCurvature out{SymTensor2Field(geo.grid(), Variance::lower), ScalarField(geo.grid())};
  ScalarField d(geo.grid());

  // d_i Gamma^i_{jk}
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < ns; ++s) {
      ComponentSpectrum(geo.grid(), G.component(i * ns + s)).derivative({i}, d.values());
      auto dst = out.ricci.component(s);
      for (std::size_t p = 0; p < np; ++p) dst[p] += d[p];
    }
  // - d_j Gamma^i_{ik}, symmetrised in (j, k)
  std::vector<ScalarField> contracted;
  for (int k = 0; k < n; ++k) {
    contracted.emplace_back(geo.grid());
    for (int i = 0; i < n; ++i) {
      auto c = G.component(i * ns + sym_index(n, i, k));
      for (std::size_t p = 0; p < np; ++p) contracted[k][p] += c[p];
    }
  }
  for (int k = 0; k < n; ++k) {
    ComponentSpectrum spec(geo.grid(), contracted[k].values());
    for (int j = 0; j < n; ++j) {
      spec.derivative({j}, d.values());
      auto dst = out.ricci.component(sym_index(n, j, k));
      const double w = (j == k) ? 1.0 : 0.5;
      for (std::size_t p = 0; p < np; ++p) dst[p] -= w * d[p];
    }
  }
  // Gamma^i_{ip} Gamma^p_{jk} - Gamma^i_{jp} Gamma^p_{ik}
  Gam gam{};
  Mat gi{};
  for (std::size_t p = 0; p < np; ++p) {
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) gam[m][i][j] = gam[m][j][i] = G(m, i, j, p);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += contracted[q][p] * gam[q][j][k];
        for (int i = 0; i < n; ++i)
          for (int q = 0; q < n; ++q) s -= gam[i][j][q] * gam[q][i][k];
        out.ricci(j, k, p) += s;
      }
    load_sym(g.inverse(), p, n, gi);
    double scal = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) scal += (j == k ? 1.0 : 2.0) * gi[j][k] * out.ricci(j, k, p);
    out.scalar[p] = scal;
  }
  return out;
}

ScalarField norm_squared(const MetricField& g, const Riemann4& t) {
  const int n = g.dim();
  ScalarField out(g.grid());
  Mat gi{};
  const int n4 = n * n * n * n;
  std::vector<double> a(n4), b(n4);
  for (std::size_t p = 0; p < g.points(); ++p) {
    load_sym(g.inverse(), p, n, gi);
    for (int c = 0; c < n4; ++c) a[c] = t.at(c, p);
    // Raise one slot at a time; `stride` selects the slot.
    for (int stride = 1; stride < n4; stride *= n) {
      for (int c = 0; c < n4; ++c) {
        const int idx = (c / stride) % n;
        const int base = c - idx * stride;
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += gi[idx][q] * a[base + q * stride];
        b[c] = s;
      }
      std::swap(a, b);
    }
    double s = 0.0;
    for (int c = 0; c < n4; ++c) s += a[c] * t.at(c, p);
    out[p] = s;
  }
  return out;
}

}  // namespace qlab
