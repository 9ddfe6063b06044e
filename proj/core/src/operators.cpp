#include "qlab/operators.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/curvature.hpp"
#include "qlab/spectral.hpp"

namespace qlab {

namespace {

using Mat = std::array<std::array<double, kMaxDim>, kMaxDim>;

void require_lower(const FieldData& f, const char* what) {
  if (f.variance() != Variance::lower)
    throw std::invalid_argument(std::string(what) + ": expected lower indices");
}

void require_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void load_sym(const FieldData& s, std::size_t p, int n, Mat& m) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m[i][j] = m[j][i] = s.at(sym_index(n, i, j), p);
}

// Gamma^k_{ij} at one point, gam[k][i][j].
using Gam = std::array<Mat, kMaxDim>;

void load_gamma(const Christoffel& c, std::size_t p, int n, Gam& gam) {
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) gam[k][i][j] = gam[k][j][i] = c(k, i, j, p);
}

}  // namespace

SymTensorGradient::SymTensorGradient(const Grid& grid)
    : FieldData(grid, grid.dim() * sym_size(grid.dim()), Variance::lower) {}

VectorField raise(const MetricField& g, const VectorField& w) {
  require_grid(g.grid(), w.grid(), "raise");
  require_lower(w, "raise");
  const int n = g.dim();
  VectorField out(g.grid(), Variance::upper);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto gij = g.inverse().component(sym_index(n, i, j));
      auto src = w.component(j);
      auto dst = out.component(i);
      for (std::size_t p = 0; p < g.points(); ++p) dst[p] += gij[p] * src[p];
    }
  return out;
}

VectorField lower(const MetricField& g, const VectorField& w) {
  require_grid(g.grid(), w.grid(), "lower");
  if (w.variance() != Variance::upper)
    throw std::invalid_argument("lower: expected upper indices");
  const int n = g.dim();
  VectorField out(g.grid(), Variance::lower);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto gij = g.lower().component(sym_index(n, i, j));
      auto src = w.component(j);
      auto dst = out.component(i);
      for (std::size_t p = 0; p < g.points(); ++p) dst[p] += gij[p] * src[p];
    }
  return out;
}

namespace {

// out_{ij} = m^{ik} m^{jl} h_{kl} for a pointwise symmetric matrix field m.
SymTensor2Field congruence(const SymTensor2Field& m, const SymTensor2Field& h, Variance v) {
  const int n = h.dim();
  SymTensor2Field out(h.grid(), v);
  Mat mm{}, hh{}, t{};
  for (std::size_t p = 0; p < h.points(); ++p) {
    load_sym(m, p, n, mm);
    load_sym(h, p, n, hh);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += mm[i][k] * hh[k][l];
        t[i][l] = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += t[i][l] * mm[l][j];
        out(i, j, p) = s;
      }
  }
  return out;
}

}  // namespace

SymTensor2Field raise(const MetricField& g, const SymTensor2Field& h) {
  require_grid(g.grid(), h.grid(), "raise");
  require_lower(h, "raise");
  return congruence(g.inverse(), h, Variance::upper);
}

SymTensor2Field lower(const MetricField& g, const SymTensor2Field& h) {
  require_grid(g.grid(), h.grid(), "lower");
  if (h.variance() != Variance::upper)
    throw std::invalid_argument("lower: expected upper indices");
  return congruence(g.lower(), h, Variance::lower);
}

VectorField differential(const ScalarField& f) {
  VectorField out(f.grid(), Variance::lower);
  ComponentSpectrum s(f.grid(), f.values());
  for (int a = 0; a < f.dim(); ++a) s.derivative({a}, out.component(a));
  return out;
}

SymTensor2Field hessian(const Geometry& geo, const ScalarField& f) {
  require_grid(geo.grid(), f.grid(), "hessian");
  const int n = geo.dim();
  ComponentSpectrum s(f.grid(), f.values());
  std::vector<ScalarField> df;
  for (int k = 0; k < n; ++k) {
    df.emplace_back(f.grid());
    s.derivative({k}, df.back().values());
  }
  SymTensor2Field out(f.grid(), Variance::lower);
  const auto& gam = geo.christoffel();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto dst = out.component(sym_index(n, i, j));
      s.derivative({i, j}, dst);
      for (int k = 0; k < n; ++k) {
        auto c = gam.component(k * sym_size(n) + sym_index(n, i, j));
        for (std::size_t p = 0; p < f.points(); ++p) dst[p] -= c[p] * df[k][p];
      }
    }
  return out;
}

ScalarField trace(const MetricField& g, const SymTensor2Field& h) {
  require_grid(g.grid(), h.grid(), "trace");
  require_lower(h, "trace");
  const int n = g.dim();
  ScalarField out(g.grid());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double w = (i == j) ? 1.0 : 2.0;
      auto gij = g.inverse().component(sym_index(n, i, j));
      auto hij = h.component(sym_index(n, i, j));
      for (std::size_t p = 0; p < g.points(); ++p) out[p] += w * gij[p] * hij[p];
    }
  return out;
}

ScalarField laplacian(const Geometry& geo, const ScalarField& f) {
  return trace(geo.metric(), hessian(geo, f));
}

ScalarField bilaplacian(const Geometry& geo, const ScalarField& f) {
  return laplacian(geo, laplacian(geo, f));
}

Tensor2Field covariant_derivative(const Geometry& geo, const VectorField& w) {
  require_grid(geo.grid(), w.grid(), "covariant_derivative");
  require_lower(w, "covariant_derivative");
  const int n = geo.dim();
  const auto& gam = geo.christoffel();
  Tensor2Field out(w.grid(), Variance::lower);
  for (int j = 0; j < n; ++j) {
    ComponentSpectrum s(w.grid(), w.component(j));
    for (int i = 0; i < n; ++i) s.derivative({i}, out.component(i * n + j));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto dst = out.component(i * n + j);
      for (int k = 0; k < n; ++k) {
        auto c = gam.component(k * sym_size(n) + sym_index(n, i, j));
        auto wk = w.component(k);
        for (std::size_t p = 0; p < w.points(); ++p) dst[p] -= c[p] * wk[p];
      }
    }
  return out;
}

SymTensorGradient covariant_derivative(const Geometry& geo, const SymTensor2Field& h) {
  require_grid(geo.grid(), h.grid(), "covariant_derivative");
  require_lower(h, "covariant_derivative");
  const int n = geo.dim();
  const int ns = sym_size(n);
  SymTensorGradient out(h.grid());
  for (int s = 0; s < ns; ++s) {
    ComponentSpectrum spec(h.grid(), h.component(s));
    for (int k = 0; k < n; ++k) spec.derivative({k}, out.component(k * ns + s));
  }
  const auto& G = geo.christoffel();
  const std::size_t np = h.points();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        auto dst = out.component(k * ns + sym_index(n, i, j));
        for (int l = 0; l < n; ++l) {
          auto a = G.component(l * ns + sym_index(n, k, i));
          auto b = h.component(sym_index(n, l, j));
          auto c = G.component(l * ns + sym_index(n, k, j));
          auto e = h.component(sym_index(n, i, l));
          for (std::size_t p = 0; p < np; ++p) dst[p] -= a[p] * b[p] + c[p] * e[p];
        }
      }
  return out;
}

SymTensor2Field symmetrize(const Tensor2Field& t) { return t.symmetric_part(); }

SymTensor2Field symmetrized_derivative(const Geometry& geo, const VectorField& w) {
  return symmetrize(covariant_derivative(geo, w));
}

VectorField laplacian(const Geometry& geo, const VectorField& w) {
  const Tensor2Field t = covariant_derivative(geo, w);
  const int n = geo.dim();
  const auto& ginv = geo.metric().inverse();
  VectorField out(w.grid(), Variance::lower);
  // g^{il} d_l T_{ij}
  ScalarField d(w.grid());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComponentSpectrum s(w.grid(), t.component(i * n + j));
      for (int l = 0; l < n; ++l) {
        s.derivative({l}, d.values());
        auto gil = ginv.component(sym_index(n, i, l));
        auto dst = out.component(j);
        for (std::size_t p = 0; p < w.points(); ++p) dst[p] += gil[p] * d[p];
      }
    }
  Gam gam{};
  Mat gi{}, tt{};
  for (std::size_t p = 0; p < w.points(); ++p) {
    load_gamma(geo.christoffel(), p, n, gam);
    load_sym(ginv, p, n, gi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tt[i][j] = t(i, j, p);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
          if (gi[i][l] == 0.0) continue;
          double inner = 0.0;
          for (int m = 0; m < n; ++m) inner += gam[m][l][i] * tt[m][j] + gam[m][l][j] * tt[i][m];
          s += gi[i][l] * inner;
        }
      out(j, p) -= s;
    }
  }
  return out;
}

SymTensor2Field laplacian(const Geometry& geo, const SymTensor2Field& h) {
  const SymTensorGradient t = covariant_derivative(geo, h);
  const int n = geo.dim();
  const int ns = sym_size(n);
  const auto& ginv = geo.metric().inverse();
  SymTensor2Field out(h.grid(), Variance::lower);
  ScalarField d(h.grid());
  for (int k = 0; k < n; ++k)
    for (int s = 0; s < ns; ++s) {
      ComponentSpectrum spec(h.grid(), t.component(k * ns + s));
      auto dst = out.component(s);
      for (int l = 0; l < n; ++l) {
        spec.derivative({l}, d.values());
        auto gkl = ginv.component(sym_index(n, k, l));
        for (std::size_t p = 0; p < h.points(); ++p) dst[p] += gkl[p] * d[p];
      }
    }
  // Connection terms: with gam^m = g^{kl} Gamma^m_{kl} and
  // S^{mk}_i = g^{kl} Gamma^m_{li},
  //   g^{kl} (Gamma^m_{lk} T_{mij} + Gamma^m_{li} T_{kmj} + Gamma^m_{lj} T_{kim}).
  const std::size_t np = h.points();
  const auto& G = geo.christoffel();
  std::vector<ScalarField> gam_tr(n, ScalarField(h.grid()));
  std::vector<ScalarField> S(static_cast<std::size_t>(n) * n * n, ScalarField(h.grid()));
  auto s_at = [&](int m, int k, int i) -> ScalarField& { return S[(m * n + k) * n + i]; };
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        auto gkl = ginv.component(sym_index(n, k, l));
        auto gmkl = G.component(m * ns + sym_index(n, k, l));
        for (std::size_t p = 0; p < np; ++p) gam_tr[m][p] += gkl[p] * gmkl[p];
        for (int i = 0; i < n; ++i) {
          auto gmli = G.component(m * ns + sym_index(n, l, i));
          auto dst = s_at(m, k, i).values();
          for (std::size_t p = 0; p < np; ++p) dst[p] += gkl[p] * gmli[p];
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto dst = out.component(sym_index(n, i, j));
      for (int m = 0; m < n; ++m) {
        auto tm = t.component(m * ns + sym_index(n, i, j));
        for (std::size_t p = 0; p < np; ++p) dst[p] -= gam_tr[m][p] * tm[p];
        for (int k = 0; k < n; ++k) {
          auto a = s_at(m, k, i).values();
          auto ta = t.component(k * ns + sym_index(n, m, j));
          auto b = s_at(m, k, j).values();
          auto tb = t.component(k * ns + sym_index(n, i, m));
          for (std::size_t p = 0; p < np; ++p) dst[p] -= a[p] * ta[p] + b[p] * tb[p];
        }
      }
    }
  return out;
}

VectorField divergence_delta(const Geometry& geo, const SymTensor2Field& h) {
  const SymTensorGradient t = covariant_derivative(geo, h);
  const int n = geo.dim();
  VectorField out(h.grid(), Variance::lower);
  Mat gi{};
  for (std::size_t p = 0; p < h.points(); ++p) {
    load_sym(geo.metric().inverse(), p, n, gi);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += gi[j][k] * t(k, i, j, p);
      out(i, p) = -s;
    }
  }
  return out;
}

ScalarField divergence_delta(const Geometry& geo, const VectorField& w) {
  const Tensor2Field t = covariant_derivative(geo, w);
  const int n = geo.dim();
  ScalarField out(w.grid());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto gij = geo.metric().inverse().component(sym_index(n, i, j));
      auto tij = t.component(i * n + j);
      for (std::size_t p = 0; p < w.points(); ++p) out[p] -= gij[p] * tij[p];
    }
  return out;
}

SymTensor2Field lie_derivative_metric(const Geometry& geo, const VectorField& X) {
  const VectorField x = X.variance() == Variance::lower ? X : lower(geo.metric(), X);
  SymTensor2Field out = symmetrized_derivative(geo, x);
  out *= 2.0;
  return out;
}

SymTensor2Field traceless_part(const MetricField& g, const SymTensor2Field& h) {
  ScalarField t = trace(g, h);
  t *= -1.0 / g.dim();
  return h + metric_times(g, t);
}

Tensor2Field product_x(const MetricField& g, const SymTensor2Field& h, const SymTensor2Field& k) {
  require_grid(g.grid(), h.grid(), "product_x");
  require_grid(g.grid(), k.grid(), "product_x");
  require_lower(h, "product_x");
  require_lower(k, "product_x");
  const int n = g.dim();
  Tensor2Field out(g.grid(), Variance::lower);
  Mat gi{}, hh{}, kk{}, t{};
  for (std::size_t p = 0; p < g.points(); ++p) {
    load_sym(g.inverse(), p, n, gi);
    load_sym(h, p, n, hh);
    load_sym(k, p, n, kk);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += hh[i][a] * gi[a][b];
        t[i][b] = s;
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += t[i][b] * kk[j][b];
        out(i, j, p) = s;
      }
  }
  return out;
}

ScalarField dot(const MetricField& g, const SymTensor2Field& h, const SymTensor2Field& k) {
  require_grid(g.grid(), h.grid(), "dot");
  require_grid(g.grid(), k.grid(), "dot");
  require_lower(h, "dot");
  require_lower(k, "dot");
  const int n = g.dim();
  ScalarField out(g.grid());
  Mat gi{}, hh{}, kk{}, a{}, b{};
  for (std::size_t p = 0; p < g.points(); ++p) {
    load_sym(g.inverse(), p, n, gi);
    load_sym(h, p, n, hh);
    load_sym(k, p, n, kk);
    // tr(G h G k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0, t = 0.0;
        for (int l = 0; l < n; ++l) {
          s += gi[i][l] * hh[l][j];
          t += gi[i][l] * kk[l][j];
        }
        a[i][j] = s;
        b[i][j] = t;
      }
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += a[i][j] * b[j][i];
    out[p] = s;
  }
  return out;
}

ScalarField dot(const MetricField& g, const SymTensor2Field& h, const Tensor2Field& k) {
  require_grid(g.grid(), h.grid(), "dot");
  require_grid(g.grid(), k.grid(), "dot");
  require_lower(h, "dot");
  require_lower(k, "dot");
  return dot(g, h, symmetrize(k));
}

ScalarField dot(const MetricField& g, const VectorField& a, const VectorField& b) {
  require_grid(g.grid(), a.grid(), "dot");
  require_grid(g.grid(), b.grid(), "dot");
  if (a.variance() != b.variance())
    throw std::invalid_argument("dot: vector fields must share variance; use contract()");
  const auto& m = a.variance() == Variance::lower ? g.inverse() : g.lower();
  const int n = g.dim();
  ScalarField out(g.grid());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto mij = m.component(sym_index(n, i, j));
      auto ai = a.component(i);
      auto bj = b.component(j);
      for (std::size_t p = 0; p < g.points(); ++p) out[p] += mij[p] * ai[p] * bj[p];
    }
  return out;
}

ScalarField contract(const VectorField& a, const VectorField& b) {
  require_grid(a.grid(), b.grid(), "contract");
  if (a.variance() == b.variance())
    throw std::invalid_argument("contract: expected opposite variances");
  ScalarField out(a.grid());
  for (int i = 0; i < a.dim(); ++i) {
    auto ai = a.component(i);
    auto bi = b.component(i);
    for (std::size_t p = 0; p < a.points(); ++p) out[p] += ai[p] * bi[p];
  }
  return out;
}

SymTensor2Field rm_dot(const MetricField& g, const Riemann4& rm, const SymTensor2Field& h) {
  require_grid(g.grid(), rm.grid(), "rm_dot");
  const SymTensor2Field hu = raise(g, h);
  const int n = g.dim();
  SymTensor2Field out(g.grid(), Variance::lower);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      auto dst = out.component(sym_index(n, j, k));
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
          auto hil = hu.component(sym_index(n, i, l));
          auto r = rm.component(((i * n + j) * n + k) * n + l);
          for (std::size_t p = 0; p < g.points(); ++p) dst[p] += r[p] * hil[p];
        }
    }
  return out;
}

SymTensor2Field lichnerowicz(const Geometry& geo, const Riemann4& rm, const SymTensor2Field& ric,
                             const SymTensor2Field& h) {
  SymTensor2Field out = laplacian(geo, h);
  out.add_scaled(2.0, rm_dot(geo.metric(), rm, h));
  out.add_scaled(-2.0, symmetrize(product_x(geo.metric(), ric, h)));
  return out;
}

SymTensor2Field metric_times(const MetricField& g, const ScalarField& f) {
  return f * g.lower();
}

}  // namespace qlab
