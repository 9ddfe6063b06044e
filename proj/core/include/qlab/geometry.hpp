#pragma once

#include "qlab/field.hpp"

namespace qlab {

/// Christoffel symbols of the second kind, Gamma^k_{ij}, symmetric in (i, j).
/// Component k * sym_size(n) + sym_index(n, i, j).
class Christoffel : public FieldData {
 public:
  explicit Christoffel(const Grid& grid);

  double operator()(int k, int i, int j, std::size_t p) const {
    return at(k * sym_size(dim()) + sym_index(dim(), i, j), p);
  }
  double& operator()(int k, int i, int j, std::size_t p) {
    return at(k * sym_size(dim()) + sym_index(dim(), i, j), p);
  }
};

/// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}).
Christoffel christoffel(const MetricField& g);

/// A metric bundled with its Levi-Civita connection; every covariant
/// operator takes one of these so the connection is computed once.
class Geometry {
 public:
  explicit Geometry(MetricField g);

  const MetricField& metric() const { return g_; }
  const Christoffel& christoffel() const { return gamma_; }
  const Grid& grid() const { return g_.grid(); }
  int dim() const { return g_.dim(); }
  std::size_t points() const { return g_.points(); }

 private:
  MetricField g_;
  Christoffel gamma_;
};

}  // namespace qlab
