#pragma once

#include "qlab/field.hpp"
#include "qlab/geometry.hpp"

namespace qlab {

/// Fully covariant 4-tensor R_{ijkl}, stored densely (n^4 components) so the
/// algebraic symmetries are measured rather than imposed.
class Riemann4 : public FieldData {
 public:
  explicit Riemann4(const Grid& grid);

  double operator()(int i, int j, int k, int l, std::size_t p) const {
    return at(((i * dim() + j) * dim() + k) * dim() + l, p);
  }
  double& operator()(int i, int j, int k, int l, std::size_t p) {
    return at(((i * dim() + j) * dim() + k) * dim() + l, p);
  }
};

/// Conventions:
///   R^m_{ijk} = d_i Gamma^m_{jk} - d_j Gamma^m_{ik} + Gamma^m_{ip} Gamma^p_{jk}
///               - Gamma^m_{jp} Gamma^p_{ik},
///   R_{ijkl} = g_{lm} R^m_{ijk},   R_{jk} = g^{il} R_{ijkl},
/// so a space form of curvature K has R_{ijkl} = K (g_{jk} g_{il} - g_{ik} g_{jl})
/// and the round sphere has positive scalar curvature.
struct Curvature {
  Riemann4 riemann;
  SymTensor2Field ricci;
  ScalarField scalar;
  /// Rm minus the Kulkarni-Nomizu product of the Schouten tensor with g;
  /// identically zero for n = 3.
  Riemann4 weyl;
};

Curvature curvature(const Geometry& geo);

Riemann4 riemann_tensor(const Geometry& geo);

struct RicciCurvature {
  SymTensor2Field ricci;
  ScalarField scalar;
};

/// Ricci and scalar curvature without materialising the Riemann tensor.
/// Memory stays O(n^3) fields, which keeps five-dimensional grids tractable.
RicciCurvature ricci_curvature(const Geometry& geo);

/// Ricci contraction g^{il} R_{ijkl}, symmetrised, and its trace.
RicciCurvature ricci_from_riemann(const MetricField& g, const Riemann4& rm);

/// Rm minus the Kulkarni-Nomizu product of the Schouten tensor with g; zero
/// for n = 3.
Riemann4 weyl_tensor(const MetricField& g, const Riemann4& rm, const RicciCurvature& rc);

/// Full contraction T_{ijkl} T^{ijkl}.
ScalarField norm_squared(const MetricField& g, const Riemann4& t);

}  // namespace qlab
