#pragma once

#include "qlab/field.hpp"
#include "qlab/geometry.hpp"

namespace qlab {

class Riemann4;

/// (nabla h)_{k;ij} = nabla_k h_{ij} for a symmetric covariant 2-tensor.
/// Component k * sym_size(n) + sym_index(n, i, j).
class SymTensorGradient : public FieldData {
 public:
  explicit SymTensorGradient(const Grid& grid);

  double operator()(int k, int i, int j, std::size_t p) const {
    return at(k * sym_size(dim()) + sym_index(dim(), i, j), p);
  }
  double& operator()(int k, int i, int j, std::size_t p) {
    return at(k * sym_size(dim()) + sym_index(dim(), i, j), p);
  }
};

// Index gymnastics. Always explicit; inputs with the wrong variance throw
// std::invalid_argument.
VectorField raise(const MetricField& g, const VectorField& w);
VectorField lower(const MetricField& g, const VectorField& w);
SymTensor2Field raise(const MetricField& g, const SymTensor2Field& h);
SymTensor2Field lower(const MetricField& g, const SymTensor2Field& h);

/// df as a covariant vector field.
VectorField differential(const ScalarField& f);
/// nabla^2 f.
SymTensor2Field hessian(const Geometry& geo, const ScalarField& f);
/// Delta f = g^{ij} nabla_i nabla_j f.
ScalarField laplacian(const Geometry& geo, const ScalarField& f);
/// Rough Laplacian g^{kl} nabla_k nabla_l of a covariant 1-form.
VectorField laplacian(const Geometry& geo, const VectorField& w);
/// Rough Laplacian of a covariant symmetric 2-tensor.
SymTensor2Field laplacian(const Geometry& geo, const SymTensor2Field& h);
/// Delta^2 f.
ScalarField bilaplacian(const Geometry& geo, const ScalarField& f);

/// (nabla w)_{ij} = nabla_i w_j for a covariant 1-form.
Tensor2Field covariant_derivative(const Geometry& geo, const VectorField& w);
SymTensorGradient covariant_derivative(const Geometry& geo, const SymTensor2Field& h);
/// 1/2 (nabla_i w_j + nabla_j w_i).
SymTensor2Field symmetrized_derivative(const Geometry& geo, const VectorField& w);

/// (delta h)_i = -nabla^j h_{ij}.
VectorField divergence_delta(const Geometry& geo, const SymTensor2Field& h);
/// delta w = -nabla^i w_i. This is minus the usual divergence.
ScalarField divergence_delta(const Geometry& geo, const VectorField& w);
/// (L_X g)_{ij} = nabla_i X_j + nabla_j X_i. X may be given with either
/// variance.
SymTensor2Field lie_derivative_metric(const Geometry& geo, const VectorField& X);

/// g^{ij} h_{ij}.
ScalarField trace(const MetricField& g, const SymTensor2Field& h);
/// h - (tr h / n) g.
SymTensor2Field traceless_part(const MetricField& g, const SymTensor2Field& h);
/// (h x k)_{ij} = g^{kl} h_{ik} k_{jl}.
Tensor2Field product_x(const MetricField& g, const SymTensor2Field& h, const SymTensor2Field& k);
/// h . k = g^{ik} g^{jl} h_{ij} k_{kl}.
ScalarField dot(const MetricField& g, const SymTensor2Field& h, const SymTensor2Field& k);
ScalarField dot(const MetricField& g, const SymTensor2Field& h, const Tensor2Field& k);
ScalarField dot(const MetricField& g, const VectorField& a, const VectorField& b);
/// Pairing of a 1-form with a vector, or of two fields of opposite variance.
ScalarField contract(const VectorField& a, const VectorField& b);
/// (Rm . h)_{jk} = R_{ijkl} h^{il}; h given with lower indices.
SymTensor2Field rm_dot(const MetricField& g, const Riemann4& rm, const SymTensor2Field& h);
/// Delta_L h = Delta h + 2 Rm.h - Ric x h - (Ric x h)^T.
SymTensor2Field lichnerowicz(const Geometry& geo, const Riemann4& rm, const SymTensor2Field& ric,
                             const SymTensor2Field& h);

/// Symmetric part of a general 2-tensor.
SymTensor2Field symmetrize(const Tensor2Field& t);
/// g scaled pointwise by f.
SymTensor2Field metric_times(const MetricField& g, const ScalarField& f);

}  // namespace qlab
