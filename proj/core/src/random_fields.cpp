#include "qlab/random_fields.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlab/spectral.hpp"

namespace qlab {

namespace {

// Box-Muller on raw 53-bit uniforms keeps the stream identical across
// standard-library implementations.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

void check_spec(const Grid& grid, const BandLimitedSpec& spec) {
  if (spec.max_mode < 0) throw std::invalid_argument("random field: max_mode must be >= 0");
  if (spec.amplitude < 0.0) throw std::invalid_argument("random field: amplitude must be >= 0");
  for (int r : grid.resolution())
    if (2 * spec.max_mode >= r)
      throw std::invalid_argument("random field: max_mode too large for resolution");
}

// Fills one component with a Hermitian-symmetric random spectrum supported on
// |m| <= max_mode. Pairs (m, -m) on the self-conjugate planes of the
// half-spectrum are resolved by drawing for the representative whose first
// nonzero mode entry is positive and mirroring.
void fill_component(const Grid& grid, int max_mode, NormalStream& normals, std::span<double> out) {
  const auto& t = SpectralTransform::for_grid(grid);
  const int n = grid.dim();
  std::vector<std::complex<double>> coeffs(t.spectral_size(), {0.0, 0.0});
  // Index lookup for mirrored entries on the last-axis-zero plane.
  std::vector<std::size_t> cstride(n, 1);
  std::vector<int> cdims(grid.resolution());
  cdims[n - 1] = cdims[n - 1] / 2 + 1;
  for (int a = n - 2; a >= 0; --a) cstride[a] = cstride[a + 1] * cdims[a + 1];
  auto index_of = [&](std::span<const int> m) {
    std::size_t q = 0;
    for (int a = 0; a < n; ++a) {
      const int N = grid.resolution()[a];
      const int j = m[a] >= 0 ? m[a] : m[a] + N;
      q += static_cast<std::size_t>(j) * cstride[a];
    }
    return q;
  };

  std::vector<int> m(n), neg(n);
  for (std::size_t q = 0; q < t.spectral_size(); ++q) {
    if (t.mode_norm(q) > max_mode + 1e-12) continue;
    for (int a = 0; a < n; ++a) m[a] = t.mode(a)[q];
    if (m[n - 1] > 0) {
      coeffs[q] = {normals.next(), normals.next()};
      continue;
    }
    // Self-conjugate plane: decide the representative by the sign of the
    // first nonzero entry.
    int first = 0;
    for (int a = 0; a < n; ++a)
      if (m[a] != 0) {
        first = m[a];
        break;
      }
    if (first == 0) {
      coeffs[q] = {normals.next(), 0.0};
    } else if (first > 0) {
      const std::complex<double> c(normals.next(), normals.next());
      coeffs[q] = c;
      for (int a = 0; a < n; ++a) neg[a] = -m[a];
      coeffs[index_of(neg)] = std::conj(c);
    }
  }
  t.inverse(coeffs, out);
}

template <class F>
F finish(F field, double amplitude) {
  const double peak = field.max_abs();
  field *= (peak > 0.0) ? amplitude / peak : 0.0;
  return field;
}

}  // namespace

ScalarField random_scalar(const Grid& grid, const BandLimitedSpec& spec) {
  check_spec(grid, spec);
  NormalStream normals(spec.seed);
  ScalarField out(grid);
  fill_component(grid, spec.max_mode, normals, out.values());
  return finish(std::move(out), spec.amplitude);
}

VectorField random_vector(const Grid& grid, const BandLimitedSpec& spec, Variance variance) {
  check_spec(grid, spec);
  NormalStream normals(spec.seed);
  VectorField out(grid, variance);
  for (int c = 0; c < out.components(); ++c)
    fill_component(grid, spec.max_mode, normals, out.component(c));
  return finish(std::move(out), spec.amplitude);
}

SymTensor2Field random_sym2(const Grid& grid, const BandLimitedSpec& spec, Variance variance) {
  check_spec(grid, spec);
  NormalStream normals(spec.seed);
  SymTensor2Field out(grid, variance);
  for (int c = 0; c < out.components(); ++c)
    fill_component(grid, spec.max_mode, normals, out.component(c));
  return finish(std::move(out), spec.amplitude);
}

MetricField random_perturbed_metric(const Grid& grid, const BandLimitedSpec& spec) {
  SymTensor2Field g = random_sym2(grid, spec);
  const int n = grid.dim();
  for (int i = 0; i < n; ++i)
    for (double& v : g.component(sym_index(n, i, i))) v += 1.0;
  return MetricField(std::move(g));
}

}  // namespace qlab
