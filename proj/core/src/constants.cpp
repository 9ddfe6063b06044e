#include "qlab/constants.hpp"

#include <stdexcept>

namespace qlab {

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational Constants::trace_identity() const {
  return Rational(n - 4, 2) * A + Rational(n, 2) * B + Rational(2 * (n - 1)) * C;
}

Constants constants(int n) {
  if (n < 3) throw std::invalid_argument("constants: dimension must be at least 3");
  Constants c;
  c.n = n;
  const Rational N(n);
  c.A = Rational(-1, 2 * (n - 1));
  c.B = Rational(-2, (n - 2) * (n - 2));
  c.C = (N * N * (N - 4) + 16 * (N - 1)) / (8 * (N - 1) * (N - 1) * (N - 2) * (N - 2));
  c.a = ((N - 2) * (N - 2) + 4) / (2 * (N - 1) * (N - 2));
  c.b = Rational(-4) / (N - 2);
  c.Lambda = (2 / c.A) * (c.B / N + c.C);
  c.alpha = -(c.A + (N + 1) / (2 * N) * c.B + 2 * c.C) / 2;

  if (c.trace_identity() != 0) throw std::logic_error("constants: trace identity violated");
  if (!(c.Lambda < 0)) throw std::logic_error("constants: Lambda_n must be negative");
  if (!(c.alpha > 0)) throw std::logic_error("constants: alpha_n must be positive");

  c.A_d = to_double(c.A);
  c.B_d = to_double(c.B);
  c.C_d = to_double(c.C);
  c.a_d = to_double(c.a);
  c.b_d = to_double(c.b);
  c.Lambda_d = to_double(c.Lambda);
  c.alpha_d = to_double(c.alpha);
  return c;
}

}  // namespace qlab
