#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace qlab {

using Rational = boost::multiprecision::cpp_rational;

/// Dimension-dependent coefficients of Q, the Paneitz operator and the
/// second-variation form, kept exact and also as doubles.
struct Constants {
  int n = 0;
  Rational A, B, C;     // Q = A dR + B |Ric|^2 + C R^2
  Rational a, b;        // P = D^2 - div((a R g + b Ric) d) + (n-4)/2 Q
  Rational Lambda;      // (2/A)(B/n + C)
  Rational alpha;       // -(A + (n+1)/(2n) B + 2C) / 2

  double A_d = 0, B_d = 0, C_d = 0, a_d = 0, b_d = 0, Lambda_d = 0, alpha_d = 0;

  /// (n-4)/2 A + n/2 B + 2(n-1) C; identically zero.
  Rational trace_identity() const;
};

/// Throws std::invalid_argument for n < 3. Asserts the trace identity and the
/// signs Lambda < 0, alpha > 0, throwing std::logic_error if they fail.
Constants constants(int n);

double to_double(const Rational& r);
/// "p/q" or "p".
std::string to_string(const Rational& r);

}  // namespace qlab
