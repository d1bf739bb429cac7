#pragma once

// Exact Clebsch-Gordan and 6j coefficients (Condon-Shortley phase) from
// Racah's single-sum formulas. Angular momenta are carried as doubled
// integers so half-integer spins need no special casing.

#include <array>
#include <string_view>

#include "ncsurf/scalars.hpp"

namespace ncsurf {

/// A spin j >= 0, stored as 2j.
struct Spin {
  int twice = 0;

  Spin() = default;
  static Spin from_twice(int twice);
  static Spin integer(int j) { return from_twice(2 * j); }
  /// "2", "5/2", "3/2" ...
  static Spin parse(std::string_view text);

  bool is_integer() const { return twice % 2 == 0; }
  double value() const { return twice / 2.0; }
  Rational as_rational() const {
    Rational q(twice, 2);
    q.canonicalize();
    return q;
  }
  friend bool operator==(Spin a, Spin b) { return a.twice == b.twice; }
};

/// A projection quantum number m, stored as 2m (may be negative).
struct Proj {
  int twice = 0;
  static Proj from_twice(int twice) { return Proj{twice}; }
  static Proj integer(int m) { return Proj{2 * m}; }
};

/// |j1 - j2| <= j <= j1 + j2 and j1 + j2 + j integral.
bool triangle(Spin a, Spin b, Spin c);

/// <j1 m1; j2 m2 | j m>
SqrtRational cgc(Spin j1, Spin j2, Spin j, Proj m1, Proj m2, Proj m);

/// { a b c }
/// { d e f }
SqrtRational sixj(Spin a, Spin b, Spin c, Spin d, Spin e, Spin f);

struct ReducedElement {
  ScalarExpr value;
  bool triangle_ok = false;
};

/// Coefficient B(n1, n2, n) of the product law
///   P^{m1}_{n1} P^{m2}_{n2} = sum_n cgc(n1, n2, n; m1, m2, m1 + m2) B(n1, n2, n) P^{m1+m2}_n
/// in the spin-k representation. `norms` are ||P_{n1}||, ||P_{n2}||, ||P_n|| with
/// ||P_n|| single-term (already specialized) so that it can be inverted.
ReducedElement reduced_element(int n1, int n2, int n, Spin k, const std::array<ScalarExpr, 3>& norms);

}  // namespace ncsurf
