#include "ncsurf/wigner.hpp"

#include <cstdlib>
#include <mutex>
#include <vector>

#include "ncsurf/errors.hpp"

namespace ncsurf {

namespace {

// Read-consistent factorial table shared across threads.
Integer fact(int n) {
  static std::mutex mu;
  static std::vector<Integer> table{Integer(1)};
  if (n < 0) throw InternalInconsistency("negative factorial argument");
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= n) {
    Integer next = table.back() * static_cast<unsigned long>(table.size());
    table.push_back(std::move(next));
  }
  return table[static_cast<std::size_t>(n)];
}

// All arguments below are doubled; this halves an even doubled sum.
int half(int twice_sum) {
  if (twice_sum % 2 != 0) throw InternalInconsistency("odd doubled sum in Racah formula");
  return twice_sum / 2;
}

// Delta(abc)^2 = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
Rational triangle_sq(Spin a, Spin b, Spin c) {
  Rational r(fact(half(a.twice + b.twice - c.twice)) * fact(half(a.twice - b.twice + c.twice)) *
                 fact(half(-a.twice + b.twice + c.twice)),
             fact(half(a.twice + b.twice + c.twice) + 1));
  r.canonicalize();
  return r;
}

}  // namespace

Spin Spin::from_twice(int twice) {
  if (twice < 0) throw UsageError("spin must be nonnegative");
  Spin s;
  s.twice = twice;
  return s;
}

Spin Spin::parse(std::string_view text) {
  Rational q = parse_rational(text);
  Rational t = q * 2;
  if (t.get_den() != 1 || sgn(t) < 0) throw UsageError("not a spin: " + std::string(text));
  return from_twice(static_cast<int>(t.get_num().get_si()));
}

bool triangle(Spin a, Spin b, Spin c) {
  if ((a.twice + b.twice + c.twice) % 2 != 0) return false;
  return c.twice <= a.twice + b.twice && c.twice >= std::abs(a.twice - b.twice);
}

SqrtRational cgc(Spin j1, Spin j2, Spin j, Proj m1, Proj m2, Proj m) {
  auto proj_ok = [](Spin s, Proj p) {
    return std::abs(p.twice) <= s.twice && (s.twice - p.twice) % 2 == 0;
  };
  if (!proj_ok(j1, m1) || !proj_ok(j2, m2) || !proj_ok(j, m))
    throw UsageError("malformed spin/projection pair in cgc");
  if (m.twice != m1.twice + m2.twice || !triangle(j1, j2, j)) return SqrtRational();

  Rational pref = triangle_sq(j1, j2, j) * (j.twice + 1);
  pref *= Rational(fact(half(j.twice + m.twice)) * fact(half(j.twice - m.twice)) *
                   fact(half(j1.twice - m1.twice)) * fact(half(j1.twice + m1.twice)) *
                   fact(half(j2.twice - m2.twice)) * fact(half(j2.twice + m2.twice)));
  pref.canonicalize();

  const int a = half(j1.twice + j2.twice - j.twice);
  const int b = half(j1.twice - m1.twice);
  const int c = half(j2.twice + m2.twice);
  const int d = half(j.twice - j2.twice + m1.twice);
  const int e = half(j.twice - j1.twice - m2.twice);
  Rational sum = 0;
  for (int t = std::max({0, -d, -e}); t <= std::min({a, b, c}); ++t) {
    Integer den = fact(t) * fact(a - t) * fact(b - t) * fact(c - t) * fact(d + t) * fact(e + t);
    Rational term(Integer(t % 2 == 0 ? 1 : -1), den);
    term.canonicalize();
    sum += term;
  }
  return SqrtRational::sqrt_of(pref) * SqrtRational(sum);
}

SqrtRational sixj(Spin a, Spin b, Spin c, Spin d, Spin e, Spin f) {
  if (!triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c)) return SqrtRational();
  Rational pref = triangle_sq(a, b, c) * triangle_sq(a, e, f) * triangle_sq(d, b, f) * triangle_sq(d, e, c);

  const int abc = half(a.twice + b.twice + c.twice);
  const int aef = half(a.twice + e.twice + f.twice);
  const int dbf = half(d.twice + b.twice + f.twice);
  const int dec = half(d.twice + e.twice + c.twice);
  const int abde = half(a.twice + b.twice + d.twice + e.twice);
  const int acdf = half(a.twice + c.twice + d.twice + f.twice);
  const int bcef = half(b.twice + c.twice + e.twice + f.twice);
  Rational sum = 0;
  for (int t = std::max({abc, aef, dbf, dec}); t <= std::min({abde, acdf, bcef}); ++t) {
    Integer den = fact(t - abc) * fact(t - aef) * fact(t - dbf) * fact(t - dec) * fact(abde - t) *
                  fact(acdf - t) * fact(bcef - t);
    Rational term(fact(t + 1) * (t % 2 == 0 ? 1 : -1), den);
    term.canonicalize();
    sum += term;
  }
  return SqrtRational::sqrt_of(pref) * SqrtRational(sum);
}

ReducedElement reduced_element(int n1, int n2, int n, Spin k, const std::array<ScalarExpr, 3>& norms) {
  ReducedElement out;
  if (n1 < 0 || n2 < 0 || n < 0) throw UsageError("reduced_element: negative degree");
  const Spin s1 = Spin::integer(n1), s2 = Spin::integer(n2), s = Spin::integer(n);
  out.triangle_ok = triangle(s1, s2, s);
  if (!out.triangle_ok) return out;

  SqrtRational six = sixj(k, s1, k, s2, k, s);
  int sign_exp = k.twice + n1 + n2;
  SqrtRational root = SqrtRational::sqrt_of(Rational((k.twice + 1) * (2 * n1 + 1) * (2 * n2 + 1)));
  SqrtRational factor = root * six;
  if (sign_exp % 2 != 0) factor = -factor;
  if (factor.is_zero()) {
    out.value = ScalarExpr();
    return out;
  }
  out.value = ScalarExpr(factor) * norms[0] * norms[1] * norms[2].inverse();
  return out;
}

}  // namespace ncsurf
