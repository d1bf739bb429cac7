#include <gtest/gtest.h>

#include <cmath>

#include "ncsurf/errors.hpp"
#include "ncsurf/wigner.hpp"

using namespace ncsurf;

namespace {

Spin S(int twice) { return Spin::from_twice(twice); }
Proj M(int twice) { return Proj::from_twice(twice); }

// Brute-force oracle: explicit 3j sum in floating point with lgamma.
double cg_float(double j1, double j2, double j, double m1, double m2, double m) {
  if (std::abs(m1 + m2 - m) > 1e-9) return 0.0;
  auto f = [](double x) { return std::lgamma(x + 1); };
  double pre = 0.5 * (std::log(2 * j + 1) + f(j1 + j2 - j) + f(j1 - j2 + j) + f(-j1 + j2 + j) - f(j1 + j2 + j + 1) +
                      f(j + m) + f(j - m) + f(j1 - m1) + f(j1 + m1) + f(j2 - m2) + f(j2 + m2));
  double sum = 0;
  for (int k = 0; k <= 100; ++k) {
    double a[] = {j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k};
    bool ok = true;
    for (double x : a) ok = ok && x > -0.5;
    if (!ok) continue;
    double l = f(k);
    for (double x : a) l += f(x);
    sum += (k % 2 ? -1.0 : 1.0) * std::exp(pre - l);
  }
  return sum;
}

}  // namespace

TEST(Wigner, CgcExamples) {
  for (int tj = 0; tj <= 6; ++tj)
    for (int tm = -tj; tm <= tj; tm += 2) EXPECT_EQ(cgc(S(tj), S(0), S(tj), M(tm), M(0), M(tm)), SqrtRational(1));
  EXPECT_EQ(cgc(S(1), S(1), S(2), M(1), M(1), M(2)), SqrtRational(1));
  EXPECT_EQ(cgc(S(2), S(2), S(0), M(2), M(-2), M(0)), SqrtRational(Rational(1, 3), Integer(3)));
  EXPECT_THROW(cgc(S(2), S(2), S(0), M(4), M(-4), M(0)), UsageError);
  EXPECT_THROW(cgc(S(2), S(2), S(0), M(1), M(-1), M(0)), UsageError);
}

TEST(Wigner, CgcMatchesFloatingOracle) {
  for (int t1 = 0; t1 <= 5; ++t1)
    for (int t2 = 0; t2 <= 5; ++t2)
      for (int t = std::abs(t1 - t2); t <= t1 + t2; t += 2)
        for (int m1 = -t1; m1 <= t1; m1 += 2)
          for (int m2 = -t2; m2 <= t2; m2 += 2) {
            int m = m1 + m2;
            if (std::abs(m) > t) continue;
            double exact = cgc(S(t1), S(t2), S(t), M(m1), M(m2), M(m)).to_double();
            double ref = cg_float(t1 / 2.0, t2 / 2.0, t / 2.0, m1 / 2.0, m2 / 2.0, m / 2.0);
            EXPECT_NEAR(exact, ref, 1e-12);
          }
}

TEST(Wigner, CgcOrthogonality) {
  for (int t1 = 0; t1 <= 6; ++t1)
    for (int t2 = 0; t2 <= 6; ++t2)
      for (int ta = std::abs(t1 - t2); ta <= t1 + t2; ta += 2)
        for (int tb = std::abs(t1 - t2); tb <= t1 + t2; tb += 2)
          for (int m = -std::min(ta, tb); m <= std::min(ta, tb); m += 2) {
            ScalarExpr sum;
            for (int m1 = -t1; m1 <= t1; m1 += 2) {
              int m2 = m - m1;
              if (std::abs(m2) > t2 || (t2 - m2) % 2) continue;
              SqrtRational p = cgc(S(t1), S(t2), S(ta), M(m1), M(m2), M(m)) * cgc(S(t1), S(t2), S(tb), M(m1), M(m2), M(m));
              sum += ScalarExpr(p);
            }
            EXPECT_EQ(sum, ScalarExpr(ta == tb ? 1 : 0)) << t1 << " " << t2 << " " << ta << " " << tb;
          }
}

TEST(Wigner, SixjExamples) {
  EXPECT_EQ(sixj(S(2), S(2), S(2), S(2), S(2), S(2)), SqrtRational(Rational(1, 6)));
  EXPECT_TRUE(sixj(S(2), S(2), S(6), S(2), S(2), S(2)).is_zero());
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        SqrtRational expected = SqrtRational(Rational(1)) / SqrtRational::sqrt_of(Rational((b + 1) * (c + 1)));
        if (((a + b + c) / 2) % 2) expected = -expected;
        EXPECT_EQ(sixj(S(a), S(b), S(c), S(0), S(c), S(b)), expected);
      }
}

TEST(Wigner, SixjTetrahedralSymmetry) {
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = 0; c <= 6; ++c)
        for (int d = 0; d <= 6; d += 2)
          for (int e = 0; e <= 6; e += 3)
            for (int f = 0; f <= 6; ++f) {
              SqrtRational v = sixj(S(a), S(b), S(c), S(d), S(e), S(f));
              EXPECT_EQ(v, sixj(S(b), S(a), S(c), S(e), S(d), S(f)));
              EXPECT_EQ(v, sixj(S(a), S(c), S(b), S(d), S(f), S(e)));
              EXPECT_EQ(v, sixj(S(d), S(e), S(c), S(a), S(b), S(f)));
              EXPECT_EQ(v, sixj(S(a), S(e), S(f), S(d), S(b), S(c)));
            }
}

TEST(Wigner, ReducedElementUnitLaw) {
  for (int tk = 2; tk <= 6; ++tk)
    for (int n = 0; n <= tk; ++n) {
      ScalarExpr norm(Rational(n + 3, 7));
      auto r = reduced_element(n, 0, n, S(tk), {norm, ScalarExpr(1), norm});
      EXPECT_TRUE(r.triangle_ok);
      EXPECT_EQ(r.value, ScalarExpr(1)) << tk << " " << n;
    }
  auto bad = reduced_element(1, 1, 3, S(4), {ScalarExpr(1), ScalarExpr(1), ScalarExpr(1)});
  EXPECT_FALSE(bad.triangle_ok);
  EXPECT_TRUE(bad.value.is_zero());
}

TEST(Wigner, SpinParsing) {
  EXPECT_EQ(Spin::parse("5/2").twice, 5);
  EXPECT_EQ(Spin::parse("3").twice, 6);
  EXPECT_THROW(Spin::parse("1/3"), UsageError);
  EXPECT_THROW(Spin::parse("-1"), UsageError);
}
