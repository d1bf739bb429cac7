#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ncsurf/errors.hpp"
#include "ncsurf/maps.hpp"
#include "ncsurf/spectra.hpp"
#include "support.hpp"

using namespace ncsurf;

namespace {

NumericBindings sphere_bindings(double k, double eps) {
  return {{"alpha", 1.0}, {"epsilon", eps}, {"R", eps * std::sqrt(k * (k + 1))}};
}

std::vector<double> dense_oracle(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + a.rows());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Spectra, SpinHalfCrystal) {
  const double eps = 0.4;
  Tridiag t = crystal_matrix(rep_spin(Spin::from_twice(1), sphere_bindings(0.5, eps)));
  ASSERT_EQ(t.diag.size(), 2u);
  EXPECT_NEAR(t.diag[0], -eps / 2, 1e-15);
  EXPECT_NEAR(t.diag[1], eps / 2, 1e-15);
  EXPECT_NEAR(t.offdiag[0], eps, 1e-15);
}

TEST(Spectra, ParaboloidWindow) {
  const double eps = 0.3;
  auto s = profile_builtin("paraboloid", ProfileParams{{{"epsilon", Rational(3, 10)}}});
  RepOptions opt;
  opt.truncation = 3;
  Tridiag t = crystal_matrix(rep_surface(s, {}, opt));
  ASSERT_EQ(t.diag.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(t.diag[i], eps * i, 1e-15);
  EXPECT_NEAR(t.offdiag[0], std::sqrt(eps), 1e-15);
  EXPECT_NEAR(t.offdiag[1], std::sqrt(2 * eps), 1e-15);
}

TEST(Spectra, CrystalMatchesMatrixOf) {
  auto b = sphere_bindings(3, 0.5);
  Rep r = rep_spin(Spin::integer(3), b);
  NCPoly h = NCPoly::generator(Letter::Zero) + NCPoly::generator(Letter::Plus) + NCPoly::generator(Letter::Minus);
  Eigen::MatrixXcd m = matrix_of(h, r, b);
  EXPECT_LT((m - crystal_matrix(r).dense().cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Spectra, DecoupledLadder) {
  Tridiag t{{3.0, -1.0, 2.0, 0.5}, {0.0, 0.0, 0.0}};
  EXPECT_EQ(eigenvalues(t), (std::vector<double>{-1.0, 0.5, 2.0, 3.0}));
}

TEST(Spectra, TwoByTwo) {
  const double a = 1.3, b = -0.4, c = 0.9;
  auto ev = eigenvalues(Tridiag{{a, b}, {c}});
  const double mid = (a + b) / 2, rad = std::hypot((a - b) / 2, c);
  EXPECT_NEAR(ev[0], mid - rad, 1e-15);
  EXPECT_NEAR(ev[1], mid + rad, 1e-15);
}

TEST(Spectra, EmptyRejected) { EXPECT_THROW(eigenvalues(Tridiag{}), UsageError); }

TEST(Spectra, NonUnitaryRejected) {
  NumericBindings b{{"alpha", std::complex<double>(0, 1)}, {"epsilon", 1.0}, {"R", std::sqrt(2.0)}};
  EXPECT_THROW(crystal_matrix(rep_spin(Spin::integer(1), b)), UsageError);
}

TEST(Spectra, SphereCrystalIsScaledJ0) {
  for (int twok = 1; twok <= 40; ++twok) {
    const double k = twok / 2.0, eps = 0.7;
    auto ev = eigenvalues(crystal_matrix(rep_spin(Spin::from_twice(twok), sphere_bindings(k, eps))));
    ASSERT_EQ(static_cast<int>(ev.size()), twok + 1);
    for (int i = 0; i <= twok; ++i) EXPECT_NEAR(ev[i], std::sqrt(5.0) * eps * (i - k), 1e-10) << "2k=" << twok;
  }
}

TEST(Spectra, DenseOracleRandom) {
  std::mt19937_64 rng(ncsurf::testing::seed());
  std::normal_distribution<double> g;
  for (int n : {1, 2, 5, 17, 64}) {
    Tridiag t;
    for (int i = 0; i < n; ++i) t.diag.push_back(g(rng));
    for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(g(rng));
    auto ev = eigenvalues(t), ref = dense_oracle(t.dense());
    for (int i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-12);
  }
}

TEST(Spectra, ShiftCovariance) {
  Tridiag t = crystal_matrix(rep_spin(Spin::integer(4), sphere_bindings(4, 1.0)));
  auto ev = eigenvalues(t);
  for (double& d : t.diag) d += 0.25;
  auto shifted = eigenvalues(t);
  for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(shifted[i] - ev[i], 0.25, 1e-14);
}

TEST(Spectra, GammaVanishesAtFirstIndex) {
  for (int m : {0, 1, -3}) EXPECT_EQ(gamma_coefficient(std::abs(m), m, 0.5, 1.0), 0.0);
  EXPECT_GT(gamma_coefficient(4, 3, 0.5, 1.0), 0.0);
}

TEST(Spectra, FirstStep) {
  const int m = 2;
  const std::complex<double> lambda(0.3, 0.1);
  auto s = cn_sequence(m, lambda, 0.5, 1.0, 10);
  EXPECT_EQ(s.value(2), std::complex<double>(1.0));
  const std::complex<double> expect =
      -std::complex<double>(0, 1) * (lambda + 0.5 * 0.5 * m) / gamma_coefficient(3, m, 0.5, 1.0);
  EXPECT_LT(std::abs(s.value(3) - expect), 1e-15);
}

TEST(Spectra, RecursionResidual) {
  const int m = 1;
  const std::complex<double> lambda(0.4, 0.0), drive = std::complex<double>(0, 1) * (lambda + 0.5 * m);
  auto s = cn_sequence(m, lambda, 1.0, 1.0, 400);
  for (int n = 2; n < 400; ++n) {
    const auto lhs = gamma_coefficient(n + 1, m, 1.0, 1.0) * s.value(n + 1) + drive * s.value(n) +
                     gamma_coefficient(n, m, 1.0, 1.0) * s.value(n - 1);
    EXPECT_LT(std::abs(lhs), 1e-12 * std::abs(s.value(n + 1)) * n);
  }
}

TEST(Spectra, RenormalizationKeepsValues) {
  auto s = cn_sequence(2, 0.7, 0.5, 1.0, 100000);
  EXPECT_TRUE(std::isfinite(s.log_abs(100000)));
  // log|c_n| grows like 9.1 log n; no entry overflows.
  EXPECT_NEAR(s.log_abs(100000) - s.log_abs(50000), 9.1 * std::log(2.0), 1e-3);
}

TEST(Spectra, SyntheticExponent) {
  ModeSequence s;
  const std::complex<double> a(-0.5, 0.3);
  for (int n = 0; n <= 2000; ++n) {
    s.mantissa.push_back(n == 0 ? 1.0 : std::exp(a * std::log(static_cast<double>(n))));
    s.log_scale.push_back(0.0);
  }
  auto f = exponent_estimate(s, 500);
  EXPECT_LT(std::abs(f.a - a), 1e-6);
  for (auto& c : s.mantissa) c *= std::complex<double>(3.0, -7.0);
  EXPECT_LT(std::abs(exponent_estimate(s, 500).a - f.a), 1e-12);
  EXPECT_THROW(exponent_estimate(s, 5000), UsageError);
}

TEST(Spectra, RecursionExponentMatchesAsymptotics) {
  // c_n ~ (+-i)^n n^{-1/2 -+ 4 mu / eps} with mu = lambda + eps m / 2; the larger one dominates.
  struct Case { int m; double lambda, eps; };
  for (Case c : {Case{0, 0.3, 1.0}, Case{0, 0.7, 0.5}, Case{2, 0.3, 0.5}}) {
    auto s = cn_sequence(c.m, c.lambda, c.eps, 1.0, 20000);
    auto f = exponent_estimate(s, 2000);
    const double mu = c.lambda + c.eps * c.m / 2;
    EXPECT_NEAR(f.a.real(), -0.5 + 4 * mu / c.eps, 1e-3);
    EXPECT_NEAR(f.a.imag(), 0.0, 1e-6);
  }
}

TEST(Spectra, TailClasses) {
  auto make = [](double p) {
    ModeSequence s;
    for (int n = 0; n <= 5000; ++n) {
      s.mantissa.push_back(n == 0 ? 1.0 : std::pow(static_cast<double>(n), p / 2));
      s.log_scale.push_back(0.0);
    }
    return s;
  };
  EXPECT_EQ(tail_partial_sums(make(-2.0)).classification, TailClass::Bounded);
  EXPECT_EQ(tail_partial_sums(make(-1.0)).classification, TailClass::LogDivergent);
  EXPECT_EQ(tail_partial_sums(make(0.5)).classification, TailClass::PowerDivergent);
  ModeSequence z = make(-1.0);
  for (std::size_t i = 10; i < z.mantissa.size(); ++i) z.mantissa[i] = 0.0;
  auto rep = tail_partial_sums(z);
  EXPECT_EQ(rep.classification, TailClass::Bounded);
  EXPECT_NEAR(rep.log_partial_sums.back(), rep.log_partial_sums[9], 1e-15);
  auto harm = tail_partial_sums(make(-1.0));
  EXPECT_NEAR(std::exp(harm.log_partial_sums.back()), 1.0 + std::log(5000.0) + 0.5772156649, 1e-3);
}
