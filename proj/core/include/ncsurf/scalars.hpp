#pragma once

// Exact scalar layer.
//
// ScalarExpr is a finite sum of terms
//     (p + q i) * sqrt(s) * a1^e1 * a2^e2 * ...
// with p, q rational, s a squarefree positive integer and the a_i formal
// self-adjoint parameters (Laurent exponents allowed). Terms are kept in a
// canonical map so that equality is syntactic; this is sound because the
// square roots of distinct squarefree integers are linearly independent over
// the rationals.

#include <complex>
#include <iosfwd>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ncsurf {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(std::string_view text);  // "3", "-5/2", "0.125", "1e-3"
std::string to_string(const Rational& q);

/// n = outside^2 * inside with inside squarefree.
void split_square(const Integer& n, Integer& outside, Integer& inside);
Integer factorial(unsigned n);

// ---------------------------------------------------------------------------

struct Gaussian {
  Rational re{0};
  Rational im{0};

  Gaussian() = default;
  Gaussian(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  Gaussian(long r) : re(r), im(0) {}

  static Gaussian i() { return {0, 1}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  Gaussian conj() const { return {re, -im}; }
  Rational norm_sq() const { return re * re + im * im; }
  Gaussian inverse() const;
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
};

std::string to_string(const Gaussian& g);

// ---------------------------------------------------------------------------

/// coeff * sqrt(radicand); radicand squarefree, zero is 0 * sqrt(1).
class SqrtRational {
 public:
  SqrtRational() : coeff_(0), radicand_(1) {}
  SqrtRational(Rational coeff) : coeff_(std::move(coeff)), radicand_(1) { canonicalize(); }
  SqrtRational(long coeff) : SqrtRational(Rational(coeff)) {}
  SqrtRational(Rational coeff, const Integer& radicand);

  /// Principal square root of a nonnegative rational.
  static SqrtRational sqrt_of(const Rational& q);

  const Rational& coeff() const { return coeff_; }
  const Integer& radicand() const { return radicand_; }
  bool is_zero() const { return sgn(coeff_) == 0; }
  int sign() const { return sgn(coeff_); }
  /// value^2 * sign(value), an exact rational carrying the full information.
  Rational signed_square() const { return coeff_ * coeff_ * radicand_ * sign(); }
  Rational square() const { return coeff_ * coeff_ * radicand_; }
  double to_double() const;

  SqrtRational operator-() const { return SqrtRational(-coeff_, radicand_); }
  friend SqrtRational operator*(const SqrtRational& a, const SqrtRational& b);
  friend SqrtRational operator/(const SqrtRational& a, const SqrtRational& b);
  friend bool operator==(const SqrtRational& a, const SqrtRational& b) {
    return a.coeff_ == b.coeff_ && a.radicand_ == b.radicand_;
  }

 private:
  void canonicalize();
  Rational coeff_;
  Integer radicand_;
};

std::string to_string(const SqrtRational& s);

// ---------------------------------------------------------------------------

/// Product of named parameters with integer (possibly negative) exponents.
class Monomial {
 public:
  Monomial() = default;
  static Monomial of(std::string name, int exponent = 1);

  int exponent(std::string_view name) const;
  bool is_one() const { return powers_.empty(); }
  const std::vector<std::pair<std::string, int>>& powers() const { return powers_; }
  Monomial without(std::string_view name) const;
  Monomial pow(int k) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::pair<std::string, int>> powers_;  // sorted by name, no zero exponents
};

std::string to_string(const Monomial& m);

/// The declared formal parameters an expression may mention.
class ParamSet {
 public:
  static std::shared_ptr<const ParamSet> declare(std::vector<std::string> names);
  const std::vector<std::string>& names() const { return names_; }
  bool contains(std::string_view name) const;
  friend bool operator==(const ParamSet& a, const ParamSet& b) { return a.names_ == b.names_; }

 private:
  explicit ParamSet(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

using ParamSetPtr = std::shared_ptr<const ParamSet>;

class ScalarExpr;
ScalarExpr param(const ParamSetPtr& set, const std::string& name);

using NumericBindings = std::map<std::string, std::complex<double>, std::less<>>;

class ScalarExpr {
 public:
  struct Key {
    Integer radicand;
    Monomial monomial;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.radicand != b.radicand) return a.radicand < b.radicand;
      return a.monomial < b.monomial;
    }
    friend bool operator==(const Key& a, const Key& b) {
      return a.radicand == b.radicand && a.monomial == b.monomial;
    }
  };
  using TermMap = std::map<Key, Gaussian>;

  ScalarExpr() = default;
  ScalarExpr(long v) : ScalarExpr(Gaussian(v)) {}
  ScalarExpr(const Rational& q) : ScalarExpr(Gaussian(q)) {}
  ScalarExpr(const Gaussian& g);
  ScalarExpr(const SqrtRational& s);
  ScalarExpr(const Gaussian& g, const Integer& radicand, Monomial m, ParamSetPtr params = nullptr);

  static ScalarExpr i() { return ScalarExpr(Gaussian::i()); }

  const TermMap& terms() const { return terms_; }
  const ParamSetPtr& params() const { return params_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;  // no parameter monomials
  bool is_single_term() const { return terms_.size() == 1; }
  std::optional<Rational> as_rational() const;
  std::optional<Gaussian> as_gaussian() const;

  ScalarExpr conj() const;
  /// Multiplicative inverse; only defined for a single term.
  ScalarExpr inverse() const;
  ScalarExpr pow(unsigned k) const;

  /// Smallest / largest exponent of a parameter over all terms (0 when absent).
  int min_exponent(std::string_view name) const;
  int max_exponent(std::string_view name) const;
  /// Drop every term in which `name` appears with a positive power.
  ScalarExpr drop_positive_powers(std::string_view name) const;
  ScalarExpr times_power(std::string_view name, int k) const;

  /// Replace param^e by value^e (value must be invertible when e < 0).
  ScalarExpr substitute(std::string_view name, const ScalarExpr& value) const;
  /// Replace param^(2e) by square_value^e; fails on odd exponents.
  ScalarExpr substitute_square(std::string_view name, const ScalarExpr& square_value) const;

  /// Principal square root of a single term with positive rational
  /// coefficient, unit radicand and even exponents.
  ScalarExpr monomial_sqrt() const;

  std::complex<double> eval(const NumericBindings& bindings) const;

  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& o);
  ScalarExpr& operator-=(const ScalarExpr& o);
  ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }
  friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
  friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

 private:
  friend ScalarExpr param(const ParamSetPtr& set, const std::string& name);
  void add_term(const Key& key, const Gaussian& c);
  static ParamSetPtr merge(const ParamSetPtr& a, const ParamSetPtr& b);

  TermMap terms_;
  ParamSetPtr params_;
};

std::string to_string(const ScalarExpr& e);
std::ostream& operator<<(std::ostream& os, const ScalarExpr& e);

inline ScalarExpr add(const ScalarExpr& a, const ScalarExpr& b) { return a + b; }
inline ScalarExpr mul(const ScalarExpr& a, const ScalarExpr& b) { return a * b; }
inline ScalarExpr conj(const ScalarExpr& a) { return a.conj(); }
inline std::complex<double> eval(const ScalarExpr& a, const NumericBindings& b) { return a.eval(b); }

}  // namespace ncsurf
