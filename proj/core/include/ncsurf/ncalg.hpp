#pragma once

// Normal-ordered polynomials in the algebra generated by X+, X0, X- subject to
//
//   [X0, X+] = eps X+,  [X0, X-] = -eps X-,  X+ X- = rho(X0),  X- X+ = rho(X0 + eps)
//
// for polynomial rho. Canonical monomials are X+^a X0^c X-^b with a*b == 0,
// so an element is stored as one polynomial in X0 per charge d = a - b:
//
//   d >= 0 :  X+^d h(X0)        d < 0 :  h(X0) X-^{-d}

#include <complex>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncsurf/scalars.hpp"

namespace ncsurf {

enum class Letter { Plus, Zero, Minus };
using Word = std::vector<Letter>;

/// Letters '+', '0', '-' (whitespace ignored); "X+X0X-" is also accepted.
Word parse_word(std::string_view text);
std::string to_string(const Word& w);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded_below() const { return lo > -std::numeric_limits<double>::infinity(); }
  bool bounded_above() const { return hi < std::numeric_limits<double>::infinity(); }
  double length() const { return hi - lo; }
};

/// Polynomial in X0; entry c multiplies X0^c. No trailing zeros.
using XPoly = std::vector<ScalarExpr>;

namespace xpoly {
void trim(XPoly& p);
XPoly add(const XPoly& a, const XPoly& b);
XPoly sub(const XPoly& a, const XPoly& b);
XPoly mul(const XPoly& a, const XPoly& b);
XPoly scale(const XPoly& a, const ScalarExpr& s);
/// p(X0 + shift)
XPoly shift(const XPoly& p, const ScalarExpr& shift);
std::complex<double> eval(const XPoly& p, std::complex<double> x, const NumericBindings& b);
}  // namespace xpoly

/// The profile rho of a surface of rotation x^2 + y^2 = rho(z), together with
/// the deformation parameter epsilon.
class SurfaceProfile {
 public:
  enum class Kind { ExactPolynomial, Numeric };
  using NumericFn = std::function<double(double)>;

  /// rho(u) = sum_i coeffs[i] u^i  (constant term first).
  static SurfaceProfile polynomial(std::vector<ScalarExpr> coeffs, ScalarExpr epsilon,
                                   std::string name = "polynomial");
  static SurfaceProfile numeric(NumericFn fn, double epsilon, std::string name,
                                std::optional<Interval> positivity = std::nullopt);

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::ExactPolynomial; }
  const std::string& name() const { return name_; }
  const XPoly& coeffs() const;
  const ScalarExpr& epsilon() const;
  double epsilon_value(const NumericBindings& b = {}) const;
  /// rho restricted to the real line is real-valued.
  bool real() const { return real_; }

  std::optional<Interval> declared_positivity() const { return positivity_; }
  /// Attach I_rho; checked on a grid to satisfy rho > 0 in its interior.
  void set_positivity(Interval i, const NumericBindings& b = {});

  double value(double u, const NumericBindings& b = {}) const;
  std::complex<double> value_complex(double u, const NumericBindings& b = {}) const;

  /// Substitute exact values for formal parameters in coefficients and epsilon.
  SurfaceProfile specialize(const std::map<std::string, ScalarExpr>& values) const;

 private:
  Kind kind_ = Kind::ExactPolynomial;
  std::string name_;
  XPoly coeffs_;
  ScalarExpr epsilon_;
  NumericFn fn_;
  double numeric_epsilon_ = 0.0;
  bool real_ = true;
  std::optional<Interval> positivity_;
};

class NCPoly {
 public:
  struct Term {
    unsigned plus = 0;
    unsigned zero = 0;
    unsigned minus = 0;
    ScalarExpr coeff;
  };

  NCPoly() = default;
  static NCPoly one();
  static NCPoly scalar(const ScalarExpr& c);
  static NCPoly generator(Letter l);
  static NCPoly x0_poly(XPoly p);
  static NCPoly from_part(int charge, XPoly p);

  bool is_zero() const { return parts_.empty(); }
  const std::map<int, XPoly>& parts() const { return parts_; }
  const XPoly* part(int charge) const;
  /// Terms as coeff * X+^plus X0^zero X-^minus.
  std::vector<Term> terms() const;
  /// Coefficient of the unit monomial.
  ScalarExpr constant_term() const;

  NCPoly operator-() const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(const ScalarExpr& s, const NCPoly& f);
  friend bool operator==(const NCPoly& a, const NCPoly& b);

  /// Apply `op` to every coefficient (e.g. substitution).
  NCPoly map_coeffs(const std::function<ScalarExpr(const ScalarExpr&)>& op) const;

 private:
  void add_part(int charge, const XPoly& p, bool negate);
  std::map<int, XPoly> parts_;
};

std::string to_string(const NCPoly& f);
std::ostream& operator<<(std::ostream& os, const NCPoly& f);

NCPoly reduce_word(const Word& w, const SurfaceProfile& s);
NCPoly mul(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s);
NCPoly commutator(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s);
/// Antilinear antihomomorphism X0 -> X0, X+ <-> X-; requires a real profile.
NCPoly dagger(const NCPoly& f, const SurfaceProfile& s);
/// Drop positive powers of epsilon; throws if a negative power is present.
NCPoly classical_limit(const NCPoly& f, std::string_view eps_param = "epsilon");
/// lim (1/eps)[f, g]; requires a formal epsilon and [f, g] = O(eps).
NCPoly poisson(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s);

/// Name of the formal parameter that epsilon is, or nullopt if epsilon is
/// not a bare parameter.
std::optional<std::string> formal_epsilon_name(const SurfaceProfile& s);

}  // namespace ncsurf
