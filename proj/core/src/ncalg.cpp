#include "ncsurf/ncalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ncsurf/errors.hpp"

namespace ncsurf {

// --- words ------------------------------------------------------------------

Word parse_word(std::string_view text) {
  Word w;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == 'X' || ch == '*') continue;
    switch (ch) {
      case '+': w.push_back(Letter::Plus); break;
      case '0': w.push_back(Letter::Zero); break;
      case '-': w.push_back(Letter::Minus); break;
      default: throw UsageError(std::string("unexpected character '") + ch + "' in word");
    }
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  for (Letter l : w) s += l == Letter::Plus ? "X+" : l == Letter::Zero ? "X0" : "X-";
  return s.empty() ? "1" : s;
}

// --- polynomials in X0 ------------------------------------------------------

namespace xpoly {

void trim(XPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

XPoly add(const XPoly& a, const XPoly& b) {
  XPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

XPoly sub(const XPoly& a, const XPoly& b) {
  XPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

XPoly mul(const XPoly& a, const XPoly& b) {
  if (a.empty() || b.empty()) return {};
  XPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

XPoly scale(const XPoly& a, const ScalarExpr& s) {
  if (s.is_zero()) return {};
  XPoly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(c * s);
  trim(r);
  return r;
}

XPoly shift(const XPoly& p, const ScalarExpr& t) {
  if (p.size() <= 1 || t.is_zero()) return p;
  std::vector<ScalarExpr> tp(p.size());
  tp[0] = ScalarExpr(1);
  for (std::size_t i = 1; i < p.size(); ++i) tp[i] = tp[i - 1] * t;
  XPoly r(p.size());
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c].is_zero()) continue;
    Integer binom = 1;
    for (std::size_t i = c + 1; i-- > 0;) {
      // contributes C(c, i) t^{c-i} to X0^i
      r[i] += p[c] * ScalarExpr(Rational(binom)) * tp[c - i];
      if (i > 0) binom = binom * static_cast<unsigned long>(i) / static_cast<unsigned long>(c - i + 1);
    }
  }
  trim(r);
  return r;
}

std::complex<double> eval(const XPoly& p, std::complex<double> x, const NumericBindings& b) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i].eval(b);
  return acc;
}

}  // namespace xpoly

// --- SurfaceProfile ---------------------------------------------------------

namespace {

bool conj_invariant(const ScalarExpr& e) { return e.conj() == e; }

}  // namespace

SurfaceProfile SurfaceProfile::polynomial(std::vector<ScalarExpr> coeffs, ScalarExpr epsilon, std::string name) {
  SurfaceProfile s;
  s.kind_ = Kind::ExactPolynomial;
  s.name_ = std::move(name);
  s.coeffs_ = std::move(coeffs);
  xpoly::trim(s.coeffs_);
  s.epsilon_ = std::move(epsilon);
  s.real_ = conj_invariant(s.epsilon_) &&
            std::all_of(s.coeffs_.begin(), s.coeffs_.end(), conj_invariant);
  return s;
}

SurfaceProfile SurfaceProfile::numeric(NumericFn fn, double epsilon, std::string name,
                                       std::optional<Interval> positivity) {
  if (!fn) throw UsageError("numeric profile needs a callable");
  SurfaceProfile s;
  s.kind_ = Kind::Numeric;
  s.name_ = std::move(name);
  s.fn_ = std::move(fn);
  s.numeric_epsilon_ = epsilon;
  s.real_ = true;
  if (positivity) s.set_positivity(*positivity);
  return s;
}

const XPoly& SurfaceProfile::coeffs() const {
  if (!is_exact()) throw Unsupported("profile '" + name_ + "' is not an exact polynomial");
  return coeffs_;
}

const ScalarExpr& SurfaceProfile::epsilon() const {
  if (!is_exact()) throw Unsupported("profile '" + name_ + "' has a numeric epsilon only");
  return epsilon_;
}

double SurfaceProfile::epsilon_value(const NumericBindings& b) const {
  return is_exact() ? epsilon_.eval(b).real() : numeric_epsilon_;
}

std::complex<double> SurfaceProfile::value_complex(double u, const NumericBindings& b) const {
  if (!is_exact()) return fn_(u);
  return xpoly::eval(coeffs_, u, b);
}

double SurfaceProfile::value(double u, const NumericBindings& b) const { return value_complex(u, b).real(); }

void SurfaceProfile::set_positivity(Interval iv, const NumericBindings& b) {
  if (!(iv.lo < iv.hi)) throw UsageError("positivity interval is empty");
  if (real_) {
    constexpr int kSamples = 257;
    double lo = iv.lo, hi = iv.hi;
    double centre = iv.bounded_below() && iv.bounded_above() ? 0.5 * (lo + hi)
                    : iv.bounded_below()                    ? lo + 1.0
                    : iv.bounded_above()                    ? hi - 1.0
                                                            : 0.0;
    for (int i = 1; i < kSamples; ++i) {
      double t = static_cast<double>(i) / kSamples;
      double u;
      if (iv.bounded_below() && iv.bounded_above()) {
        u = lo + t * (hi - lo);
      } else {
        // march outwards geometrically on unbounded sides
        double s = (t - 0.5) * 2.0;
        double step = std::copysign(std::expm1(std::abs(s) * 6.0), s);
        u = centre + step;
        if (u <= lo || u >= hi) continue;
      }
      if (!(value(u, b) > 0.0))
        throw UsageError("profile '" + name_ + "' is not positive inside the declared interval at u=" +
                         std::to_string(u));
    }
  }
  positivity_ = iv;
}

SurfaceProfile SurfaceProfile::specialize(const std::map<std::string, ScalarExpr>& values) const {
  if (!is_exact()) return *this;
  std::vector<ScalarExpr> c = coeffs_;
  ScalarExpr eps = epsilon_;
  for (const auto& [name, v] : values) {
    for (auto& x : c) x = x.substitute(name, v);
    eps = eps.substitute(name, v);
  }
  SurfaceProfile s = polynomial(std::move(c), std::move(eps), name_);
  s.positivity_ = positivity_;
  return s;
}

std::optional<std::string> formal_epsilon_name(const SurfaceProfile& s) {
  const ScalarExpr& e = s.epsilon();
  if (!e.is_single_term()) return std::nullopt;
  const auto& [k, c] = *e.terms().begin();
  if (k.radicand != 1 || !(c == Gaussian(1))) return std::nullopt;
  const auto& pw = k.monomial.powers();
  if (pw.size() != 1 || pw[0].second != 1) return std::nullopt;
  return pw[0].first;
}

// --- NCPoly -----------------------------------------------------------------

NCPoly NCPoly::one() { return scalar(ScalarExpr(1)); }

NCPoly NCPoly::scalar(const ScalarExpr& c) { return from_part(0, XPoly{c}); }

NCPoly NCPoly::generator(Letter l) {
  switch (l) {
    case Letter::Plus: return from_part(1, XPoly{ScalarExpr(1)});
    case Letter::Minus: return from_part(-1, XPoly{ScalarExpr(1)});
    case Letter::Zero: break;
  }
  return from_part(0, XPoly{ScalarExpr(0), ScalarExpr(1)});
}

NCPoly NCPoly::x0_poly(XPoly p) { return from_part(0, std::move(p)); }

NCPoly NCPoly::from_part(int charge, XPoly p) {
  NCPoly f;
  xpoly::trim(p);
  if (!p.empty()) f.parts_.emplace(charge, std::move(p));
  return f;
}

const XPoly* NCPoly::part(int charge) const {
  auto it = parts_.find(charge);
  return it == parts_.end() ? nullptr : &it->second;
}

std::vector<NCPoly::Term> NCPoly::terms() const {
  std::vector<Term> out;
  for (const auto& [d, h] : parts_) {
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h[c].is_zero()) continue;
      Term t;
      t.plus = d > 0 ? static_cast<unsigned>(d) : 0u;
      t.minus = d < 0 ? static_cast<unsigned>(-d) : 0u;
      t.zero = static_cast<unsigned>(c);
      t.coeff = h[c];
      out.push_back(std::move(t));
    }
  }
  return out;
}

ScalarExpr NCPoly::constant_term() const {
  const XPoly* h = part(0);
  return (h && !h->empty()) ? (*h)[0] : ScalarExpr();
}

void NCPoly::add_part(int charge, const XPoly& p, bool negate) {
  if (p.empty()) return;
  auto it = parts_.find(charge);
  if (it == parts_.end()) {
    XPoly q = p;
    if (negate)
      for (auto& c : q) c = -c;
    xpoly::trim(q);
    if (!q.empty()) parts_.emplace(charge, std::move(q));
    return;
  }
  it->second = negate ? xpoly::sub(it->second, p) : xpoly::add(it->second, p);
  if (it->second.empty()) parts_.erase(it);
}

NCPoly NCPoly::operator-() const {
  NCPoly r;
  for (const auto& [d, h] : parts_) r.add_part(d, h, true);
  return r;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [d, h] : o.parts_) add_part(d, h, false);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [d, h] : o.parts_) add_part(d, h, true);
  return *this;
}

NCPoly operator*(const ScalarExpr& s, const NCPoly& f) {
  NCPoly r;
  for (const auto& [d, h] : f.parts_) r.add_part(d, xpoly::scale(h, s), false);
  return r;
}

bool operator==(const NCPoly& a, const NCPoly& b) {
  if (a.parts_.size() != b.parts_.size()) return false;
  auto i = a.parts_.begin();
  auto j = b.parts_.begin();
  for (; i != a.parts_.end(); ++i, ++j) {
    if (i->first != j->first || i->second.size() != j->second.size()) return false;
    for (std::size_t c = 0; c < i->second.size(); ++c)
      if (!(i->second[c] == j->second[c])) return false;
  }
  return true;
}

NCPoly NCPoly::map_coeffs(const std::function<ScalarExpr(const ScalarExpr&)>& op) const {
  NCPoly r;
  for (const auto& [d, h] : parts_) {
    XPoly q;
    q.reserve(h.size());
    for (const auto& c : h) q.push_back(op(c));
    r.add_part(d, q, false);
  }
  return r;
}

std::string to_string(const NCPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(t.coeff) << ")";
    if (t.plus) os << "*X+" << (t.plus > 1 ? "^" + std::to_string(t.plus) : "");
    if (t.zero) os << "*X0" << (t.zero > 1 ? "^" + std::to_string(t.zero) : "");
    if (t.minus) os << "*X-" << (t.minus > 1 ? "^" + std::to_string(t.minus) : "");
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const NCPoly& f) { return os << to_string(f); }

// --- the product ------------------------------------------------------------

namespace {

// Shifted copies of rho and the two pair-products, memoised per call of mul.
class Kernel {
 public:
  explicit Kernel(const SurfaceProfile& s) : rho_(s.coeffs()), eps_(s.epsilon()) {}

  const ScalarExpr& eps() const { return eps_; }

  XPoly shift(const XPoly& h, int t) {
    if (t == 0) return h;
    return xpoly::shift(h, eps_ * ScalarExpr(static_cast<long>(t)));
  }

  // rho(X0 + i eps)
  const XPoly& rho_at(int i) {
    auto it = rho_shift_.find(i);
    if (it != rho_shift_.end()) return it->second;
    return rho_shift_.emplace(i, shift(rho_, i)).first->second;
  }

  // X-^b X+^b = prod_{i=1}^{b} rho(X0 + i eps)
  const XPoly& minus_plus(unsigned b) {
    auto it = mp_.find(b);
    if (it != mp_.end()) return it->second;
    XPoly r = b == 0 ? XPoly{ScalarExpr(1)} : xpoly::mul(minus_plus(b - 1), rho_at(static_cast<int>(b)));
    return mp_.emplace(b, std::move(r)).first->second;
  }

  // X+^s X-^s = prod_{i=0}^{s-1} rho(X0 - i eps)
  const XPoly& plus_minus(unsigned s) {
    auto it = pm_.find(s);
    if (it != pm_.end()) return it->second;
    XPoly r = s == 0 ? XPoly{ScalarExpr(1)}
                     : xpoly::mul(plus_minus(s - 1), rho_at(-static_cast<int>(s - 1)));
    return pm_.emplace(s, std::move(r)).first->second;
  }

  // (X+^a1 h1 X-^b1)(X+^a2 h2 X-^b2) as (charge, poly)
  std::pair<int, XPoly> product(unsigned a1, const XPoly& h1, unsigned b1, unsigned a2, const XPoly& h2,
                                unsigned b2) {
    unsigned p = 0, q = 0;
    XPoly g;
    if (b1 <= a2) {
      p = a2 - b1;
      g = shift(minus_plus(b1), static_cast<int>(p));
    } else {
      q = b1 - a2;
      g = shift(minus_plus(a2), static_cast<int>(q));
    }
    XPoly mid = xpoly::mul(xpoly::mul(shift(h1, static_cast<int>(p)), g), shift(h2, static_cast<int>(q)));
    unsigned A = a1 + p, B = q + b2;
    unsigned s = std::min(A, B);
    if (s > 0) mid = xpoly::mul(shift(mid, -static_cast<int>(s)), plus_minus(s));
    return {static_cast<int>(A) - static_cast<int>(B), std::move(mid)};
  }

 private:
  const XPoly& rho_;
  ScalarExpr eps_;
  std::map<int, XPoly> rho_shift_;
  std::map<unsigned, XPoly> mp_;
  std::map<unsigned, XPoly> pm_;
};

unsigned plus_of(int d) { return d > 0 ? static_cast<unsigned>(d) : 0u; }
unsigned minus_of(int d) { return d < 0 ? static_cast<unsigned>(-d) : 0u; }

void require_exact(const SurfaceProfile& s) {
  if (!s.is_exact())
    throw Unsupported("profile '" + s.name() + "' is not polynomial; symbolic reduction is unavailable");
}

}  // namespace

NCPoly mul(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s) {
  require_exact(s);
  Kernel k(s);
  NCPoly out;
  for (const auto& [d1, h1] : f.parts()) {
    for (const auto& [d2, h2] : g.parts()) {
      auto [d, h] = k.product(plus_of(d1), h1, minus_of(d1), plus_of(d2), h2, minus_of(d2));
      out += NCPoly::from_part(d, std::move(h));
    }
  }
  return out;
}

NCPoly reduce_word(const Word& w, const SurfaceProfile& s) {
  require_exact(s);
  NCPoly r = NCPoly::one();
  for (Letter l : w) r = mul(r, NCPoly::generator(l), s);
  return r;
}

NCPoly commutator(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s) {
  return mul(f, g, s) - mul(g, f, s);
}

NCPoly dagger(const NCPoly& f, const SurfaceProfile& s) {
  if (!s.real()) throw UsageError("dagger is undefined for a non-real profile");
  NCPoly r;
  for (const auto& [d, h] : f.parts()) {
    XPoly c;
    c.reserve(h.size());
    for (const auto& x : h) c.push_back(x.conj());
    // (X+^d h)^dag = conj(h) X-^d and (h X-^b)^dag = X+^b conj(h): both canonical
    r += NCPoly::from_part(-d, std::move(c));
  }
  return r;
}

NCPoly classical_limit(const NCPoly& f, std::string_view eps_param) {
  return f.map_coeffs([&](const ScalarExpr& c) {
    if (c.min_exponent(eps_param) < 0)
      throw UsageError("not classically regular: negative power of " + std::string(eps_param) + " in " +
                       to_string(c));
    return c.drop_positive_powers(eps_param);
  });
}

NCPoly poisson(const NCPoly& f, const NCPoly& g, const SurfaceProfile& s) {
  auto name = formal_epsilon_name(s);
  if (!name) throw UsageError("poisson needs a formal epsilon parameter");
  NCPoly c = commutator(f, g, s);
  for (const auto& [d, h] : c.parts())
    for (const auto& x : h)
      if (!x.is_zero() && x.min_exponent(*name) < 1)
        throw UsageError("commutator is not O(" + *name + "); no Poisson limit");
  NCPoly scaled = c.map_coeffs([&](const ScalarExpr& x) { return x.times_power(*name, -1); });
  return classical_limit(scaled, *name);
}

}  // namespace ncsurf
