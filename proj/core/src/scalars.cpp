#include "ncsurf/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ncsurf/errors.hpp"

namespace ncsurf {

namespace {

Integer parse_integer(std::string_view digits) {
  if (digits.empty()) throw UsageError("malformed number: empty");
  std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
  if (start == digits.size()) throw UsageError("malformed number: '" + std::string(digits) + "'");
  for (std::size_t i = start; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i])))
      throw UsageError("malformed number: '" + std::string(digits) + "'");
  std::string s(digits[0] == '+' ? digits.substr(1) : digits);
  return Integer(s, 10);
}

Rational parse_decimal(std::string_view text) {
  std::size_t epos = text.find_first_of("eE");
  long exponent = 0;
  std::string_view mantissa = text;
  if (epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    Integer e = parse_integer(text.substr(epos + 1));
    if (!e.fits_slong_p() || abs(e) > 4000) throw UsageError("exponent out of range: '" + std::string(text) + "'");
    exponent = e.get_si();
  }
  std::string digits;
  std::size_t dot = mantissa.find('.');
  if (dot != std::string_view::npos) {
    digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+")
      throw UsageError("malformed number: '" + std::string(text) + "'");
  } else {
    digits = std::string(mantissa);
  }
  Rational q(parse_integer(digits));
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  if (exponent >= 0)
    q *= scale;
  else
    q /= scale;
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw UsageError("malformed number: empty");
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (sgn(den) == 0) throw UsageError("malformed number: zero denominator in '" + std::string(text) + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

void split_square(const Integer& n, Integer& outside, Integer& inside) {
  if (sgn(n) <= 0) throw UsageError("split_square: radicand must be positive");
  outside = 1;
  inside = 1;
  Integer rest = n;
  constexpr unsigned long kTrialLimit = 1ul << 17;
  unsigned long p = 2;
  for (; p < kTrialLimit; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    int count = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++count;
    }
    for (int k = 0; k < count / 2; ++k) outside *= p;
    if (count % 2 == 1) inside *= p;
  }
  if (rest == 1) return;
  if (Integer(p) * p > rest) {  // rest is prime
    inside *= rest;
    return;
  }
  if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
    outside *= r;
    return;
  }
  throw Unsupported("cannot certify the squarefree part of " + n.get_str());
}

Integer factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Gaussian Gaussian::inverse() const {
  Rational d = norm_sq();
  if (sgn(d) == 0) throw UsageError("division by zero");
  return {re / d, -im / d};
}

std::string to_string(const Gaussian& g) {
  if (g.is_real()) return g.re.get_str();
  if (sgn(g.re) == 0) return g.im.get_str() + "i";
  std::string im = g.im.get_str();
  return "(" + g.re.get_str() + (sgn(g.im) > 0 ? "+" : "") + im + "i)";
}

// --- SqrtRational ----------------------------------------------------------

SqrtRational::SqrtRational(Rational coeff, const Integer& radicand) : coeff_(std::move(coeff)) {
  if (sgn(radicand) <= 0) throw UsageError("SqrtRational: radicand must be positive");
  Integer out;
  split_square(radicand, out, radicand_);
  coeff_ *= out;
  canonicalize();
}

void SqrtRational::canonicalize() {
  coeff_.canonicalize();
  if (sgn(coeff_) == 0) radicand_ = 1;
}

SqrtRational SqrtRational::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw UsageError("sqrt_of: negative argument " + q.get_str());
  if (sgn(q) == 0) return {};
  Integer prod = q.get_num() * q.get_den();
  return SqrtRational(Rational(1, 1) / q.get_den(), prod);
}

double SqrtRational::to_double() const { return coeff_.get_d() * std::sqrt(radicand_.get_d()); }

SqrtRational operator*(const SqrtRational& a, const SqrtRational& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Integer g = gcd(a.radicand_, b.radicand_);
  SqrtRational r;
  r.coeff_ = a.coeff_ * b.coeff_ * g;
  r.radicand_ = (a.radicand_ / g) * (b.radicand_ / g);
  r.canonicalize();
  return r;
}

SqrtRational operator/(const SqrtRational& a, const SqrtRational& b) {
  if (b.is_zero()) throw UsageError("SqrtRational: division by zero");
  SqrtRational inv;
  inv.coeff_ = Rational(1) / (b.coeff_ * b.radicand_);
  inv.radicand_ = b.radicand_;
  inv.canonicalize();
  return a * inv;
}

std::string to_string(const SqrtRational& s) {
  if (s.radicand() == 1) return s.coeff().get_str();
  return s.coeff().get_str() + "*sqrt(" + s.radicand().get_str() + ")";
}

// --- Monomial / ParamSet ----------------------------------------------------

Monomial Monomial::of(std::string name, int exponent) {
  Monomial m;
  if (exponent != 0) m.powers_.emplace_back(std::move(name), exponent);
  return m;
}

int Monomial::exponent(std::string_view name) const {
  for (const auto& [n, e] : powers_)
    if (n == name) return e;
  return 0;
}

Monomial Monomial::without(std::string_view name) const {
  Monomial m;
  for (const auto& p : powers_)
    if (p.first != name) m.powers_.push_back(p);
  return m;
}

Monomial Monomial::pow(int k) const {
  Monomial m;
  if (k == 0) return m;
  for (const auto& [n, e] : powers_) m.powers_.emplace_back(n, e * k);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto i = a.powers_.begin();
  auto j = b.powers_.begin();
  while (i != a.powers_.end() || j != b.powers_.end()) {
    if (j == b.powers_.end() || (i != a.powers_.end() && i->first < j->first)) {
      r.powers_.push_back(*i++);
    } else if (i == a.powers_.end() || j->first < i->first) {
      r.powers_.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) r.powers_.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return r;
}

std::string to_string(const Monomial& m) {
  std::string s;
  for (const auto& [n, e] : m.powers()) {
    if (!s.empty()) s += "*";
    s += n;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::shared_ptr<const ParamSet> ParamSet::declare(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw UsageError("ParamSet: duplicate parameter name");
  return std::shared_ptr<const ParamSet>(new ParamSet(std::move(names)));
}

bool ParamSet::contains(std::string_view name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

ScalarExpr param(const ParamSetPtr& set, const std::string& name) {
  if (!set || !set->contains(name)) throw UsageError("undeclared parameter '" + name + "'");
  ScalarExpr e;
  e.params_ = set;
  e.terms_.emplace(ScalarExpr::Key{Integer(1), Monomial::of(name)}, Gaussian(1));
  return e;
}

// --- ScalarExpr -------------------------------------------------------------

ScalarExpr::ScalarExpr(const Gaussian& g) {
  if (!g.is_zero()) terms_.emplace(Key{Integer(1), Monomial{}}, g);
}

ScalarExpr::ScalarExpr(const SqrtRational& s) {
  if (!s.is_zero()) terms_.emplace(Key{s.radicand(), Monomial{}}, Gaussian(s.coeff()));
}

ScalarExpr::ScalarExpr(const Gaussian& g, const Integer& radicand, Monomial m, ParamSetPtr params)
    : params_(std::move(params)) {
  if (params_)
    for (const auto& [n, e] : m.powers())
      if (!params_->contains(n)) throw UsageError("undeclared parameter '" + n + "'");
  Integer out, in;
  split_square(radicand, out, in);
  Gaussian c = g * Gaussian(Rational(out));
  if (!c.is_zero()) terms_.emplace(Key{in, std::move(m)}, c);
}

ParamSetPtr ScalarExpr::merge(const ParamSetPtr& a, const ParamSetPtr& b) {
  if (!a) return b;
  if (!b || a == b || *a == *b) return a;
  throw UsageError("ScalarExpr operands use different parameter declarations");
}

void ScalarExpr::add_term(const Key& key, const Gaussian& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool ScalarExpr::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.monomial.is_one(); });
}

std::optional<Rational> ScalarExpr::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() != 1) return std::nullopt;
  const auto& [k, c] = *terms_.begin();
  if (k.radicand != 1 || !k.monomial.is_one() || !c.is_real()) return std::nullopt;
  return c.re;
}

std::optional<Gaussian> ScalarExpr::as_gaussian() const {
  if (terms_.empty()) return Gaussian(0);
  if (terms_.size() != 1) return std::nullopt;
  const auto& [k, c] = *terms_.begin();
  if (k.radicand != 1 || !k.monomial.is_one()) return std::nullopt;
  return c;
}

ScalarExpr ScalarExpr::conj() const {
  ScalarExpr r;
  r.params_ = params_;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
  return r;
}

ScalarExpr ScalarExpr::inverse() const {
  if (terms_.size() != 1) throw Unsupported("inverse of a ScalarExpr with " + std::to_string(terms_.size()) + " terms");
  const auto& [k, c] = *terms_.begin();
  ScalarExpr r;
  r.params_ = params_;
  // 1/(c sqrt(s)) = c^{-1} s^{-1} sqrt(s)
  Gaussian inv = c.inverse() * Gaussian(Rational(1) / Rational(k.radicand));
  r.terms_.emplace(Key{k.radicand, k.monomial.pow(-1)}, inv);
  return r;
}

ScalarExpr ScalarExpr::pow(unsigned k) const {
  ScalarExpr result(1);
  result.params_ = params_;
  ScalarExpr base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

int ScalarExpr::min_exponent(std::string_view name) const {
  if (terms_.empty()) return 0;
  int v = terms_.begin()->first.monomial.exponent(name);
  for (const auto& [k, c] : terms_) v = std::min(v, k.monomial.exponent(name));
  return v;
}

int ScalarExpr::max_exponent(std::string_view name) const {
  if (terms_.empty()) return 0;
  int v = terms_.begin()->first.monomial.exponent(name);
  for (const auto& [k, c] : terms_) v = std::max(v, k.monomial.exponent(name));
  return v;
}

ScalarExpr ScalarExpr::drop_positive_powers(std::string_view name) const {
  ScalarExpr r;
  r.params_ = params_;
  for (const auto& [k, c] : terms_)
    if (k.monomial.exponent(name) <= 0) r.terms_.emplace(k, c);
  return r;
}

ScalarExpr ScalarExpr::times_power(std::string_view name, int k) const {
  if (k == 0) return *this;
  ScalarExpr r;
  r.params_ = params_;
  Monomial m = Monomial::of(std::string(name), k);
  for (const auto& [key, c] : terms_) r.add_term(Key{key.radicand, key.monomial * m}, c);
  return r;
}

namespace {

ScalarExpr power_of(const ScalarExpr& value, int e, std::map<int, ScalarExpr>& cache) {
  auto it = cache.find(e);
  if (it != cache.end()) return it->second;
  ScalarExpr p = e >= 0 ? value.pow(static_cast<unsigned>(e)) : value.inverse().pow(static_cast<unsigned>(-e));
  cache.emplace(e, p);
  return p;
}

}  // namespace

ScalarExpr ScalarExpr::substitute(std::string_view name, const ScalarExpr& value) const {
  ScalarExpr r;
  r.params_ = merge(params_, value.params_);
  std::map<int, ScalarExpr> cache;
  for (const auto& [k, c] : terms_) {
    int e = k.monomial.exponent(name);
    ScalarExpr rest(c, k.radicand, k.monomial.without(name), nullptr);
    rest.params_ = r.params_;
    if (e == 0) {
      r += rest;
    } else {
      r += rest * power_of(value, e, cache);
    }
  }
  return r;
}

ScalarExpr ScalarExpr::substitute_square(std::string_view name, const ScalarExpr& square_value) const {
  ScalarExpr r;
  r.params_ = merge(params_, square_value.params_);
  std::map<int, ScalarExpr> cache;
  for (const auto& [k, c] : terms_) {
    int e = k.monomial.exponent(name);
    if (e % 2 != 0)
      throw UsageError("substitute_square: odd power of '" + std::string(name) + "'");
    ScalarExpr rest(c, k.radicand, k.monomial.without(name), nullptr);
    rest.params_ = r.params_;
    r += (e == 0) ? rest : rest * power_of(square_value, e / 2, cache);
  }
  return r;
}

ScalarExpr ScalarExpr::monomial_sqrt() const {
  if (terms_.empty()) return *this;
  if (terms_.size() != 1) throw Unsupported("monomial_sqrt: more than one term");
  const auto& [k, c] = *terms_.begin();
  if (k.radicand != 1 || !c.is_real() || sgn(c.re) <= 0)
    throw Unsupported("monomial_sqrt: coefficient is not a positive rational: " + to_string(*this));
  Monomial half;
  for (const auto& [n, e] : k.monomial.powers()) {
    if (e % 2 != 0) throw Unsupported("monomial_sqrt: odd exponent of " + n);
    half = half * Monomial::of(n, e / 2);
  }
  SqrtRational root = SqrtRational::sqrt_of(c.re);
  ScalarExpr r(Gaussian(root.coeff()), root.radicand(), half, params_);
  return r;
}

std::complex<double> ScalarExpr::eval(const NumericBindings& bindings) const {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [k, c] : terms_) {
    std::complex<double> t = c.to_complex();
    if (k.radicand != 1) t *= std::sqrt(k.radicand.get_d());
    for (const auto& [n, e] : k.monomial.powers()) {
      auto it = bindings.find(n);
      if (it == bindings.end()) throw UsageError("unbound parameter '" + n + "'");
      if (e < 0 && it->second == std::complex<double>(0.0, 0.0))
        throw UsageError("division by zero: parameter '" + n + "' bound to 0 with negative exponent");
      t *= std::pow(it->second, e);
    }
    sum += t;
  }
  return sum;
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r;
  r.params_ = params_;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) {
  params_ = merge(params_, o.params_);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) {
  params_ = merge(params_, o.params_);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr r;
  r.params_ = ScalarExpr::merge(a.params_, b.params_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      Gaussian c = ca * cb;
      if (ka.radicand == 1 || kb.radicand == 1) {
        r.add_term(ScalarExpr::Key{ka.radicand * kb.radicand, ka.monomial * kb.monomial}, c);
        continue;
      }
      Integer g = gcd(ka.radicand, kb.radicand);
      Integer rad = (ka.radicand / g) * (kb.radicand / g);
      r.add_term(ScalarExpr::Key{rad, ka.monomial * kb.monomial}, c * Gaussian(Rational(g)));
    }
  }
  return r;
}

bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end(); ++i, ++j)
    if (!(i->first == j->first) || !(i->second == j->second)) return false;
  return true;
}

std::string to_string(const ScalarExpr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : e.terms()) {
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    if (k.radicand != 1) os << "*sqrt(" << k.radicand.get_str() << ")";
    if (!k.monomial.is_one()) os << "*" << to_string(k.monomial);
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ScalarExpr& e) { return os << to_string(e); }

}  // namespace ncsurf
