#include "ncsurf/harmonic.hpp"

#include <cstdlib>
#include <sstream>

#include "ncsurf/errors.hpp"

namespace ncsurf {

namespace {

using RPoly = std::vector<Rational>;  // polynomial in k, constant first

void trim(RPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

Rational binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

const std::vector<Rational>& bernoulli(unsigned upto) {
  static std::mutex mu;
  static std::vector<Rational> b{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (b.size() <= upto) {
    unsigned m = static_cast<unsigned>(b.size());
    Rational s = 0;
    for (unsigned j = 0; j < m; ++j) s += binomial(m + 1, j) * b[j];
    b.push_back(-s / Rational(m + 1));
  }
  return b;
}

// sum_{j=-k}^{k} j^c as a polynomial in k
RPoly symmetric_power_sum(unsigned c) {
  if (c == 0) return {Rational(1), Rational(2)};
  if (c % 2 == 1) return {};
  const auto& B = bernoulli(c);
  RPoly p(c + 2);
  // sum_{j=1}^{k} j^c = 1/(c+1) sum_i (-1)^i C(c+1, i) B_i k^{c+1-i}
  for (unsigned i = 0; i <= c; ++i) {
    Rational t = binomial(c + 1, i) * B[i] / Rational(c + 1);
    if (i % 2 == 1) t = -t;
    p[c + 1 - i] += 2 * t;
  }
  trim(p);
  return p;
}

}  // namespace

std::vector<Rational> trace_power_in_w(unsigned c) {
  static std::mutex mu;
  static std::map<unsigned, std::vector<Rational>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(c); it != cache.end()) return it->second;
  }
  RPoly t = symmetric_power_sum(c);
  // exact division by 2k + 1
  RPoly q;
  if (!t.empty()) {
    q.assign(t.size() - 1, Rational(0));
    RPoly r = t;
    for (std::size_t i = r.size() - 1; i >= 1; --i) {
      Rational coef = r[i] / 2;
      q[i - 1] = coef;
      r[i] -= 2 * coef;
      r[i - 1] -= coef;
    }
    if (sgn(r[0]) != 0)
      throw InternalInconsistency("power sum of degree " + std::to_string(c) + " not divisible by 2k+1");
  }
  trim(q);
  // rewrite in w = k^2 + k
  std::vector<Rational> w;
  while (!q.empty()) {
    std::size_t d = q.size() - 1;
    if (d % 2 != 0) throw InternalInconsistency("trace polynomial is not a polynomial in k(k+1)");
    unsigned i = static_cast<unsigned>(d / 2);
    Rational a = q.back();
    if (w.size() <= i) w.resize(i + 1);
    w[i] = a;
    // subtract a (k^2 + k)^i = a sum_j C(i, j) k^{2i - j}
    for (unsigned j = 0; j <= i; ++j) q[2 * i - j] -= a * binomial(i, j);
    trim(q);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(c, w);
  return w;
}

// --- SphereFamily / Specialization ---------------------------------------------

SphereFamily::SphereFamily()
    : params_(ParamSet::declare({"R", "alpha", "epsilon"})),
      alpha_(param(params_, "alpha")),
      eps_(param(params_, "epsilon")),
      R_(param(params_, "R")) {
  ScalarExpr a2 = alpha_ * alpha_;
  profile_ = SurfaceProfile::polynomial({a2 * R_ * R_, a2 * eps_, -a2}, eps_, "sphere-family");
}

ScalarExpr Specialization::apply(const ScalarExpr& e) const {
  Rational kk = k.as_rational() * (k.as_rational() + 1);
  ScalarExpr r = e.substitute_square("R", ScalarExpr(epsilon * epsilon * kk));
  r = r.substitute("epsilon", ScalarExpr(epsilon));
  return r.substitute("alpha", ScalarExpr(alpha));
}

NumericBindings Specialization::bindings() const {
  double kv = k.value();
  double e = epsilon.get_d();
  return {{"alpha", alpha.to_complex()}, {"epsilon", e}, {"R", e * std::sqrt(kv * (kv + 1))}};
}

// --- basis ----------------------------------------------------------------------

void HarmonicBasis::build_degree(int n) const {
  const auto& s = profile();
  const NCPoly xm = NCPoly::generator(Letter::Minus);
  NCPoly body = NCPoly::from_part(n, XPoly{ScalarExpr(1)});
  for (int m = n; m >= -n; --m) {
    if (m < n) body = mul(xm, body, s) - mul(body, xm, s);
    Rational ratio(factorial(static_cast<unsigned>(n + m)),
                   factorial(static_cast<unsigned>(2 * n)) * factorial(static_cast<unsigned>(n - m)));
    ratio.canonicalize();
    ScalarExpr pref(SqrtRational::sqrt_of(ratio));
    ScalarExpr ae = (fam_.alpha() * fam_.eps()).inverse().pow(static_cast<unsigned>(n - m));
    NCPoly p = (pref * ae) * body;
    for (const auto& t : p.terms())
      if (t.coeff.min_exponent("epsilon") < 0)
        throw InternalInconsistency("negative power of epsilon survives in P^" + std::to_string(m) + "_" +
                                    std::to_string(n));
    cache_.emplace(std::make_pair(n, m), Harmonic{n, m, std::move(p)});
  }
}

const Harmonic& HarmonicBasis::P(int n, int m) const {
  if (n < 0 || std::abs(m) > n)
    throw UsageError("P^m_n needs |m| <= n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find({n, m});
  if (it == cache_.end()) {
    build_degree(n);
    it = cache_.find({n, m});
  }
  return it->second;
}

ScalarExpr HarmonicBasis::pi0(const NCPoly& f) const {
  const XPoly* diag = f.part(0);
  ScalarExpr out;
  if (!diag) return out;
  const ScalarExpr R2 = fam_.R() * fam_.R();
  for (std::size_t c = 0; c < diag->size(); ++c) {
    if ((*diag)[c].is_zero()) continue;
    auto w = trace_power_in_w(static_cast<unsigned>(c));
    ScalarExpr sum;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (sgn(w[i]) == 0) continue;
      // eps^c w^i with w = R^2 / eps^2
      int e = static_cast<int>(c) - 2 * static_cast<int>(i);
      sum += ScalarExpr(w[i]) * R2.pow(static_cast<unsigned>(i)) * fam_.eps().pow(static_cast<unsigned>(e));
    }
    out += (*diag)[c] * sum;
  }
  return out;
}

ScalarExpr HarmonicBasis::inner(const NCPoly& f, const NCPoly& g) const {
  return pi0(mul(dagger(f, profile()), g, profile()));
}

ScalarExpr HarmonicBasis::norm_sq_closed(int n) const {
  Rational c(factorial(static_cast<unsigned>(n)) * factorial(static_cast<unsigned>(n)),
             factorial(static_cast<unsigned>(2 * n + 1)));
  c.canonicalize();
  ScalarExpr r = ScalarExpr(c) * fam_.alpha().pow(static_cast<unsigned>(2 * n));
  const ScalarExpr R2 = fam_.R() * fam_.R(), e2 = fam_.eps() * fam_.eps();
  for (int k = 1; k <= n; ++k) r *= ScalarExpr(4) * R2 + ScalarExpr(1 - k * k) * e2;
  return r;
}

std::optional<ScalarExpr> HarmonicBasis::norm_root(int n, const Specialization& s) const {
  ScalarExpr stripped = norm_sq_closed(n) * fam_.alpha().inverse().pow(static_cast<unsigned>(2 * n));
  auto q = s.apply(stripped).as_rational();
  if (!q) throw InternalInconsistency("alpha^{-2n} ||P||^2 is not rational at the specialization");
  if (sgn(*q) <= 0) return std::nullopt;
  return ScalarExpr(SqrtRational::sqrt_of(*q)) * ScalarExpr(s.alpha).pow(static_cast<unsigned>(n));
}

namespace {

ScalarExpr sqrt_int(long v) { return ScalarExpr(SqrtRational::sqrt_of(Rational(v))); }

std::map<std::string, std::string> nm(int n, int m) { return {{"n", std::to_string(n)}, {"m", std::to_string(m)}}; }

}  // namespace

ScalarExpr HarmonicBasis::beta(int n) const {
  // 2 / (alpha sqrt(2n(2n-1)))
  return ScalarExpr(2) * (fam_.alpha() * sqrt_int(2L * n * (2 * n - 1))).inverse();
}

ScalarExpr HarmonicBasis::beta_hat(int n) const {
  ScalarExpr num = ScalarExpr(n) * fam_.alpha() *
                   (ScalarExpr(4) * fam_.R() * fam_.R() + ScalarExpr(1 - n * n) * fam_.eps() * fam_.eps());
  return num * (ScalarExpr(2 * n + 1) * sqrt_int(2L * n * (2 * n - 1))).inverse();
}

ScalarExpr HarmonicBasis::printed_beta(int n) const { return beta(n) * ScalarExpr(Rational(1, 4)); }

ScalarExpr HarmonicBasis::printed_beta_hat(int n) const { return beta_hat(n) * ScalarExpr(Rational(1, 4 * n)); }

CheckReport HarmonicBasis::norm_check(int n, int m) const {
  const NCPoly& p = P(n, m).body;
  ScalarExpr lhs = inner(p, p);
  ScalarExpr rhs = norm_sq_closed(n);
  bool ok = lhs == rhs;
  return exact_report("harmonic.norm", nm(n, m), ok,
                      ok ? "" : "inner=" + to_string(lhs) + " closed=" + to_string(rhs));
}

CheckReport HarmonicBasis::eigen_check(int n, int m) const {
  const auto& s = profile();
  const NCPoly x0 = NCPoly::generator(Letter::Zero), xp = NCPoly::generator(Letter::Plus),
               xm = NCPoly::generator(Letter::Minus);
  const NCPoly& p = P(n, m).body;
  std::vector<std::string> failed;
  auto ad = [&](const NCPoly& a, const NCPoly& b) { return commutator(a, b, s); };

  if (!(ad(x0, p) == (fam_.eps() * ScalarExpr(m)) * p)) failed.push_back("adX0");

  NCPoly lap = ad(x0, ad(x0, p)) +
               (ScalarExpr(2) * fam_.alpha() * fam_.alpha()).inverse() * (ad(xp, ad(xm, p)) + ad(xm, ad(xp, p)));
  if (!(lap == (fam_.eps() * fam_.eps() * ScalarExpr(n * (n + 1))) * p)) failed.push_back("laplacian");

  const ScalarExpr ae = fam_.alpha() * fam_.eps();
  NCPoly up = m < n ? (ae * sqrt_int(static_cast<long>(n - m) * (n + m + 1))) * P(n, m + 1).body : NCPoly();
  if (!(ad(xp, p) == up)) failed.push_back("raise");
  NCPoly down = m > -n ? (ae * sqrt_int(static_cast<long>(n + m) * (n - m + 1))) * P(n, m - 1).body : NCPoly();
  if (!(ad(xm, p) == down)) failed.push_back("lower");

  std::string detail;
  for (const auto& f : failed) detail += (detail.empty() ? "" : ",") + f;
  return exact_report("harmonic.eigen", nm(n, m), failed.empty(), detail);
}

CheckReport HarmonicBasis::anticomm_check(int n, int m) const {
  if (n < 1) throw UsageError("anticomm_check needs n >= 1");
  const auto& s = profile();
  const NCPoly x0 = NCPoly::generator(Letter::Zero);
  const NCPoly& p = P(n, m).body;
  NCPoly lhs = mul(x0, p, s) + mul(p, x0, s);
  NCPoly rhs = (-beta(n + 1) * sqrt_int(static_cast<long>((n + 1) * (n + 1) - m * m))) * P(n + 1, m).body;
  if (std::abs(m) <= n - 1) rhs -= (beta_hat(n) * sqrt_int(static_cast<long>(n * n - m * m))) * P(n - 1, m).body;
  bool identity = lhs == rhs;
  bool companion = norm_sq_closed(n) * beta(n) == norm_sq_closed(n - 1) * beta_hat(n);
  bool printed_companion = norm_sq_closed(n) * printed_beta(n) == norm_sq_closed(n - 1) * printed_beta_hat(n);
  std::string detail;
  if (!identity) detail += "anticommutator mismatch;";
  if (!companion) detail += "norm-beta identity mismatch;";
  detail += printed_companion ? "printed constants consistent" : "printed constants inconsistent";
  return exact_report("harmonic.anticommutator", nm(n, m), identity && companion, detail);
}

CheckReport HarmonicBasis::gram_check(int nmax) const {
  std::vector<std::pair<int, int>> idx;
  for (int n = 0; n <= nmax; ++n)
    for (int m = -n; m <= n; ++m) idx.emplace_back(n, m);
  std::string detail;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      ScalarExpr v = inner(P(idx[i].first, idx[i].second).body, P(idx[j].first, idx[j].second).body);
      if (!v.is_zero()) {
        std::ostringstream os;
        os << "<P" << idx[i].first << "," << idx[i].second << "|P" << idx[j].first << "," << idx[j].second
           << "> = " << to_string(v) << ";";
        detail += os.str();
      }
    }
  return exact_report("harmonic.gram", {{"nmax", std::to_string(nmax)}}, detail.empty(), detail);
}

std::vector<ProductTerm> HarmonicBasis::product_expand(int n1, int m1, int n2, int m2,
                                                       const Specialization& s) const {
  const int m = m1 + m2;
  NCPoly rest = mul(P(n1, m1).body, P(n2, m2).body, profile());
  const NCPoly product = rest;
  std::vector<ProductTerm> out;
  for (int n = n1 + n2; n >= std::abs(m); --n) {
    ProductTerm t;
    t.n = n;
    const XPoly* mine = P(n, m).body.part(m);
    if (!mine || mine->size() != static_cast<std::size_t>(n - std::abs(m) + 1))
      throw InternalInconsistency("unexpected X0 degree in P^m_n");
    const ScalarExpr& lead = mine->back();
    if (!lead.is_single_term()) throw InternalInconsistency("leading coefficient of P^m_n is not a monomial");
    const XPoly* cur = rest.part(m);
    if (cur && cur->size() > mine->size()) throw InternalInconsistency("product has excess X0 degree");
    if (cur && cur->size() == mine->size()) t.formal = cur->back() * lead.inverse();
    if (!t.formal.is_zero()) rest -= t.formal * P(n, m).body;
    out.push_back(std::move(t));
  }
  if (!rest.is_zero()) throw InternalInconsistency("product is not spanned by P^m_n");

  const Spin sn1 = Spin::integer(n1), sn2 = Spin::integer(n2);
  auto r1 = norm_root(n1, s), r2 = norm_root(n2, s);
  for (auto& t : out) {
    t.formal = s.apply(t.formal);
    ScalarExpr nsq = s.apply(norm_sq_closed(t.n));
    t.defined = !nsq.is_zero();
    if (!t.defined) continue;
    t.projected = s.apply(inner(P(t.n, m).body, product)) * nsq.inverse();
    auto r = norm_root(t.n, s);
    if (!r1 || !r2 || !r) {
      t.defined = false;
      continue;
    }
    SqrtRational cg = cgc(sn1, sn2, Spin::integer(t.n), Proj::integer(m1), Proj::integer(m2), Proj::integer(m));
    auto red = reduced_element(n1, n2, t.n, s.k, {*r1, *r2, *r});
    t.predicted = ScalarExpr(cg) * red.value;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

CheckReport HarmonicBasis::product_check(int n1, int m1, int n2, int m2, const Specialization& s) const {
  std::map<std::string, std::string> params{{"n1", std::to_string(n1)}, {"m1", std::to_string(m1)},
                                            {"n2", std::to_string(n2)}, {"m2", std::to_string(m2)},
                                            {"k", to_string(s.k.as_rational())},
                                            {"alpha", to_string(s.alpha)}};
  auto terms = product_expand(n1, m1, n2, m2, s);
  std::string detail;
  int undefined = 0;
  for (const auto& t : terms) {
    if (!t.defined) {
      ++undefined;
      continue;
    }
    if (!(t.formal == t.projected) || !(t.projected == t.predicted))
      detail += "n=" + std::to_string(t.n) + ": formal=" + to_string(t.formal) + " projected=" +
                to_string(t.projected) + " predicted=" + to_string(t.predicted) + ";";
  }
  if (undefined) detail += std::to_string(undefined) + " term(s) with ||P_n||=0 skipped";
  return exact_report("harmonic.product", params, detail.find("n=") == std::string::npos, detail);
}

}  // namespace ncsurf
