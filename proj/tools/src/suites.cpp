#include "ncsurf/cli/suites.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "ncsurf/errors.hpp"
#include "ncsurf/repr.hpp"

namespace ncsurf::cli {

namespace {

using Params = std::map<std::string, std::string>;

std::string str(double v) { return format_double(v); }

Word random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), letter(0, 2);
  Word w(static_cast<std::size_t>(len(rng)));
  for (auto& l : w) l = static_cast<Letter>(letter(rng));
  return w;
}

Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* s = std::getenv("NCSURF_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611u;
}

SurfaceProfile formal_sphere() { return SphereFamily().profile(); }

SurfaceProfile formal_paraboloid() {
  static const ParamSetPtr set = ParamSet::declare({"epsilon"});
  return SurfaceProfile::polynomial({ScalarExpr(0L), ScalarExpr(1L)}, param(set, "epsilon"), "paraboloid");
}

SurfaceProfile random_exact_profile(std::uint64_t seed) {
  static const ParamSetPtr set = ParamSet::declare({"R", "epsilon"});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(1, 3), num(-6, 6), den(1, 4);
  const ScalarExpr R = param(set, "R");
  std::vector<ScalarExpr> c;
  const int d = deg(rng);
  for (int i = 0; i <= d; ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    ScalarExpr x(q);
    if (i == 0) x = x * R * R;
    c.push_back(x);
  }
  if (c.back().is_zero()) c.back() = ScalarExpr(1L);
  return SurfaceProfile::polynomial(std::move(c), param(set, "epsilon"), "random-" + std::to_string(seed));
}

std::vector<CheckReport> algebra_suite(const SurfaceProfile& s, int words, int max_len, std::uint64_t seed) {
  if (!s.is_exact()) throw UsageError("the algebra suite needs an exact polynomial profile");
  std::mt19937_64 rng(seed);
  const NCPoly rho0 = NCPoly::x0_poly(s.coeffs());
  const NCPoly rho1 = NCPoly::x0_poly(xpoly::shift(s.coeffs(), s.epsilon()));
  const ScalarExpr& eps = s.epsilon();
  auto red = [&](const Word& w) { return reduce_word(w, s); };
  auto W = [](const char* t) { return parse_word(t); };

  int rel_bad = 0, split_bad = 0, assoc_bad = 0;
  for (int i = 0; i < words; ++i) {
    const Word w = random_word(rng, max_len);
    const NCPoly f = red(w);

    if (red(concat(w, W("+-"))) != mul(f, rho0, s)) ++rel_bad;
    if (red(concat(w, W("-+"))) != mul(f, rho1, s)) ++rel_bad;
    if (red(concat(w, W("0+"))) - red(concat(w, W("+0"))) != eps * red(concat(w, W("+")))) ++rel_bad;
    if (red(concat(w, W("0-"))) - red(concat(w, W("-0"))) != -(eps * red(concat(w, W("-"))))) ++rel_bad;
    if (red(concat(W("+-"), w)) != mul(rho0, f, s)) ++rel_bad;
    if (red(concat(W("-+"), w)) != mul(rho1, f, s)) ++rel_bad;
    if (red(concat(W("0+"), w)) - red(concat(W("+0"), w)) != eps * red(concat(W("+"), w))) ++rel_bad;
    if (red(concat(W("0-"), w)) - red(concat(W("-0"), w)) != -(eps * red(concat(W("-"), w)))) ++rel_bad;

    std::uniform_int_distribution<std::size_t> cut(0, w.size());
    const std::size_t c = cut(rng);
    const Word u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(c)), v(w.begin() + static_cast<std::ptrdiff_t>(c), w.end());
    if (mul(red(u), red(v), s) != f) ++split_bad;

    const NCPoly g = red(random_word(rng, max_len)), h = red(random_word(rng, max_len));
    if (mul(mul(f, g, s), h, s) != mul(f, mul(g, h, s), s)) ++assoc_bad;
  }
  const Params p{{"profile", s.name()}, {"words", std::to_string(words)}, {"max_len", std::to_string(max_len)},
                 {"seed", std::to_string(seed)}};
  auto detail = [](int bad) { return bad ? std::to_string(bad) + " mismatches" : std::string(); };
  return {exact_report("algebra.relations", p, rel_bad == 0, detail(rel_bad)),
          exact_report("algebra.word-split", p, split_bad == 0, detail(split_bad)),
          exact_report("algebra.associativity", p, assoc_bad == 0, detail(assoc_bad))};
}

CheckReport casimir_check() {
  const SphereFamily fam;
  const SurfaceProfile& s = fam.profile();
  const NCPoly x0 = NCPoly::generator(Letter::Zero), xp = NCPoly::generator(Letter::Plus),
               xm = NCPoly::generator(Letter::Minus);
  const ScalarExpr half_inv = (ScalarExpr(2L) * fam.alpha() * fam.alpha()).inverse();
  const NCPoly cas = mul(x0, x0, s) + half_inv * (mul(xp, xm, s) + mul(xm, xp, s));
  const NCPoly expect = NCPoly::scalar(fam.R() * fam.R());
  return exact_report("casimir", {{"profile", s.name()}}, cas == expect, cas == expect ? "" : to_string(cas - expect));
}

std::vector<CheckReport> poisson_suite(const SurfaceProfile& s) {
  const auto eps_name = formal_epsilon_name(s);
  if (!eps_name) throw UsageError("Poisson limit needs a formal epsilon");
  const NCPoly x0 = NCPoly::generator(Letter::Zero), xp = NCPoly::generator(Letter::Plus),
               xm = NCPoly::generator(Letter::Minus);
  XPoly d;
  for (std::size_t i = 1; i < s.coeffs().size(); ++i) d.push_back(ScalarExpr(static_cast<long>(i)) * s.coeffs()[i]);
  xpoly::trim(d);
  const NCPoly minus_rho_prime = classical_limit(-NCPoly::x0_poly(d), *eps_name);
  const Params p{{"profile", s.name()}};
  return {exact_report("poisson.X0,X+", p, poisson(x0, xp, s) == xp),
          exact_report("poisson.X0,X-", p, poisson(x0, xm, s) == -xm),
          exact_report("poisson.X+,X-", p, poisson(xp, xm, s) == minus_rho_prime)};
}

std::vector<CheckReport> harmonic_suite(const HarmonicBasis& basis, int nmax, int jobs) {
  std::vector<std::pair<int, int>> nm;
  for (int n = 0; n <= nmax; ++n)
    for (int m = -n; m <= n; ++m) nm.emplace_back(n, m);
  // Build degrees in order so the workers only read the memo.
  for (int n = 0; n <= nmax; ++n) basis.P(n, 0);
  auto per = parallel_map<std::vector<CheckReport>>(static_cast<int>(nm.size()), jobs, [&](int i) {
    const auto [n, m] = nm[static_cast<std::size_t>(i)];
    std::vector<CheckReport> r{basis.eigen_check(n, m), basis.norm_check(n, m)};
    if (n >= 1) r.push_back(basis.anticomm_check(n, m));
    return r;
  });
  std::vector<CheckReport> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  out.push_back(basis.gram_check(nmax));
  return out;
}

std::vector<CheckReport> product_suite(const HarmonicBasis& basis, Spin k, Gaussian alpha, int nmax, int jobs) {
  struct Idx { int n1, m1, n2, m2; };
  std::vector<Idx> all;
  for (int n1 = 0; n1 <= nmax; ++n1)
    for (int n2 = 0; n2 <= nmax; ++n2)
      for (int m1 = -n1; m1 <= n1; ++m1)
        for (int m2 = -n2; m2 <= n2; ++m2) all.push_back({n1, m1, n2, m2});
  for (int n = 0; n <= 2 * nmax; ++n) basis.P(n, 0);
  const Specialization spec{k, Rational(1), alpha};
  return parallel_map<CheckReport>(static_cast<int>(all.size()), jobs, [&](int i) {
    const Idx& x = all[static_cast<std::size_t>(i)];
    return basis.product_check(x.n1, x.m1, x.n2, x.m2, spec);
  });
}

std::vector<CheckReport> wigner_suite(const HarmonicBasis& basis, Spin k, Gaussian alpha, int nmax, double tol) {
  std::vector<CheckReport> out;
  for (int n = 0; n <= std::min(nmax, k.twice); ++n)
    for (int m = -n; m <= n; ++m) out.push_back(wigner_operator_check(basis, k, n, m, alpha, tol));
  return out;
}

CheckReport hyperboloid_norm_positivity(const HarmonicBasis& basis, int nmax) {
  std::ostringstream bad;
  bool ok = true;
  for (int n = 0; n <= nmax; ++n) {
    const ScalarExpr v = basis.norm_sq_closed(n)
                             .substitute_square("R", ScalarExpr(-1L))
                             .substitute("epsilon", ScalarExpr(1L))
                             .substitute("alpha", ScalarExpr::i());
    const auto q = v.as_rational();
    if (!q || sgn(*q) <= 0) {
      ok = false;
      bad << "n=" << n << ": " << to_string(v) << "; ";
    }
  }
  return exact_report("hyperboloid.norm-positive",
                      {{"alpha", "i"}, {"epsilon", "1"}, {"R^2", "-1"}, {"nmax", std::to_string(nmax)}}, ok, bad.str());
}

std::vector<CheckReport> stereo_suite(double alpha_sq, double R_sq, double epsilon, int N, double tol) {
  const StereoResult st = stereo_rep(alpha_sq, R_sq, epsilon, N);
  const Params p{{"alpha_sq", str(alpha_sq)}, {"R_sq", str(R_sq)}, {"epsilon", str(epsilon)}, {"N", std::to_string(N)}};
  std::vector<CheckReport> out{numeric_report("stereo.relations", p, st.relation_residual, tol),
                               numeric_report("stereo.casimir", p, st.casimir_residual, tol),
                               numeric_report("stereo.mobius-cross", p, st.cross_residual, 1e-12),
                               numeric_report("stereo.spacing", p, st.spacing_residual, tol),
                               numeric_report("stereo.reversibility", p, st.reversibility_residual, tol)};
  if (alpha_sq == 1.0 || alpha_sq == -1.0) {
    const double R = std::sqrt(R_sq);
    std::vector<double> radii;
    const double top = alpha_sq > 0 ? 3 * R : 2 * R * (1 - 1e-3);
    for (int i = 0; i <= 200; ++i) radii.push_back(top * i / 200);
    out.push_back(numeric_report("stereo.classical-limit", {{"alpha_sq", str(alpha_sq)}, {"R", str(R)}, {"epsilon", "0"}},
                                 classical_projection_residual(alpha_sq, R, radii), 1e-12));
  }
  return out;
}

CheckReport crystal_check(Spin k, double epsilon, double tol) {
  const double kv = k.value();
  const NumericBindings b{{"alpha", 1.0}, {"epsilon", epsilon}, {"R", epsilon * std::sqrt(kv * (kv + 1))}};
  const auto ev = eigenvalues(crystal_matrix(rep_spin(k, b)));
  double dev = 0;
  for (std::size_t i = 0; i < ev.size(); ++i)
    dev = std::max(dev, std::abs(ev[i] - std::sqrt(5.0) * epsilon * (static_cast<double>(i) - kv)));
  return numeric_report("crystal.sqrt5-spectrum", {{"k", to_string(k.as_rational())}, {"epsilon", str(epsilon)}}, dev, tol);
}

ModeSummary mode_summary(int m, std::complex<double> lambda, double epsilon, double Rhat, int N) {
  const ModeSequence seq = cn_sequence(m, lambda, epsilon, Rhat, N);
  ModeSummary s;
  s.N = N;
  const int ratios = static_cast<int>(seq.mantissa.size()) - 1;
  s.fit = exponent_estimate(seq, std::max(3, ratios / 10));
  s.tail = tail_partial_sums(seq);
  return s;
}

}  // namespace ncsurf::cli
