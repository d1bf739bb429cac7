#include "ncsurf/repr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <unsupported/Eigen/Polynomials>

#include "ncsurf/errors.hpp"

namespace ncsurf {

Eigen::MatrixXcd Rep::X0() const {
  Eigen::VectorXcd d(dim());
  for (int i = 0; i < dim(); ++i) d[i] = diag[static_cast<std::size_t>(i)];
  return d.asDiagonal();
}

Eigen::MatrixXcd Rep::Xp() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i + 1 < dim(); ++i) m(i + 1, i) = up[static_cast<std::size_t>(i)];
  return m;
}

Eigen::MatrixXcd Rep::Xm() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i + 1 < dim(); ++i) m(i, i + 1) = down[static_cast<std::size_t>(i)];
  return m;
}

std::vector<bool> Rep::interior() const {
  std::vector<bool> mask(diag.size(), true);
  if (mask.empty()) return mask;
  if (lower_cut) mask.front() = false;
  if (upper_cut) mask.back() = false;
  return mask;
}

Rep rep_spin(Spin k, const NumericBindings& b) {
  auto get = [&](const char* name) {
    auto it = b.find(name);
    if (it == b.end()) throw UsageError(std::string("rep_spin needs a binding for ") + name);
    return it->second;
  };
  const double eps = get("epsilon").real();
  const std::complex<double> alpha = get("alpha");
  auto params = ParamSet::declare({"R", "alpha", "epsilon"});
  const ScalarExpr a = param(params, "alpha"), e = param(params, "epsilon");

  Rep r;
  r.epsilon = eps;
  r.lambda = k.is_integer() ? 0.0 : 0.5;
  r.m_lo = -(k.twice + (k.is_integer() ? 0 : 1)) / 2;
  r.mode = (alpha.imag() == 0.0 && alpha.real() > 0.0) ? RepMode::Unitary : RepMode::General;
  const Rational kk = k.as_rational();
  for (int tj = -k.twice; tj <= k.twice; tj += 2) {
    Rational j(tj, 2);
    r.diag.push_back(eps * tj / 2.0);
    r.diag_exact.push_back(ScalarExpr(j) * e);
    if (tj == k.twice) break;
    // amplitude between |j> and |j+1>: D(j+1) = alpha eps sqrt((k+j+1)(k-j))
    Rational amp2 = (kk + j + 1) * (kk - j);
    ScalarExpr amp = a * e * ScalarExpr(SqrtRational::sqrt_of(amp2));
    std::complex<double> v = alpha * eps * std::sqrt(amp2.get_d());
    r.up.push_back(v);
    r.down.push_back(v);
    r.up_exact.push_back(amp);
    r.down_exact.push_back(amp);
  }
  return r;
}

// --- positivity -----------------------------------------------------------------

namespace {

std::vector<double> real_coeffs(const SurfaceProfile& s, const NumericBindings& b) {
  std::vector<double> c;
  for (const auto& x : s.coeffs()) {
    auto v = x.eval(b);
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
      throw UsageError("profile '" + s.name() + "' is not real at these parameters");
    c.push_back(v.real());
  }
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

double refine_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) return 0.5 * (lo + hi);
  boost::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a)); };
  auto [a, bb] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + bb);
}

std::vector<Interval> components_from_roots(std::vector<double> roots, const std::function<double(double)>& f) {
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
              roots.end());
  std::vector<Interval> out;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cuts{-inf};
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  cuts.push_back(inf);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    double probe = std::isinf(lo) && std::isinf(hi) ? 0.0
                   : std::isinf(lo)                 ? hi - 1.0 - std::abs(hi)
                   : std::isinf(hi)                 ? lo + 1.0 + std::abs(lo)
                                                    : 0.5 * (lo + hi);
    if (f(probe) > 0.0) out.push_back(Interval{lo, hi});
  }
  return out;
}

}  // namespace

std::vector<Interval> positivity_components(const SurfaceProfile& s, const NumericBindings& b) {
  if (!s.real()) throw UsageError("positivity set needs a real profile");
  if (auto d = s.declared_positivity()) return {*d};
  std::function<double(double)> f = [&](double u) { return s.value(u, b); };
  std::vector<double> roots;
  if (s.is_exact()) {
    auto c = real_coeffs(s, b);
    if (c.size() >= 2) {
      Eigen::VectorXd coeffs(static_cast<Eigen::Index>(c.size()));
      for (std::size_t i = 0; i < c.size(); ++i) coeffs[static_cast<Eigen::Index>(i)] = c[i];
      Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
      double scale = 0;
      for (const auto& z : solver.roots()) scale = std::max(scale, std::abs(z));
      for (const auto& z : solver.roots()) {
        if (std::abs(z.imag()) > 1e-7 * std::max(1.0, scale)) continue;
        // polish on a small bracket when there is a sign change
        double x = z.real(), h = 1e-6 * std::max(1.0, std::abs(x));
        roots.push_back(refine_root(f, x - h, x + h));
      }
    }
  } else {
    constexpr double L = 100.0;
    constexpr int N = 200000;
    double prev_u = -L, prev = f(prev_u);
    for (int i = 1; i <= N; ++i) {
      double u = -L + 2 * L * i / N, v = f(u);
      if ((prev > 0) != (v > 0)) roots.push_back(refine_root(f, prev_u, u));
      prev_u = u;
      prev = v;
    }
  }
  return components_from_roots(roots, f);
}

std::optional<long> exact_quantization(const SurfaceProfile& s) {
  const auto& c = s.coeffs();
  if (c.size() != 3) return std::nullopt;
  auto c0 = c[0].as_rational(), c1 = c[1].as_rational(), c2 = c[2].as_rational();
  auto e = s.epsilon().as_rational();
  if (!c0 || !c1 || !c2 || !e || sgn(*e) <= 0 || sgn(*c2) >= 0) return std::nullopt;
  Rational disc = (*c1) * (*c1) - 4 * (*c0) * (*c2);
  if (sgn(disc) <= 0) return std::nullopt;
  Rational n2 = disc / ((*c2) * (*c2) * (*e) * (*e));
  if (n2.get_den() != 1 || !mpz_perfect_square_p(n2.get_num().get_mpz_t())) return std::nullopt;
  Integer n = sqrt(n2.get_num());
  return n.get_si();
}

namespace {

SurfaceProfile specialize_exact(const SurfaceProfile& s, const std::map<std::string, ScalarExpr>& exact) {
  std::vector<ScalarExpr> c = s.coeffs();
  ScalarExpr e = s.epsilon();
  for (const auto& [key, v] : exact) {
    bool square = key.size() > 2 && key.compare(key.size() - 2, 2, "^2") == 0;
    std::string name = square ? key.substr(0, key.size() - 2) : key;
    for (auto& x : c) x = square ? x.substitute_square(name, v) : x.substitute(name, v);
    e = square ? e.substitute_square(name, v) : e.substitute(name, v);
  }
  return SurfaceProfile::polynomial(std::move(c), std::move(e), s.name());
}

double frac_part(double x) {
  double f = x - std::floor(x);
  if (f > 1.0 - 1e-9) f = 0.0;
  if (f < 1e-9) f = 0.0;
  return f;
}

}  // namespace

Rep rep_surface(const SurfaceProfile& s_in, const NumericBindings& b, const RepOptions& opt) {
  if (!s_in.real()) throw UsageError("rep_surface needs a real profile");
  const SurfaceProfile s = (!opt.exact.empty() && s_in.is_exact()) ? specialize_exact(s_in, opt.exact) : s_in;
  const double eps = s.epsilon_value(b);
  if (!(eps > 0)) throw UsageError("rep_surface needs eps > 0");
  if (opt.truncation < 2) throw UsageError("truncation must be at least 2");

  auto comps = positivity_components(s, b);
  if (comps.empty()) throw QuantizationFailure("rho is nowhere positive; no unitary representation");
  std::size_t ci = 0;
  if (opt.component) {
    if (*opt.component < 0 || static_cast<std::size_t>(*opt.component) >= comps.size())
      throw UsageError("positivity component index out of range");
    ci = static_cast<std::size_t>(*opt.component);
  } else if (comps.size() > 1) {
    std::ostringstream os;
    os << "I_rho has " << comps.size() << " components; choose one with component=";
    throw UsageError(os.str());
  }
  const Interval I = comps[ci];

  Rep r;
  r.epsilon = eps;
  int dim = opt.truncation;
  auto pin_check = [&](double edge_over_eps) {
    double lam = frac_part(edge_over_eps);
    if (opt.lambda) {
      if (frac_part(edge_over_eps - *opt.lambda) != 0.0)
        throw QuantizationFailure("lambda is incompatible with the boundary of I_rho");
      lam = *opt.lambda;
    }
    return lam;
  };

  if (I.bounded_below() && I.bounded_above()) {
    long n = 0;
    bool decided = false;
    if (s.is_exact()) {
      bool rational = std::all_of(s.coeffs().begin(), s.coeffs().end(), [](const ScalarExpr& x) { return x.as_rational().has_value(); }) &&
                      s.epsilon().as_rational().has_value();
      if (rational && s.coeffs().size() == 3) {
        auto q = exact_quantization(s);
        if (!q) throw QuantizationFailure("|I_rho|/eps is not an integer");
        n = *q;
        decided = true;
      }
    }
    if (!decided) {
      double ratio = I.length() / eps;
      n = std::lround(ratio);
      if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
        throw QuantizationFailure("|I_rho|/eps = " + format_double(ratio) + " is not an integer");
    }
    if (n < 1) throw QuantizationFailure("I_rho shorter than eps");
    r.lambda = pin_check(I.lo / eps);
    r.m_lo = static_cast<int>(std::lround(I.lo / eps - r.lambda));
    dim = static_cast<int>(n);
  } else if (I.bounded_below()) {
    r.lambda = pin_check(I.lo / eps);
    r.m_lo = static_cast<int>(std::lround(I.lo / eps - r.lambda));
    r.upper_cut = true;
  } else if (I.bounded_above()) {
    r.lambda = pin_check(I.hi / eps);
    int m_hi = static_cast<int>(std::lround(I.hi / eps - r.lambda)) - 1;
    r.m_lo = m_hi - dim + 1;
    r.lower_cut = true;
  } else {
    r.lambda = opt.lambda.value_or(0.0);
    r.m_lo = -dim / 2;
    r.lower_cut = r.upper_cut = true;
  }

  r.mode = opt.gauge ? RepMode::General : RepMode::Unitary;
  double scale = 0;
  for (int i = 0; i < dim; ++i) {
    double x = eps * (r.m_lo + i + r.lambda);
    r.diag.push_back(x);
    scale = std::max(scale, std::abs(s.value(x, b)));
  }
  for (int i = 0; i + 1 < dim; ++i) {
    int m = r.m_lo + i + 1;
    double rho = s.value(eps * (m + r.lambda), b);
    if (rho < -1e-9 * std::max(1.0, scale))
      throw InternalInconsistency("rho negative inside the representation window");
    double d = std::sqrt(std::max(rho, 0.0));
    if (opt.gauge) {
      std::complex<double> g = opt.gauge(m);
      r.down.push_back(d * g);
      r.up.push_back(d / g);
    } else {
      r.down.push_back(d);
      r.up.push_back(d);
    }
  }
  return r;
}

Eigen::MatrixXcd matrix_of(const NCPoly& f, const Rep& rep, const NumericBindings& b) {
  const int n = rep.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd xp = rep.Xp(), xm = rep.Xm();
  for (const auto& [d, h] : f.parts()) {
    Eigen::VectorXcd hv(n);
    for (int i = 0; i < n; ++i) hv[i] = xpoly::eval(h, rep.diag[static_cast<std::size_t>(i)], b);
    Eigen::MatrixXcd term = hv.asDiagonal();
    for (int k = 0; k < std::abs(d); ++k) term = d > 0 ? Eigen::MatrixXcd(xp * term) : Eigen::MatrixXcd(term * xm);
    out += term;
  }
  return out;
}

double masked_max_abs(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const std::vector<bool>& mask) {
  double m = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (mask[static_cast<std::size_t>(j)]) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  }
  return m;
}

double relation_residual(const Rep& rep, const SurfaceProfile& s, const NumericBindings& b) {
  const int n = rep.dim();
  const Eigen::MatrixXcd x0 = rep.X0(), xp = rep.Xp(), xm = rep.Xm();
  Eigen::VectorXcd r0(n), r1(n);
  for (int i = 0; i < n; ++i) {
    r0[i] = s.value_complex(rep.diag[static_cast<std::size_t>(i)], b);
    r1[i] = s.value_complex(rep.diag[static_cast<std::size_t>(i)] + rep.epsilon, b);
  }
  const auto mask = rep.interior();
  const std::complex<double> e = rep.epsilon;
  double res = 0;
  res = std::max(res, masked_max_abs(xp * xm, Eigen::MatrixXcd(r0.asDiagonal()), mask));
  res = std::max(res, masked_max_abs(xm * xp, Eigen::MatrixXcd(r1.asDiagonal()), mask));
  res = std::max(res, masked_max_abs(x0 * xp - xp * x0, e * xp, mask));
  res = std::max(res, masked_max_abs(x0 * xm - xm * x0, -e * xm, mask));
  return res;
}

bool is_unitary(const Rep& rep, double tol) {
  const Eigen::MatrixXcd xp = rep.Xp(), xm = rep.Xm();
  if ((xp - xm.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  for (double d : rep.diag)
    if (!std::isfinite(d)) return false;
  return true;
}

CheckReport wigner_operator_check(const HarmonicBasis& basis, Spin k, int n, int m, Gaussian alpha, double tol) {
  std::map<std::string, std::string> params{{"k", to_string(k.as_rational())}, {"n", std::to_string(n)},
                                            {"m", std::to_string(m)}, {"alpha", to_string(alpha)}};
  if (n > k.twice) throw UsageError("wigner_operator_check needs n <= 2k");
  Specialization spec{k, Rational(1), alpha};
  const NumericBindings b = spec.bindings();
  Rep rep = rep_spin(k, b);
  Eigen::MatrixXcd lhs = matrix_of(basis.P(n, m).body, rep, b);
  auto norm = basis.norm_root(n, spec);
  if (!norm) throw InternalInconsistency("||P_n|| undefined for n <= 2k");
  std::complex<double> pref = (n % 2 ? -1.0 : 1.0) * norm->eval(b) * std::sqrt(2.0 * n + 1.0);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(rep.dim(), rep.dim());
  for (int i = 0; i < rep.dim(); ++i) {
    int tj = -k.twice + 2 * i, tj2 = tj + 2 * m;
    if (std::abs(tj2) > k.twice) continue;
    double cg = cgc(k, Spin::integer(n), k, Proj::from_twice(tj), Proj::integer(m), Proj::from_twice(tj2)).to_double();
    rhs(i + m, i) = pref * cg;
  }
  double dev = (lhs - rhs).cwiseAbs().maxCoeff();
  return numeric_report("repr.wigner_operator", params, dev, tol);
}

}  // namespace ncsurf
