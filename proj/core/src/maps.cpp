#include "ncsurf/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "ncsurf/errors.hpp"

namespace ncsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_closed(const Interval& iv, double u, double slack) { return u >= iv.lo - slack && u <= iv.hi + slack; }

Eigen::VectorXcd diag_map(const std::vector<double>& d, const std::function<std::complex<double>(double)>& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(d[i]);
  return v;
}

double relations_on_mask(const Eigen::MatrixXcd& x0, const Eigen::MatrixXcd& xp, const Eigen::MatrixXcd& xm,
                         const std::function<std::complex<double>(double)>& rho, double eps,
                         const std::vector<bool>& mask) {
  const Eigen::Index n = x0.rows();
  Eigen::VectorXcd r0(n), r1(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r0[i] = rho(x0(i, i).real());
    r1[i] = rho(x0(i, i).real() + eps);
  }
  const std::complex<double> e = eps;
  double res = 0;
  res = std::max(res, masked_max_abs(xp * xm, Eigen::MatrixXcd(r0.asDiagonal()), mask));
  res = std::max(res, masked_max_abs(xm * xp, Eigen::MatrixXcd(r1.asDiagonal()), mask));
  res = std::max(res, masked_max_abs(x0 * xp - xp * x0, e * xp, mask));
  res = std::max(res, masked_max_abs(x0 * xm - xm * x0, -e * xm, mask));
  return res;
}

}  // namespace

Rational ProfileParams::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw UsageError("missing profile parameter '" + key + "'");
  return it->second;
}

Rational ProfileParams::get_or(const std::string& key, Rational fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double q_sphere_rho(double u, double kappa, double R_sq, double epsilon, double C, QKernel kernel) {
  const double s = std::sinh(kappa);
  const double tail = 1.0 / (2 * kappa * kappa) + R_sq + epsilon * epsilon / 4 - 1.0 / 6 + C;
  if (kernel == QKernel::Printed) return std::cosh(3 * kappa * u - epsilon * kappa) / (2 * s * s) + tail;
  return -std::cosh(2 * kappa * u - epsilon * kappa) / (2 * s * s) + tail;
}

SurfaceProfile profile_builtin(const std::string& name, const ProfileParams& p) {
  if (name == "sphere-family") {
    const Rational a2 = p.get("alpha_sq"), r2 = p.get("R_sq"), eps = p.get("epsilon");
    return SurfaceProfile::polynomial({ScalarExpr(Rational(a2 * r2)), ScalarExpr(Rational(a2 * eps)), ScalarExpr(Rational(-a2))},
                                      ScalarExpr(eps), name);
  }
  if (name == "paraboloid") {
    return SurfaceProfile::polynomial({ScalarExpr(0L), ScalarExpr(1L)}, ScalarExpr(p.get("epsilon")), name);
  }
  if (name == "q-sphere") {
    const double kappa = p.get("kappa").get_d();
    if (kappa == 0.0) throw UsageError("q-sphere needs kappa != 0; use sphere-family for kappa = 0");
    const double r2 = p.get("R_sq").get_d(), eps = p.get("epsilon").get_d();
    const double c = p.get_or("C", Rational(0)).get_d();
    const QKernel kernel = p.kernel;
    return SurfaceProfile::numeric([=](double u) { return q_sphere_rho(u, kappa, r2, eps, c, kernel); }, eps,
                                   kernel == QKernel::Printed ? "q-sphere (printed kernel)" : "q-sphere");
  }
  throw UsageError("unknown builtin profile '" + name + "'");
}

// --- homomorphisms -----------------------------------------------------------

double hom_factorization_residual(const HomSpec& h, const std::vector<double>& grid, const NumericBindings& b) {
  double res = 0;
  for (double u : grid) {
    const std::complex<double> lhs = h.source.value_complex(h.epsilon_ratio * u + h.lambda_shift, b);
    const std::complex<double> rhs = h.target.value_complex(u, b) * h.sigma_plus(u) * h.sigma_minus(u);
    res = std::max(res, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return res;
}

double hom_conjugation_residual(const HomSpec& h, const std::vector<double>& grid) {
  double res = 0;
  for (double u : grid) res = std::max(res, std::abs(std::conj(h.sigma_plus(u)) - h.sigma_minus(u)));
  return res;
}

HomImage hom_apply(const HomSpec& h, const Rep& rep, const NumericBindings& b) {
  if (!h.sigma_plus || !h.sigma_minus) throw UsageError("hom needs both sigma callables");
  const Eigen::VectorXcd sp = diag_map(rep.diag, h.sigma_plus);
  const Eigen::VectorXcd sm = diag_map(rep.diag, h.sigma_minus);
  for (Eigen::Index i = 0; i < sp.size(); ++i) {
    if (!std::isfinite(sp[i].real()) || !std::isfinite(sp[i].imag()) || !std::isfinite(sm[i].real()) ||
        !std::isfinite(sm[i].imag()))
      throw SingularMapping("sigma has a pole at Y0 = " + format_double(rep.diag[static_cast<std::size_t>(i)]));
  }
  const Eigen::Index n = rep.dim();
  HomImage out;
  out.X0 = h.epsilon_ratio * rep.X0() + h.lambda_shift * Eigen::MatrixXcd::Identity(n, n);
  out.Xp = sp.asDiagonal() * rep.Xp();
  out.Xm = rep.Xm() * sm.asDiagonal();
  const double eps1 = h.epsilon_ratio * rep.epsilon;
  out.residual = relations_on_mask(out.X0, out.Xp, out.Xm,
                                   [&](double u) { return h.source.value_complex(u, b); }, eps1, rep.interior());
  return out;
}

double topology_ratio(const SurfaceProfile& s, const NumericBindings& b) {
  const auto comps = positivity_components(s, b);
  if (comps.size() != 1 || !comps.front().bounded_below() || !comps.front().bounded_above())
    throw UsageError("topology ratio needs a single bounded positivity interval");
  return comps.front().length() / s.epsilon_value(b);
}

// --- stereographic projection ------------------------------------------------

MobiusParams MobiusParams::from(double alpha_sq, double R_sq, double epsilon) {
  const double rhat_sq = R_sq + epsilon * epsilon / 4;
  if (!(rhat_sq > 0)) throw UsageError("stereographic projection needs R^2 + eps^2/4 > 0");
  if (alpha_sq == 0.0) throw UsageError("stereographic projection needs alpha^2 != 0");
  return MobiusParams{epsilon, std::sqrt(rhat_sq), alpha_sq};
}

namespace {

struct Mob {
  double a, b, c, d;  // y = (a x + b) / (c x + d)
};

Mob mobius_coeffs(const MobiusParams& p) {
  const double e = p.epsilon, r = p.Rhat;
  return Mob{1 + e / (2 * r), 2 * e * r / p.alpha_sq, -e * p.alpha_sq / (8 * r * r * r), 1 - e / (2 * r)};
}

}  // namespace

double mobius_step(double x, const MobiusParams& p) {
  const Mob m = mobius_coeffs(p);
  const double den = m.c * x + m.d;
  if (den == 0.0 || !std::isfinite(x)) throw SingularMapping("Mobius step hits its pole at x = " + format_double(x));
  return (m.a * x + m.b) / den;
}

double mobius_inverse(double y, const MobiusParams& p) {
  const Mob m = mobius_coeffs(p);
  const double den = -m.c * y + m.a;
  if (den == 0.0 || !std::isfinite(y)) throw SingularMapping("inverse Mobius step hits its pole at y = " + format_double(y));
  return (m.d * y - m.b) / den;
}

double cross_relation_residual(double x, double y, const MobiusParams& p) {
  const double r = p.Rhat, a4 = 4 * r * r;
  const double rhs = -p.epsilon / (8 * r * r * r * p.alpha_sq) * (a4 + p.alpha_sq * x) * (a4 + p.alpha_sq * y);
  const double scale = std::max({1.0, std::abs(x), std::abs(y), std::abs(rhs)});
  return std::abs(x - y - rhs) / scale;
}

double stereo_j0(double x, const MobiusParams& p) {
  const double a4 = 4 * p.Rhat * p.Rhat;
  return p.Rhat * (a4 - p.alpha_sq * x) / (a4 + p.alpha_sq * x) - p.epsilon / 2;
}

double stereo_weight(double x, const MobiusParams& p) {
  const double a4 = 4 * p.Rhat * p.Rhat;
  return a4 * p.alpha_sq / (a4 + p.alpha_sq * x);
}

StereoResult stereo_rep(double alpha_sq, double R_sq, double epsilon, int truncation) {
  if (truncation < 4) throw UsageError("stereographic truncation must be at least 4");
  const MobiusParams p = MobiusParams::from(alpha_sq, R_sq, epsilon);
  const double a4 = 4 * p.Rhat * p.Rhat;
  const auto n = static_cast<std::size_t>(truncation);

  StereoResult out;
  out.x.assign(n, 0.0);
  auto check_pole = [&](double x) {
    if (!std::isfinite(x) || std::abs(a4 + alpha_sq * x) <= 1e-14 * std::max(a4, std::abs(alpha_sq * x)))
      throw SingularMapping("Mobius orbit reaches the pole 4 Rhat^2 + alpha^2 x = 0");
  };
  if (alpha_sq > 0) {
    // The top site is annihilated by z+; walk down from x = 0.
    out.upper_cut = false;
    out.lower_cut = true;
    out.x[n - 1] = 0.0;
    for (std::size_t i = n - 1; i > 0; --i) {
      out.x[i - 1] = mobius_step(out.x[i], p);
      check_pole(out.x[i - 1]);
    }
  } else {
    // The bottom site is annihilated by z-; walk up from z+ z- = 0.
    out.lower_cut = false;
    out.upper_cut = true;
    out.x[0] = mobius_inverse(0.0, p);
    check_pole(out.x[0]);
    for (std::size_t i = 1; i < n; ++i) {
      out.x[i] = mobius_inverse(out.x[i - 1], p);
      check_pole(out.x[i]);
    }
  }

  // Reseed from the far end and run the opposite map back.
  {
    std::vector<double> back(n);
    double dev = 0;
    if (alpha_sq > 0) {
      back[0] = out.x[0];
      for (std::size_t i = 1; i < n; ++i) back[i] = mobius_inverse(back[i - 1], p);
    } else {
      back[n - 1] = out.x[n - 1];
      for (std::size_t i = n - 1; i > 0; --i) back[i - 1] = mobius_step(back[i], p);
    }
    for (std::size_t i = 0; i < n; ++i)
      dev = std::max(dev, std::abs(back[i] - out.x[i]) / std::max(1.0, std::abs(out.x[i])));
    out.reversibility_residual = dev;
  }

  const auto N = static_cast<Eigen::Index>(n);
  out.J0 = Eigen::MatrixXcd::Zero(N, N);
  out.Jp = Eigen::MatrixXcd::Zero(N, N);
  out.Jm = Eigen::MatrixXcd::Zero(N, N);
  const std::complex<double> I(0.0, 1.0);
  for (Eigen::Index i = 0; i < N; ++i) {
    const double xi = out.x[static_cast<std::size_t>(i)];
    out.J0(i, i) = stereo_j0(xi, p);
    if (i == 0) continue;
    // z+ |i-1> = t |i>, z- |i> = s |i-1> with s t = x_{i-1}; J+ = i z+ g(x), J- = -i g(x) z-
    const double below = out.x[static_cast<std::size_t>(i - 1)];
    const std::complex<double> w = std::sqrt(std::complex<double>(below));
    const double g = stereo_weight(below, p);
    out.Jp(i, i - 1) = I * g * w;
    out.Jm(i - 1, i) = -I * w * g;
  }

  std::vector<bool> mask(n, true);
  if (out.lower_cut) mask.front() = false;
  if (out.upper_cut) mask.back() = false;

  auto rho = [&](double u) { return std::complex<double>(alpha_sq * (R_sq - u * u + epsilon * u)); };
  out.relation_residual = relations_on_mask(out.J0, out.Jp, out.Jm, rho, epsilon, mask);

  const Eigen::MatrixXcd cas = out.J0 * out.J0 + (out.Jp * out.Jm + out.Jm * out.Jp) / (2 * alpha_sq);
  out.casimir_residual = masked_max_abs(cas, R_sq * Eigen::MatrixXcd::Identity(N, N), mask);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = out.J0(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i + 1)).real() -
                        out.J0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    out.spacing_residual = std::max(out.spacing_residual, std::abs(step - epsilon));
    out.cross_residual = std::max(out.cross_residual, cross_relation_residual(out.x[i + 1], out.x[i], p));
  }
  return out;
}

double classical_projection_residual(double alpha_sq, double R, const std::vector<double>& radii) {
  if (alpha_sq != 1.0 && alpha_sq != -1.0) throw Unsupported("classical projection check covers alpha^2 = +1 or -1");
  const MobiusParams p = MobiusParams::from(alpha_sq, R * R, 0.0);
  const double a4 = 4 * R * R;
  double res = 0;
  for (double r : radii) {
    const double x = r * r;
    // Sphere: projection from the north pole onto the tangent plane at the south pole.
    // Upper sheet of Z^2 - X^2 - Y^2 = R^2: the analogue onto the disc |z| < 2R.
    const double Z = alpha_sq > 0 ? R * (a4 - x) / (a4 + x) : R * (a4 + x) / (a4 - x);
    const double W = alpha_sq > 0 ? a4 * r / (a4 + x) : a4 * r / std::abs(a4 - x);
    const double j0 = stereo_j0(x, p);
    const double jp = std::abs(stereo_weight(x, p)) * r;
    const double constraint = j0 * j0 + (alpha_sq > 0 ? 1.0 : -1.0) * jp * jp - R * R;
    const double scale = std::max(1.0, Z * Z);
    res = std::max({res, std::abs(j0 - Z) / std::max(1.0, std::abs(Z)), std::abs(jp - W) / std::max(1.0, W),
                    std::abs(constraint) / scale});
  }
  return res;
}

// --- complex-plane picture ---------------------------------------------------

double tau_check(const SurfaceProfile& s, const Rep& rep, const NumericBindings& b, Interval branch) {
  if (rep.mode != RepMode::Unitary) throw UsageError("tau check needs a unitary representation");
  const double eps = rep.epsilon;
  const auto rho = [&](double u) { return s.value(u, b); };

  // Sampling range: the branch clipped to where the representation lives.
  double lo = branch.lo, hi = branch.hi;
  const double dmin = *std::min_element(rep.diag.begin(), rep.diag.end());
  const double dmax = *std::max_element(rep.diag.begin(), rep.diag.end()) + eps;
  if (!branch.bounded_below()) lo = dmin - eps;
  if (!branch.bounded_above()) hi = dmax + eps;
  constexpr int samples = 2048;
  int sign = 0;
  double prev = rho(lo);
  for (int i = 1; i <= samples; ++i) {
    const double v = rho(lo + (hi - lo) * i / samples);
    const int sg = v > prev ? 1 : (v < prev ? -1 : 0);
    if (sg != 0) {
      if (sign != 0 && sg != sign) throw Unsupported("rho is not invertible on the chosen branch");
      sign = sg;
    }
    prev = v;
  }
  if (sign == 0) throw Unsupported("rho is constant on the chosen branch");

  auto tau = [&](double v) {
    auto g = [&](double u) { return sign * (rho(u) - v); };
    double a = lo, c = hi;
    while (!branch.bounded_below() && g(a) > 0) a -= 2 * (c - a);
    while (!branch.bounded_above() && g(c) < 0) c += 2 * (c - a);
    const double ga = g(a), gc = g(c);
    if (ga >= 0) return a;
    if (gc <= 0) return c;
    boost::uintmax_t iters = 200;
    auto tol = [](double p, double q) {
      return std::abs(p - q) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(p));
    };
    auto [r1, r2] = boost::math::tools::toms748_solve(g, a, c, ga, gc, tol, iters);
    return 0.5 * (r1 + r2);
  };

  const Eigen::MatrixXcd zp = rep.Xp(), zm = rep.Xm();
  const Eigen::MatrixXcd xmp = zm * zp, xpm = zp * zm;
  const auto mask = rep.interior();
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  double res = 0;
  int used = 0;
  for (int i = 0; i < rep.dim(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const double u = rep.diag[static_cast<std::size_t>(i)];
    if (!in_closed(branch, u, slack) || !in_closed(branch, u + eps, slack)) continue;
    const double t1 = tau(xmp(i, i).real()), t0 = tau(xpm(i, i).real());
    res = std::max({res, std::abs(t1 - t0 - eps), std::abs(u - t0)});
    ++used;
  }
  if (used == 0) throw UsageError("no interior site lies on the chosen branch");
  return res;
}

}  // namespace ncsurf
