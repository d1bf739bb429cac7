#include "ncsurf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ncsurf/errors.hpp"

namespace ncsurf {

namespace {

constexpr double kRenormAbove = 1e150;
constexpr double kRenormBelow = 1e-150;

struct Fit {
  double slope = 0, intercept = 0, slope_se = 0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Fit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.slope_se = (x.size() > 2 && sxx > 0) ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace

Eigen::MatrixXd Tridiag::dense() const {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i + 1, i) = a(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
  return a;
}

Tridiag crystal_matrix(const Rep& rep) {
  if (rep.mode != RepMode::Unitary) throw UsageError("crystal Hamiltonian needs a unitary representation");
  Tridiag t;
  t.diag = rep.diag;
  t.offdiag.reserve(rep.down.size());
  for (std::size_t i = 0; i < rep.down.size(); ++i) {
    const auto d = rep.down[i];
    if (std::abs(d.imag()) > 1e-12 * std::max(1.0, std::abs(d)) || std::abs(rep.up[i] - std::conj(d)) > 1e-12 * std::max(1.0, std::abs(d)))
      throw UsageError("crystal Hamiltonian is not symmetric for this representation");
    t.offdiag.push_back(d.real());
  }
  return t;
}

std::vector<double> eigenvalues(const Tridiag& t) {
  if (t.diag.empty()) throw UsageError("eigenvalues of an empty matrix");
  if (t.offdiag.size() + 1 != t.diag.size()) throw UsageError("tridiagonal off-diagonal has the wrong length");
  const auto n = static_cast<Eigen::Index>(t.diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), n);
  if (n == 1) return {d[0]};
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(t.offdiag.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalInconsistency("tridiagonal eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

double gamma_coefficient(int n, int m, double epsilon, double Rhat) {
  const double nn = n, mm = m;
  return std::sqrt((nn * nn - mm * mm) * (4 * Rhat * Rhat + epsilon * epsilon * nn * nn) / (16 * (4 * nn * nn - 1)));
}

std::complex<double> ModeSequence::value(int n) const {
  const auto i = static_cast<std::size_t>(n - first());
  return mantissa.at(i) * std::exp(log_scale.at(i));
}

double ModeSequence::log_abs(int n) const {
  const auto i = static_cast<std::size_t>(n - first());
  const double a = std::abs(mantissa.at(i));
  return a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a) + log_scale.at(i);
}

std::complex<double> ModeSequence::ratio(int n) const {
  const auto i = static_cast<std::size_t>(n - first());
  return mantissa.at(i + 1) / mantissa.at(i) * std::exp(log_scale.at(i + 1) - log_scale.at(i));
}

ModeSequence cn_sequence(int m, std::complex<double> lambda, double epsilon, double Rhat, int N) {
  const int n0 = std::abs(m);
  if (!(Rhat >= 0)) throw UsageError("mode recursion needs Rhat >= 0");
  if (N <= n0) throw UsageError("mode recursion needs N > |m|");
  ModeSequence s;
  s.m = m;
  s.lambda = lambda;
  s.epsilon = epsilon;
  s.Rhat = Rhat;
  const auto len = static_cast<std::size_t>(N - n0 + 1);
  s.mantissa.resize(len);
  s.log_scale.resize(len);

  const std::complex<double> drive = std::complex<double>(0, 1) * (lambda + 0.5 * epsilon * m);
  std::complex<double> prev = 0.0, cur = 1.0;  // gamma_{|m|} = 0 kills the c_{|m|-1} term
  double scale = 0.0;
  s.mantissa[0] = cur;
  s.log_scale[0] = 0.0;
  for (int n = n0; n < N; ++n) {
    const double g_next = gamma_coefficient(n + 1, m, epsilon, Rhat);
    if (!(g_next > 0)) throw InternalInconsistency("gamma vanished inside the recursion");
    const double g_cur = n == n0 ? 0.0 : gamma_coefficient(n, m, epsilon, Rhat);
    const std::complex<double> next = -(drive * cur + g_cur * prev) / g_next;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > kRenormAbove || (mag < kRenormBelow && mag > 0)) {
      prev /= mag;
      cur /= mag;
      scale += std::log(mag);
      ++s.renormalizations;
      // Keep the stored previous entry consistent with the new scale.
      const auto ip = static_cast<std::size_t>(n - n0);
      s.mantissa[ip] = prev;
      s.log_scale[ip] = scale;
    }
    const auto i = static_cast<std::size_t>(n + 1 - n0);
    s.mantissa[i] = cur;
    s.log_scale[i] = scale;
  }
  return s;
}

ExponentFit exponent_estimate(const ModeSequence& seq, int window) {
  const int count = static_cast<int>(seq.mantissa.size()) - 1;  // available ratios
  if (window < 3 || window > count) throw UsageError("exponent window must be between 3 and the number of ratios");
  std::vector<double> x, yr, yi;
  x.reserve(static_cast<std::size_t>(window));
  const int start = seq.last() - window;
  double phase_ref = 0.0;
  for (int n = start; n < seq.last(); ++n) {
    const std::complex<double> r = seq.ratio(n);
    if (r == 0.0 || !std::isfinite(std::abs(r))) throw UsageError("sequence has a zero or non-finite term in the window");
    const std::complex<double> lr = std::log(r);
    // keep the per-step phase on one branch across the window
    double ph = lr.imag();
    if (!x.empty()) ph -= 2 * M_PI * std::round((ph - phase_ref) / (2 * M_PI));
    phase_ref = ph;
    x.push_back(std::log1p(1.0 / n));
    yr.push_back(lr.real());
    yi.push_back(ph);
  }
  const Fit fr = least_squares(x, yr), fi = least_squares(x, yi);
  ExponentFit out;
  out.a = {fr.slope, fi.slope};
  out.error = std::hypot(fr.slope_se, fi.slope_se);
  out.window = window;
  return out;
}

std::string to_string(TailClass c) {
  switch (c) {
    case TailClass::Bounded: return "bounded";
    case TailClass::LogDivergent: return "log-divergent";
    case TailClass::PowerDivergent: return "power-divergent";
  }
  return "unknown";
}

TailReport tail_partial_sums(const ModeSequence& seq, int window) {
  TailReport rep;
  const std::size_t len = seq.mantissa.size();
  rep.log_partial_sums.resize(len);
  double acc = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < len; ++i) {
    const double l2 = 2 * seq.log_abs(seq.first() + static_cast<int>(i));
    if (l2 > acc) acc = l2 + std::log1p(std::exp(acc - l2));
    else if (std::isfinite(l2)) acc = acc + std::log1p(std::exp(l2 - acc));
    rep.log_partial_sums[i] = acc;
  }
  if (window <= 0) window = std::max(3, static_cast<int>(len) / 10);
  window = std::min(window, static_cast<int>(len) - 1);

  // Trailing terms that vanish contribute nothing: the sum is already final.
  bool zero_tail = true;
  for (std::size_t i = len - static_cast<std::size_t>(window); i < len; ++i)
    if (seq.mantissa[i] != 0.0) zero_tail = false;
  if (zero_tail) {
    rep.classification = TailClass::Bounded;
    rep.power = -std::numeric_limits<double>::infinity();
    return rep;
  }

  std::vector<double> x, y;
  for (std::size_t i = len - static_cast<std::size_t>(window); i < len; ++i) {
    const int n = seq.first() + static_cast<int>(i);
    if (n <= 0) continue;
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(2 * seq.log_abs(n));
  }
  rep.power = x.size() >= 2 ? least_squares(x, y).slope : 0.0;
  constexpr double band = 0.05;
  rep.classification = rep.power < -1 - band  ? TailClass::Bounded
                       : rep.power > -1 + band ? TailClass::PowerDivergent
                                               : TailClass::LogDivergent;
  return rep;
}

}  // namespace ncsurf
