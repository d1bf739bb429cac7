#pragma once

// Crystal Hamiltonian H = X0 + X+ + X- on a ladder representation, and the
// three-term recursion
//
//   gamma_{n+1} c_{n+1} + i (lambda + eps m / 2) c_n + gamma_n c_{n-1} = 0
//
// for modes on the one-sheeted hyperboloid.

#include <complex>
#include <string>
#include <vector>

#include "ncsurf/repr.hpp"

namespace ncsurf {

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1

  Eigen::MatrixXd dense() const;
};

/// diag = eps (m + lambda), offdiag = D(m + 1); rejects non-unitary reps.
Tridiag crystal_matrix(const Rep& rep);

/// Ascending eigenvalues.
std::vector<double> eigenvalues(const Tridiag& t);

/// gamma_n = ((n^2 - m^2)(4 Rhat^2 + eps^2 n^2) / (16 (4 n^2 - 1)))^{1/2}
double gamma_coefficient(int n, int m, double epsilon, double Rhat);

struct ModeSequence {
  int m = 0;
  std::complex<double> lambda;
  double epsilon = 1.0;
  double Rhat = 0.0;
  // c_{|m| + i} = mantissa[i] * exp(log_scale[i])
  std::vector<std::complex<double>> mantissa;
  std::vector<double> log_scale;
  int renormalizations = 0;

  int first() const { return m < 0 ? -m : m; }
  int last() const { return first() + static_cast<int>(mantissa.size()) - 1; }
  /// c_n; may overflow for large n, prefer log_abs / ratio.
  std::complex<double> value(int n) const;
  double log_abs(int n) const;
  /// c_{n+1} / c_n
  std::complex<double> ratio(int n) const;
};

ModeSequence cn_sequence(int m, std::complex<double> lambda, double epsilon, double Rhat, int N);

struct ExponentFit {
  std::complex<double> a;
  double error = 0.0;  // standard error of the slope, real and imaginary parts combined
  int window = 0;
};

/// Fits log(c_{n+1}/c_n) = a log((n+1)/n) + b over the trailing `window` ratios.
/// The intercept absorbs a constant phase per step, so c_n = t^n n^a is recovered exactly.
ExponentFit exponent_estimate(const ModeSequence& seq, int window);

enum class TailClass { Bounded, LogDivergent, PowerDivergent };
std::string to_string(TailClass c);

struct TailReport {
  TailClass classification = TailClass::Bounded;
  double power = 0.0;  // fitted exponent p of |c_n|^2 ~ n^p
  std::vector<double> log_partial_sums;  // log sum_{j <= n} |c_j|^2, one entry per term
};

/// Empirical growth class of the partial sums of |c_n|^2 from the trailing window.
TailReport tail_partial_sums(const ModeSequence& seq, int window = 0);

}  // namespace ncsurf
