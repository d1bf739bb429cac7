#pragma once

// Ladder representations of A(rho, eps) on l^2 of an integer window:
//
//   X0 |m> = eps (m + lambda) |m>,  X+ |m-1> = C(m) |m>,  X- |m> = D(m) |m-1>
//
// with C(m) D(m) = rho(eps (m + lambda)). Unitary representations have
// C = conj(D) and D >= 0.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncsurf/harmonic.hpp"
#include "ncsurf/ncalg.hpp"
#include "ncsurf/report.hpp"
#include "ncsurf/wigner.hpp"

namespace ncsurf {

enum class RepMode { Unitary, General };

struct Rep {
  int m_lo = 0;  // first basis index; basis vector i is |m_lo + i>
  double lambda = 0.0;
  double epsilon = 1.0;
  RepMode mode = RepMode::Unitary;
  bool lower_cut = false;  // window end is a truncation, not a zero of rho
  bool upper_cut = false;
  std::vector<double> diag;                // eps (m + lambda)
  std::vector<std::complex<double>> up;    // up[i]   = C(m_lo + i + 1)
  std::vector<std::complex<double>> down;  // down[i] = D(m_lo + i + 1)

  // Exact entries when the representation is known in closed form.
  std::vector<ScalarExpr> diag_exact;
  std::vector<ScalarExpr> up_exact;
  std::vector<ScalarExpr> down_exact;

  int dim() const { return static_cast<int>(diag.size()); }
  int m_hi() const { return m_lo + dim() - 1; }

  Eigen::MatrixXcd X0() const;
  Eigen::MatrixXcd Xp() const;
  Eigen::MatrixXcd Xm() const;
  /// Indices not adjacent to a truncation cut.
  std::vector<bool> interior() const;
};

/// Spin-k representation of the sphere family: D(j) = C(j) = alpha eps sqrt((k+j)(k-j+1)).
Rep rep_spin(Spin k, const NumericBindings& b);

struct RepOptions {
  std::optional<double> lambda;  // pin lambda instead of searching
  int truncation = 200;          // window size for unbounded I_rho
  std::optional<int> component;  // which positivity component when I_rho is disconnected
  /// Exact parameter values; when given, the profile is specialized with them and
  /// quadratic quantization is decided in exact arithmetic.
  std::map<std::string, ScalarExpr> exact;
  /// General factorization C = sqrt(rho) / g(m), D = sqrt(rho) g(m).
  std::function<std::complex<double>(int)> gauge;
};

/// Components of {u : rho(u) > 0}, sorted.
std::vector<Interval> positivity_components(const SurfaceProfile& s, const NumericBindings& b);

/// Unitary (or gauge-deformed) representation of a real profile; throws
/// QuantizationFailure when a bounded I_rho admits no lattice.
Rep rep_surface(const SurfaceProfile& s, const NumericBindings& b, const RepOptions& opt = {});

/// Exact decision for quadratic profiles with rational coefficients: the
/// integer |I_rho|/eps if it is one, nullopt otherwise.
std::optional<long> exact_quantization(const SurfaceProfile& specialized);

Eigen::MatrixXcd matrix_of(const NCPoly& f, const Rep& rep, const NumericBindings& b);

/// Max entrywise deviation over the four defining relations on the interior.
double relation_residual(const Rep& rep, const SurfaceProfile& s, const NumericBindings& b);

bool is_unitary(const Rep& rep, double tol = 1e-12);

/// matrix_of(P^m_n) against (-1)^n ||P|| (2n+1)^{1/2} times the Clebsch-Gordan operator.
CheckReport wigner_operator_check(const HarmonicBasis& basis, Spin k, int n, int m, Gaussian alpha,
                                  double tol = 1e-12);

/// max |A_ij - B_ij| restricted to an index mask (rows and columns).
double masked_max_abs(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const std::vector<bool>& mask);

}  // namespace ncsurf
