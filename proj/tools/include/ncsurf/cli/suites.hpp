#pragma once

// Verification suites shared by the command-line driver and the acceptance
// runner. Each returns one CheckReport per checked property.

#include <cstdint>
#include <string>
#include <vector>

#include "ncsurf/harmonic.hpp"
#include "ncsurf/maps.hpp"
#include "ncsurf/report.hpp"
#include "ncsurf/spectra.hpp"

namespace ncsurf::cli {

std::uint64_t default_seed();

/// Formal alpha^2 (R^2 - u^2 + eps u), formal eps * u, and random exact polynomials.
SurfaceProfile formal_sphere();
SurfaceProfile formal_paraboloid();
SurfaceProfile random_exact_profile(std::uint64_t seed);

/// Random words reduced and checked against the four relations (appended on
/// either side) and against associativity of mul, all as exact equalities.
std::vector<CheckReport> algebra_suite(const SurfaceProfile& s, int words, int max_len, std::uint64_t seed);

CheckReport casimir_check();
/// poisson(X0, X+-) = +-X+-, poisson(X+, X-) = -rho'(X0) classically.
std::vector<CheckReport> poisson_suite(const SurfaceProfile& s);

std::vector<CheckReport> harmonic_suite(const HarmonicBasis& basis, int nmax, int jobs);
std::vector<CheckReport> product_suite(const HarmonicBasis& basis, Spin k, Gaussian alpha, int nmax, int jobs);
std::vector<CheckReport> wigner_suite(const HarmonicBasis& basis, Spin k, Gaussian alpha, int nmax, double tol);

/// ||P_n||^2 > 0 for n <= nmax at alpha = i, eps = 1, R^2 = -1 (exact sign).
CheckReport hyperboloid_norm_positivity(const HarmonicBasis& basis, int nmax);

std::vector<CheckReport> stereo_suite(double alpha_sq, double R_sq, double epsilon, int N, double tol);

/// eps(m + lambda) spectrum of H = X0 + X+ + X- on spin k against sqrt(5) eps j.
CheckReport crystal_check(Spin k, double epsilon, double tol);

struct ModeSummary {
  ExponentFit fit;
  TailReport tail;
  int N = 0;
};
ModeSummary mode_summary(int m, std::complex<double> lambda, double epsilon, double Rhat, int N);

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(int count, int jobs, F task);

}  // namespace ncsurf::cli

#include "ncsurf/cli/parallel.inl"
