#pragma once

// Harmonic basis P^m_n of the sphere/hyperboloid algebra with profile
// alpha^2 (R^2 - u^2 + eps u), its trace functional and inner product, and
// exact checks of the identities the basis satisfies.

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "ncsurf/ncalg.hpp"
#include "ncsurf/report.hpp"
#include "ncsurf/scalars.hpp"
#include "ncsurf/wigner.hpp"

namespace ncsurf {

/// Formal parameters alpha, epsilon, R and the profile built from them.
class SphereFamily {
 public:
  SphereFamily();

  const ParamSetPtr& params() const { return params_; }
  const ScalarExpr& alpha() const { return alpha_; }
  const ScalarExpr& eps() const { return eps_; }
  const ScalarExpr& R() const { return R_; }
  const SurfaceProfile& profile() const { return profile_; }

 private:
  ParamSetPtr params_;
  ScalarExpr alpha_, eps_, R_;
  SurfaceProfile profile_;
};

/// Exact specialization used in spin-k comparisons: eps and alpha fixed,
/// R^2 = eps^2 k(k+1).
struct Specialization {
  Spin k;
  Rational epsilon{1};
  Gaussian alpha{1};

  ScalarExpr apply(const ScalarExpr& e) const;
  NumericBindings bindings() const;
};

struct Harmonic {
  int n = 0;
  int m = 0;
  NCPoly body;
};

struct ProductTerm {
  int n = 0;
  ScalarExpr formal;     // coefficient from formal triangular elimination
  bool defined = true;   // ||P_n||^2 != 0 at the specialization
  ScalarExpr projected;  // inner(P_n, product) / ||P_n||^2, specialized
  ScalarExpr predicted;  // cgc * reduced_element, specialized
};

class HarmonicBasis {
 public:
  HarmonicBasis() = default;

  const SphereFamily& family() const { return fam_; }
  const SurfaceProfile& profile() const { return fam_.profile(); }

  /// Memoized and safe to call concurrently.
  const Harmonic& P(int n, int m) const;

  /// Normalized spin-k trace rewritten through R^2 = eps^2 k(k+1).
  ScalarExpr pi0(const NCPoly& f) const;
  ScalarExpr inner(const NCPoly& f, const NCPoly& g) const;

  /// alpha^{2n} (n!)^2/(2n+1)! prod_{r=1}^n (4R^2 + eps^2 (1 - r^2))
  ScalarExpr norm_sq_closed(int n) const;
  /// alpha^n (alpha^{-2n} ||P_n||^2)^{1/2} at `s`; nullopt when the radicand is not positive.
  std::optional<ScalarExpr> norm_root(int n, const Specialization& s) const;

  /// Anticommutator coefficients in the form that makes the identity hold.
  ScalarExpr beta(int n) const;
  ScalarExpr beta_hat(int n) const;
  /// The same coefficients as printed in the source text (off by 4 and 4n).
  ScalarExpr printed_beta(int n) const;
  ScalarExpr printed_beta_hat(int n) const;

  CheckReport norm_check(int n, int m) const;
  CheckReport eigen_check(int n, int m) const;
  CheckReport anticomm_check(int n, int m) const;
  CheckReport gram_check(int nmax) const;

  /// Coefficients of P^{m1+m2}_n in P^{m1}_{n1} P^{m2}_{n2}; n runs over |m1+m2| .. n1+n2.
  std::vector<ProductTerm> product_expand(int n1, int m1, int n2, int m2, const Specialization& s) const;
  CheckReport product_check(int n1, int m1, int n2, int m2, const Specialization& s) const;

 private:
  void build_degree(int n) const;

  SphereFamily fam_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, Harmonic> cache_;
};

/// Sum_{j=-k}^{k} j^c / (2k+1) as a polynomial in w = k(k+1) (constant first).
std::vector<Rational> trace_power_in_w(unsigned c);

}  // namespace ncsurf
