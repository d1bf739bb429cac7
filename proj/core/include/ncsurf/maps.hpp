#pragma once

// Built-in profiles, homomorphisms between surfaces of rotation, the
// noncommutative complex-plane picture and the stereographic projection.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncsurf/ncalg.hpp"
#include "ncsurf/repr.hpp"

namespace ncsurf {

/// q-sphere kernel variant: the consistent one, or the displayed cosh(3 kappa u - eps kappa) form.
enum class QKernel { Corrected, Printed };

struct ProfileParams {
  std::map<std::string, Rational> values;  // alpha_sq, R_sq, epsilon, kappa, C
  QKernel kernel = QKernel::Corrected;

  Rational get(const std::string& key) const;
  Rational get_or(const std::string& key, Rational fallback) const;
};

/// "sphere-family" | "paraboloid" | "q-sphere".
SurfaceProfile profile_builtin(const std::string& name, const ProfileParams& p);

/// rho_q(u) for the requested kernel, exposed for direct checks.
double q_sphere_rho(double u, double kappa, double R_sq, double epsilon, double C, QKernel kernel);

// --- homomorphisms -----------------------------------------------------------

struct HomSpec {
  using Fn = std::function<std::complex<double>(double)>;
  Fn sigma_plus;
  Fn sigma_minus;
  double lambda_shift = 0.0;
  double epsilon_ratio = 1.0;  // eps_source / eps_target
  SurfaceProfile source;
  SurfaceProfile target;
};

/// Max relative deviation of rho1(r u + lambda) from rho2(u) sigma+(u) sigma-(u) on `grid`.
double hom_factorization_residual(const HomSpec& h, const std::vector<double>& grid, const NumericBindings& b);
/// Max |conj(sigma+(u)) - sigma-(u)| on `grid`.
double hom_conjugation_residual(const HomSpec& h, const std::vector<double>& grid);

struct HomImage {
  Eigen::MatrixXcd X0, Xp, Xm;
  double residual = 0.0;  // source relations on the interior
};

HomImage hom_apply(const HomSpec& h, const Rep& rep_target, const NumericBindings& b);

/// |I_rho| / eps for a profile whose positivity set is bounded (single component).
double topology_ratio(const SurfaceProfile& s, const NumericBindings& b);

// --- stereographic projection ------------------------------------------------

struct MobiusParams {
  double epsilon = 0.0;
  double Rhat = 1.0;  // Rhat^2 = R^2 + eps^2/4
  double alpha_sq = 1.0;

  static MobiusParams from(double alpha_sq, double R_sq, double epsilon);
};

/// y = z+ z- from x = z- z+ on the same site.
double mobius_step(double x, const MobiusParams& p);
double mobius_inverse(double y, const MobiusParams& p);
/// |x - y - (-eps / (8 Rhat^3 alpha^2)) (4 Rhat^2 + alpha^2 x)(4 Rhat^2 + alpha^2 y)|
double cross_relation_residual(double x, double y, const MobiusParams& p);

/// J0 value Rhat (4 Rhat^2 - alpha^2 x)/(4 Rhat^2 + alpha^2 x) - eps/2
double stereo_j0(double x, const MobiusParams& p);
/// 4 Rhat^2 alpha^2 / (4 Rhat^2 + alpha^2 x); J+ = i z+ g(x) and J- = -i g(x) z-.
double stereo_weight(double x, const MobiusParams& p);

struct StereoResult {
  std::vector<double> x;  // z- z+ per site, ascending site index
  Eigen::MatrixXcd J0, Jp, Jm;
  bool lower_cut = false, upper_cut = false;
  double relation_residual = 0.0;
  double casimir_residual = 0.0;
  double spacing_residual = 0.0;       // J0 steps of exactly eps
  double reversibility_residual = 0.0;  // relative, reseeding from the other end
  double cross_residual = 0.0;          // Mobius cross relation along the orbit
};

StereoResult stereo_rep(double alpha_sq, double R_sq, double epsilon, int truncation);

/// eps = 0 projection against the classical stereographic formulas on a grid of |z|.
double classical_projection_residual(double alpha_sq, double R, const std::vector<double>& radii);

// --- complex-plane picture ---------------------------------------------------

/// Verifies tau(z- z+) - tau(z+ z-) = eps and X0 = tau(z+ z-) with tau the inverse
/// of rho on `branch`, over interior sites whose X0 values stay in the branch.
double tau_check(const SurfaceProfile& s, const Rep& rep, const NumericBindings& b, Interval branch);

}  // namespace ncsurf
