#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "ncsurf/ncalg.hpp"
#include "ncsurf/scalars.hpp"

namespace ncsurf::testing {

inline std::uint64_t seed() {
  if (const char* s = std::getenv("NCSURF_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611u;
}

struct Formal {
  ParamSetPtr params = ParamSet::declare({"R", "alpha", "epsilon"});
  ScalarExpr alpha = param(params, "alpha");
  ScalarExpr eps = param(params, "epsilon");
  ScalarExpr R = param(params, "R");

  // alpha^2 (R^2 - u^2 + eps u)
  SurfaceProfile sphere() const {
    ScalarExpr a2 = alpha * alpha;
    return SurfaceProfile::polynomial({a2 * R * R, a2 * eps, -a2}, eps, "sphere-family");
  }
  SurfaceProfile paraboloid() const { return SurfaceProfile::polynomial({ScalarExpr(0), ScalarExpr(1)}, eps, "paraboloid"); }
};

inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline ScalarExpr random_scalar(std::mt19937_64& rng, const Formal& f, int terms = 3) {
  std::uniform_int_distribution<int> rad(0, 3), ex(-2, 2), pick(0, 2);
  static const int radicands[] = {1, 2, 3, 6};
  ScalarExpr r;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    const char* names[] = {"alpha", "epsilon", "R"};
    for (const char* n : names)
      if (pick(rng) == 0) m = m * Monomial::of(n, ex(rng));
    r += ScalarExpr(Gaussian(small_rational(rng), small_rational(rng)), Integer(radicands[rad(rng)]), m, f.params);
  }
  return r;
}

inline SurfaceProfile random_profile(std::mt19937_64& rng, const Formal& f) {
  std::uniform_int_distribution<int> deg(1, 3);
  std::vector<ScalarExpr> c;
  int d = deg(rng);
  for (int i = 0; i <= d; ++i) {
    ScalarExpr x(small_rational(rng));
    if (i == 0) x = x * f.R * f.R;
    c.push_back(x);
  }
  if (c.back().is_zero()) c.back() = ScalarExpr(1);
  return SurfaceProfile::polynomial(std::move(c), f.eps, "random");
}

inline Word random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), letter(0, 2);
  Word w(static_cast<std::size_t>(len(rng)));
  for (auto& l : w) l = static_cast<Letter>(letter(rng));
  return w;
}

}  // namespace ncsurf::testing
