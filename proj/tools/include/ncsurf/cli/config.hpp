#pragma once

// Line-oriented surface configs:
//
//   # unit sphere at k = 2
//   type = builtin
//   builtin = sphere-family
//   alpha_sq = 1
//   R_sq = 6
//   epsilon = 1

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncsurf/errors.hpp"
#include "ncsurf/maps.hpp"

namespace ncsurf::cli {

class ConfigError : public UsageError {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct SurfaceConfig {
  enum class Type { Builtin, Polynomial };

  std::string name;
  Type type = Type::Builtin;
  std::string builtin;
  std::vector<Rational> coeffs;            // constant term first
  std::map<std::string, Rational> params;  // alpha_sq, R_sq, epsilon, kappa, lambda, C
  QKernel kernel = QKernel::Corrected;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  Rational get(const std::string& key) const;
  double get_d(const std::string& key) const { return get(key).get_d(); }

  SurfaceProfile profile() const;
  ProfileParams profile_params() const;
};

SurfaceConfig parse_config(std::string_view text);
SurfaceConfig load_config(const std::string& path);

}  // namespace ncsurf::cli
