#include "ncsurf/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ncsurf::cli {

namespace {

const std::set<std::string> kNumeric{"alpha_sq", "R_sq", "epsilon", "kappa", "lambda", "C"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Rational number(int line, const std::string& key, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(line, "malformed number '" + text + "' for key '" + key + "'");
  }
}

std::vector<std::string> required_params(const SurfaceConfig& c) {
  if (c.type == SurfaceConfig::Type::Polynomial) return {"epsilon"};
  if (c.builtin == "sphere-family") return {"alpha_sq", "R_sq", "epsilon"};
  if (c.builtin == "paraboloid") return {"epsilon"};
  return {"kappa", "R_sq", "epsilon"};
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& what)
    : UsageError(line > 0 ? "config line " + std::to_string(line) + ": " + what : "config: " + what), line_(line) {}

Rational SurfaceConfig::get(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("config has no '" + key + "'");
  return it->second;
}

ProfileParams SurfaceConfig::profile_params() const { return ProfileParams{params, kernel}; }

SurfaceProfile SurfaceConfig::profile() const {
  if (type == Type::Builtin) return profile_builtin(builtin, profile_params());
  std::vector<ScalarExpr> c;
  for (const auto& q : coeffs) c.emplace_back(q);
  return SurfaceProfile::polynomial(std::move(c), ScalarExpr(get("epsilon")), name.empty() ? "polynomial" : name);
}

SurfaceConfig parse_config(std::string_view text) {
  SurfaceConfig c;
  std::map<std::string, int> seen;
  std::optional<std::string> type_text;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value");
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (value.empty()) throw ConfigError(line, "empty value for key '" + key + "'");
    if (auto [it, fresh] = seen.emplace(key, line); !fresh)
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");

    if (key == "name") {
      c.name = value;
    } else if (key == "type") {
      if (value != "builtin" && value != "polynomial") throw ConfigError(line, "type must be builtin or polynomial");
      type_text = value;
    } else if (key == "builtin") {
      if (value != "sphere-family" && value != "paraboloid" && value != "q-sphere")
        throw ConfigError(line, "unknown builtin '" + value + "'");
      c.builtin = value;
    } else if (key == "coeffs") {
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(line, "empty entry in coeffs");
        c.coeffs.push_back(number(line, key, item));
      }
    } else if (key == "kernel") {
      if (value == "corrected") c.kernel = QKernel::Corrected;
      else if (value == "printed") c.kernel = QKernel::Printed;
      else throw ConfigError(line, "kernel must be corrected or printed");
    } else if (kNumeric.count(key)) {
      c.params[key] = number(line, key, value);
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }

  const bool has_builtin = seen.count("builtin") != 0, has_coeffs = seen.count("coeffs") != 0;
  if (has_builtin == has_coeffs) throw ConfigError(0, "exactly one of 'builtin' and 'coeffs' is required");
  c.type = has_builtin ? SurfaceConfig::Type::Builtin : SurfaceConfig::Type::Polynomial;
  if (type_text && (*type_text == "builtin") != has_builtin)
    throw ConfigError(seen.at("type"), "type=" + *type_text + " does not match the profile given");
  if (seen.count("kernel") && c.builtin != "q-sphere") throw ConfigError(seen.at("kernel"), "kernel applies to q-sphere only");
  for (const auto& key : required_params(c))
    if (!c.has(key)) throw ConfigError(0, "missing required key '" + key + "'");
  if (c.name.empty()) c.name = has_builtin ? c.builtin : "polynomial";
  return c;
}

SurfaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ncsurf::cli
