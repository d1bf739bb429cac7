#include "ncsurf/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <sstream>

#include <json.hpp>

namespace ncsurf {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undefined: return "undefined";
  }
  return "fail";
}

CheckReport exact_report(std::string check, std::map<std::string, std::string> params, bool passed,
                         std::string detail) {
  CheckReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.status = passed ? Status::Pass : Status::Fail;
  r.max_deviation = passed ? 0.0 : std::numeric_limits<double>::infinity();
  r.detail = std::move(detail);
  return r;
}

CheckReport numeric_report(std::string check, std::map<std::string, std::string> params, double deviation,
                           double tol, std::string detail) {
  CheckReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.max_deviation = deviation;
  r.status = (std::isfinite(deviation) && deviation <= tol) ? Status::Pass : Status::Fail;
  r.detail = std::move(detail);
  return r;
}

bool all_ok(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.ok()) return false;
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const std::vector<CheckReport>& reports) {
  // Numbers are written by hand so that they keep the fixed 17-digit form;
  // nlohmann only escapes strings here.
  auto str = [](const std::string& v) { return nlohmann::json(v).dump(); };
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << (i ? ",\n" : "\n") << "  {\"check\": " << str(r.check) << ", \"params\": {";
    bool first = true;
    for (const auto& [k, v] : r.params) {
      os << (first ? "" : ", ") << str(k) << ": " << str(v);
      first = false;
    }
    os << "}, \"status\": " << str(to_string(r.status)) << ", \"max_deviation\": ";
    if (std::isfinite(r.max_deviation))
      os << format_double(r.max_deviation);
    else
      os << str(format_double(r.max_deviation));  // JSON has no infinity literal
    if (!r.detail.empty()) os << ", \"detail\": " << str(r.detail);
    os << "}";
  }
  os << (reports.empty() ? "]" : "\n]") << "\n";
  return os.str();
}

}  // namespace ncsurf
