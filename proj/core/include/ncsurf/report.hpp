#pragma once

#include <map>
#include <string>
#include <vector>

namespace ncsurf {

enum class Status { Pass, Fail, Undefined };

std::string to_string(Status s);

/// One verification outcome. max_deviation is 0 for exact checks that pass
/// and +inf for exact checks that fail.
struct CheckReport {
  std::string check;
  std::map<std::string, std::string> params;
  Status status = Status::Pass;
  double max_deviation = 0.0;
  std::string detail;

  bool ok() const { return status != Status::Fail; }
};

CheckReport exact_report(std::string check, std::map<std::string, std::string> params, bool passed,
                         std::string detail = {});
CheckReport numeric_report(std::string check, std::map<std::string, std::string> params, double deviation,
                           double tol, std::string detail = {});

bool all_ok(const std::vector<CheckReport>& reports);

/// Fixed 17-significant-digit formatting used in every machine-readable output.
std::string format_double(double v);

/// JSON array of {check, params, status, max_deviation[, detail]}.
std::string to_json(const std::vector<CheckReport>& reports);

}  // namespace ncsurf
