#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ncsurf::cli {

/// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "0.7", "-0.3+0.2i", "1e-2i", "i"
std::complex<double> parse_complex(std::string_view text);

}  // namespace ncsurf::cli
