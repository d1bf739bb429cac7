#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "ncsurf/cli/app.hpp"
#include "ncsurf/cli/config.hpp"
#include "ncsurf/cli/suites.hpp"
#include "ncsurf/repr.hpp"

using namespace ncsurf;
using namespace ncsurf::cli;

namespace {

struct TempConfig {
  std::filesystem::path path;
  explicit TempConfig(const std::string& text) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("ncsurf_cfg_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".cfg");
    std::ofstream(path) << text;
  }
  ~TempConfig() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ncsurf");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kSphere = "type=builtin\nbuiltin=sphere-family\nalpha_sq=1\nR_sq=6\nepsilon=1\n";

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, SphereExample) {
  SurfaceConfig c = parse_config(kSphere);
  EXPECT_EQ(c.type, SurfaceConfig::Type::Builtin);
  EXPECT_EQ(c.builtin, "sphere-family");
  EXPECT_EQ(c.get("R_sq"), Rational(6));
  Rep r = rep_surface(c.profile(), {});
  EXPECT_EQ(r.dim(), 5);  // k = 2
}

TEST(Config, CommentsAndSpacing) {
  SurfaceConfig c = parse_config("# paraboloid\n  coeffs = 0, 1   # rho(u) = u\n\nepsilon = 1/4\nname = flat\n");
  EXPECT_EQ(c.type, SurfaceConfig::Type::Polynomial);
  ASSERT_EQ(c.coeffs.size(), 2u);
  EXPECT_EQ(c.coeffs[0], Rational(0));
  EXPECT_EQ(c.coeffs[1], Rational(1));
  EXPECT_EQ(c.name, "flat");
  SurfaceProfile s = c.profile();
  EXPECT_DOUBLE_EQ(s.value(2.5), 2.5);
  EXPECT_DOUBLE_EQ(s.epsilon_value(), 0.25);
}

TEST(Config, DecimalsAreExact) {
  SurfaceConfig c = parse_config("builtin=q-sphere\nkappa=0.5\nR_sq=1.25\nepsilon=1e-1\nC=-0.125\nkernel=printed\n");
  EXPECT_EQ(c.get("epsilon"), Rational(1, 10));
  EXPECT_EQ(c.get("C"), Rational(-1, 8));
  EXPECT_EQ(c.kernel, QKernel::Printed);
}

TEST(Config, MissingKeyNamed) {
  try {
    parse_config("builtin=sphere-family\nalpha_sq=1\nR_sq=6\n");
    FAIL() << "expected an error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("epsilon"), std::string::npos);
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("builtin=paraboloid\nepsilon=1\nradius=2\n"), 3);
  EXPECT_EQ(line_of("builtin=paraboloid\n# note\nepsilon=1\nepsilon=2\n"), 4);
  EXPECT_EQ(line_of("builtin=paraboloid\nepsilon=one\n"), 2);
  EXPECT_EQ(line_of("builtin=paraboloid\nepsilon 1\n"), 2);
  EXPECT_EQ(line_of("coeffs=1,,2\nepsilon=1\n"), 1);
  EXPECT_EQ(line_of("type=polynomial\nbuiltin=paraboloid\nepsilon=1\n"), 1);
  EXPECT_EQ(line_of("builtin=paraboloid\nepsilon=1\nkernel=printed\n"), 3);
  EXPECT_THROW(parse_config("builtin=paraboloid\ncoeffs=0,1\nepsilon=1\n"), ConfigError);
  EXPECT_THROW(parse_config("epsilon=1\n"), ConfigError);
}

TEST(Cli, ParseComplex) {
  EXPECT_EQ(parse_complex("0.7"), std::complex<double>(0.7, 0));
  EXPECT_EQ(parse_complex("0.7+0.2i"), std::complex<double>(0.7, 0.2));
  EXPECT_EQ(parse_complex("-1.5e-1 - 2i"), std::complex<double>(-0.15, -2));
  EXPECT_EQ(parse_complex("0.2i"), std::complex<double>(0, 0.2));
  EXPECT_EQ(parse_complex("-i"), std::complex<double>(0, -1));
  EXPECT_EQ(parse_complex("3+i"), std::complex<double>(3, 1));
  EXPECT_THROW(parse_complex("0.7+"), UsageError);
  EXPECT_THROW(parse_complex("abc"), UsageError);
}

TEST(Cli, VerifyHarmonicJson) {
  CliRun r = run_cli({"verify", "harmonic", "--nmax", "4", "--jobs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  int anticomm = 0;
  for (const auto& rec : j) {
    EXPECT_EQ(rec["status"], "pass") << rec.dump();
    EXPECT_TRUE(rec.contains("check") && rec.contains("params") && rec.contains("max_deviation"));
    if (rec["check"] == "harmonic.anticommutator") ++anticomm;
  }
  EXPECT_EQ(anticomm, 3 + 5 + 7 + 9);
}

TEST(Cli, ReportsAreDeterministic) {
  CliRun a = run_cli({"verify", "harmonic", "--nmax", "3", "--jobs", "4"});
  CliRun b = run_cli({"verify", "harmonic", "--nmax", "3", "--jobs", "1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CrystalCsvAgainstDenseOracle) {
  TempConfig cfg(kSphere);
  CliRun r = run_cli({"spectrum", "crystal", "--config", cfg.str(), "--k", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"index", "eigenvalue"}));

  const NumericBindings b{{"alpha", 1.0}, {"epsilon", 1.0}, {"R", std::sqrt(110.0)}};
  Rep rep = rep_spin(Spin::integer(10), b);
  Eigen::MatrixXcd h = rep.X0() + rep.Xp() + rep.Xm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 21; ++i) {
    const std::string& cell = rows[static_cast<std::size_t>(i + 1)][1];
    EXPECT_NEAR(std::stod(cell), es.eigenvalues()[i], 1e-10);
  }
}

TEST(Cli, SeventeenDigits) {
  TempConfig cfg(kSphere);
  CliRun r = run_cli({"spectrum", "crystal", "--config", cfg.str(), "--k", "1/2"});
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  const double v = std::stod(rows[2][1]);
  EXPECT_NEAR(v, std::sqrt(5.0) / 2, 1e-14);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  EXPECT_EQ(rows[2][1], buf);
  EXPECT_EQ(rows[2][1].size(), 18u);  // 17 digits and the point
}

TEST(Cli, HyperboloidModesJson) {
  CliRun r = run_cli({"hyperboloid", "modes", "--m", "0", "--lambda", "0.7", "--N", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["N"], 20000);
  EXPECT_NEAR(j["exponent"]["re"].get<double>(), 2.3, 1e-3);
  EXPECT_EQ(j["tail"]["label"], "empirical");
}

TEST(Cli, OutFileAndCsvHeader) {
  TempConfig cfg("builtin=sphere-family\nalpha_sq=1\nR_sq=1\nepsilon=0.1\n");
  auto out = std::filesystem::temp_directory_path() / ("ncsurf_out_" + std::to_string(::getpid()) + ".csv");
  CliRun r = run_cli({"project", "stereo", "--config", cfg.str(), "--N", "50", "--format", "csv", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "site,x,J0");
  std::filesystem::remove(out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"verify"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "harmonic", "--nmax", "x"}).code, 2);
  EXPECT_EQ(run_cli({"rep", "build"}).code, 2);
  EXPECT_EQ(run_cli({"spectrum", "crystal", "--config", "/nonexistent.cfg"}).code, 2);
  TempConfig bad("builtin=sphere-family\nalpha_sq=1\nR_sq=1.3\nepsilon=1\n");
  // |I_rho|/eps is not an integer: a verification failure, not a usage error.
  EXPECT_EQ(run_cli({"rep", "build", "--config", bad.str()}).code, 1);
  // A tolerance nothing can meet turns the report into a failure.
  TempConfig s(kSphere);
  CliRun tight = run_cli({"map", "hom", "--config", s.str(), "--tol", "1e-30"});
  EXPECT_EQ(tight.code, 1);
  EXPECT_NE(tight.out.find("\"fail\""), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, ProfileShowAndRepBuild) {
  TempConfig cfg(kSphere);
  CliRun p = run_cli({"profile", "show", "--config", cfg.str()});
  ASSERT_EQ(p.code, 0);
  auto rows = parse_csv(p.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][4]), 5.0, 1e-12);
  CliRun r = run_cli({"rep", "build", "--config", cfg.str(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j[0]["params"]["dim"], "5");
}

TEST(Cli, VerifyAlgebraAndWigner) {
  CliRun a = run_cli({"verify", "algebra", "--N", "30"});
  ASSERT_EQ(a.code, 0) << a.out;
  CliRun w = run_cli({"verify", "wigner-op", "--k", "3/2"});
  ASSERT_EQ(w.code, 0) << w.out;
  CliRun p = run_cli({"verify", "product", "--k", "3/2", "--nmax", "1"});
  ASSERT_EQ(p.code, 0) << p.out;
}
