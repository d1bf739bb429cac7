#include "ncsurf/cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "ncsurf/cli/config.hpp"
#include "ncsurf/cli/suites.hpp"
#include "ncsurf/errors.hpp"
#include "ncsurf/repr.hpp"

namespace ncsurf::cli {

namespace {

struct Options {
  std::string config;
  std::optional<int> nmax;
  std::optional<std::string> k;
  int m = 0;
  std::optional<std::string> lambda;
  std::optional<int> N;
  std::optional<double> tol;
  std::string out;
  std::string format;
  int jobs = 1;
  std::optional<int> component;
  std::optional<double> epsilon;
  std::optional<double> rhat;
};

enum class Format { Json, Csv };

Format pick_format(const Options& o, Format fallback) {
  if (o.format.empty()) return fallback;
  return o.format == "csv" ? Format::Csv : Format::Json;
}

SurfaceConfig need_config(const Options& o) {
  if (o.config.empty()) throw UsageError("this command needs --config");
  return load_config(o.config);
}

Spin parse_spin(const std::string& text) {
  try {
    return Spin::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("bad --k '" + text + "': " + e.what());
  }
}

double opt_tol(const Options& o, double fallback) { return o.tol.value_or(fallback); }

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

std::string f17(double v) { return format_double(v); }

/// Writes to --out when given, otherwise to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
}

int finish(const Options& o, std::ostream& out, const std::vector<CheckReport>& reports) {
  emit(o, out, to_json(reports) + "\n");
  return all_ok(reports) ? 0 : 1;
}

Gaussian alpha_from(const SurfaceConfig& c) {
  const Rational a2 = c.get("alpha_sq");
  if (a2 == 1) return Gaussian(1);
  if (a2 == -1) return Gaussian::i();
  throw UsageError("harmonic checks take alpha_sq = 1 or -1");
}

Rational epsilon_from(const SurfaceConfig& c) { return c.get("epsilon"); }

// --- commands ------------------------------------------------------------------

int cmd_verify_algebra(const Options& o, std::ostream& out) {
  const int words = o.N.value_or(200);
  const std::uint64_t seed = default_seed();
  std::vector<CheckReport> reports;
  auto add = [&](std::vector<CheckReport> r) { reports.insert(reports.end(), r.begin(), r.end()); };
  if (!o.config.empty()) {
    const SurfaceConfig c = load_config(o.config);
    const SurfaceProfile s = c.profile();
    if (!s.is_exact()) throw UsageError("verify algebra needs a polynomial profile");
    add(algebra_suite(s, words, 8, seed));
  } else {
    const SurfaceProfile sphere = formal_sphere(), para = formal_paraboloid();
    add(algebra_suite(sphere, words, 8, seed));
    add(algebra_suite(para, words, 8, seed + 1));
    reports.push_back(casimir_check());
    add(poisson_suite(sphere));
    add(poisson_suite(para));
  }
  return finish(o, out, reports);
}

int cmd_verify_harmonic(const Options& o, std::ostream& out) {
  HarmonicBasis basis;
  return finish(o, out, harmonic_suite(basis, o.nmax.value_or(4), o.jobs));
}

std::vector<Gaussian> alphas_for(const Options& o, Rational& eps) {
  eps = 1;
  if (o.config.empty()) return {Gaussian(1), Gaussian::i()};
  const SurfaceConfig c = load_config(o.config);
  eps = epsilon_from(c);
  return {alpha_from(c)};
}

int cmd_verify_product(const Options& o, std::ostream& out) {
  const Spin k = parse_spin(o.k.value_or("2"));
  Rational eps;
  const auto alphas = alphas_for(o, eps);
  if (eps != 1) throw UsageError("product checks are specialized at epsilon = 1");
  HarmonicBasis basis;
  std::vector<CheckReport> reports;
  for (const Gaussian& a : alphas) {
    auto r = product_suite(basis, k, a, o.nmax.value_or(3), o.jobs);
    reports.insert(reports.end(), r.begin(), r.end());
  }
  return finish(o, out, reports);
}

int cmd_verify_wigner(const Options& o, std::ostream& out) {
  const Spin k = parse_spin(o.k.value_or("2"));
  Rational eps;
  const auto alphas = alphas_for(o, eps);
  if (eps != 1) throw UsageError("Wigner-operator checks are specialized at epsilon = 1");
  HarmonicBasis basis;
  std::vector<CheckReport> reports;
  for (const Gaussian& a : alphas) {
    auto r = wigner_suite(basis, k, a, o.nmax.value_or(k.twice), opt_tol(o, 1e-12));
    reports.insert(reports.end(), r.begin(), r.end());
  }
  return finish(o, out, reports);
}

int cmd_rep_build(const Options& o, std::ostream& out) {
  const SurfaceConfig c = need_config(o);
  const SurfaceProfile s = c.profile();
  RepOptions opt;
  opt.truncation = o.N.value_or(200);
  opt.component = o.component;
  if (o.lambda) {
    const auto l = parse_complex(*o.lambda);
    if (l.imag() != 0.0) throw UsageError("rep build pins a real lambda");
    opt.lambda = l.real();
  } else if (c.has("lambda")) {
    opt.lambda = c.get_d("lambda");
  }
  const Rep r = rep_surface(s, {}, opt);
  const double res = relation_residual(r, s, {});
  const CheckReport rep = numeric_report(
      "rep.relations",
      {{"profile", c.name}, {"dim", std::to_string(r.dim())}, {"lambda", f17(r.lambda)}, {"m_lo", std::to_string(r.m_lo)},
       {"lower_cut", r.lower_cut ? "true" : "false"}, {"upper_cut", r.upper_cut ? "true" : "false"}},
      res, opt_tol(o, 1e-10));
  if (pick_format(o, Format::Csv) == Format::Json) return finish(o, out, {rep});
  std::string text = csv_row({"index", "m", "x0", "C_re", "C_im", "D_re", "D_im"});
  for (int i = 0; i < r.dim(); ++i) {
    const auto up = i > 0 ? r.up[static_cast<std::size_t>(i - 1)] : std::complex<double>(0);
    const auto dn = i > 0 ? r.down[static_cast<std::size_t>(i - 1)] : std::complex<double>(0);
    text += csv_row({std::to_string(i), std::to_string(r.m_lo + i), f17(r.diag[static_cast<std::size_t>(i)]),
                     f17(up.real()), f17(up.imag()), f17(dn.real()), f17(dn.imag())});
  }
  emit(o, out, text);
  return rep.ok() ? 0 : 1;
}

int cmd_spectrum_crystal(const Options& o, std::ostream& out) {
  const SurfaceConfig c = need_config(o);
  Rep r;
  std::optional<Spin> k;
  if (o.k) {
    if (c.builtin != "sphere-family") throw UsageError("--k needs a sphere-family config");
    k = parse_spin(*o.k);
    const double kv = k->value(), eps = c.get_d("epsilon");
    const double a2 = c.get_d("alpha_sq");
    const std::complex<double> alpha = std::sqrt(std::complex<double>(a2));
    r = rep_spin(*k, {{"alpha", alpha}, {"epsilon", eps}, {"R", eps * std::sqrt(kv * (kv + 1))}});
  } else {
    RepOptions opt;
    opt.truncation = o.N.value_or(200);
    opt.component = o.component;
    r = rep_surface(c.profile(), {}, opt);
  }
  const Tridiag t = crystal_matrix(r);
  const auto ev = eigenvalues(t);
  if (pick_format(o, Format::Csv) == Format::Json) {
    if (!k || c.get("alpha_sq") != 1) throw UsageError("the JSON crystal report compares against the alpha = 1 sphere; pass --k");
    return finish(o, out, {crystal_check(*k, c.get_d("epsilon"), opt_tol(o, 1e-10))});
  }
  std::string text = csv_row({"index", "eigenvalue"});
  for (std::size_t i = 0; i < ev.size(); ++i) text += csv_row({std::to_string(i), f17(ev[i])});
  emit(o, out, text);
  return 0;
}

int cmd_hyperboloid_modes(const Options& o, std::ostream& out) {
  double eps = o.epsilon.value_or(1.0), rhat = o.rhat.value_or(1.0);
  if (!o.config.empty()) {
    const SurfaceConfig c = load_config(o.config);
    if (c.builtin != "sphere-family" || c.get("alpha_sq") >= 0)
      throw UsageError("hyperboloid modes need a sphere-family config with alpha_sq < 0");
    eps = c.get_d("epsilon");
    const double rhat_sq = -c.get_d("R_sq") - eps * eps / 4;
    if (rhat_sq < 0) throw UsageError("one-sheeted hyperboloid needs -R^2 - eps^2/4 >= 0");
    rhat = std::sqrt(rhat_sq);
  }
  const std::complex<double> lambda = parse_complex(o.lambda.value_or("0.7"));
  const int N = o.N.value_or(100000);
  if (pick_format(o, Format::Json) == Format::Csv) {
    const ModeSequence seq = cn_sequence(o.m, lambda, eps, rhat, N);
    const TailReport tail = tail_partial_sums(seq);
    std::string text = csv_row({"n", "log_abs_c", "log_partial_sum"});
    for (int n = seq.first(); n <= seq.last(); ++n)
      text += csv_row({std::to_string(n), f17(seq.log_abs(n)),
                       f17(tail.log_partial_sums[static_cast<std::size_t>(n - seq.first())])});
    emit(o, out, text);
    return 0;
  }
  const ModeSummary s = mode_summary(o.m, lambda, eps, rhat, N);
  std::ostringstream js;
  js << "{\"m\": " << o.m << ", \"lambda\": {\"re\": " << f17(lambda.real()) << ", \"im\": " << f17(lambda.imag())
     << "}, \"epsilon\": " << f17(eps) << ", \"Rhat\": " << f17(rhat) << ", \"N\": " << N
     << ", \"exponent\": {\"re\": " << f17(s.fit.a.real()) << ", \"im\": " << f17(s.fit.a.imag())
     << ", \"error\": " << f17(s.fit.error) << ", \"window\": " << s.fit.window << "}"
     << ", \"tail\": {\"classification\": \"" << to_string(s.tail.classification) << "\", \"power\": " << f17(s.tail.power)
     << ", \"log_partial_sum\": " << f17(s.tail.log_partial_sums.back()) << ", \"label\": \"empirical\"}}\n";
  emit(o, out, js.str());
  return 0;
}

int cmd_project_stereo(const Options& o, std::ostream& out) {
  const SurfaceConfig c = need_config(o);
  if (c.builtin != "sphere-family") throw UsageError("project stereo needs a sphere-family config");
  const double a2 = c.get_d("alpha_sq"), r2 = c.get_d("R_sq"), eps = c.get_d("epsilon");
  const int N = o.N.value_or(400);
  if (pick_format(o, Format::Json) == Format::Json) return finish(o, out, stereo_suite(a2, r2, eps, N, opt_tol(o, 1e-8)));
  const StereoResult st = stereo_rep(a2, r2, eps, N);
  std::string text = csv_row({"site", "x", "J0"});
  for (int i = 0; i < N; ++i)
    text += csv_row({std::to_string(i), f17(st.x[static_cast<std::size_t>(i)]), f17(st.J0(i, i).real())});
  emit(o, out, text);
  const double tol = opt_tol(o, 1e-8);
  return st.relation_residual <= tol && st.casimir_residual <= tol ? 0 : 1;
}

int cmd_map_hom(const Options& o, std::ostream& out) {
  const SurfaceConfig c = need_config(o);
  if (c.builtin != "sphere-family") throw UsageError("map hom takes a sphere-family source config");
  const double a2 = c.get_d("alpha_sq"), r2 = c.get_d("R_sq"), eps = c.get_d("epsilon");
  const double rhat_sq = r2 + eps * eps / 4;
  if (!(rhat_sq > 0)) throw UsageError("map hom needs R^2 + eps^2/4 > 0");
  const double rhat = std::sqrt(rhat_sq);
  const SurfaceProfile source = c.profile();
  const SurfaceProfile target = profile_builtin("paraboloid", ProfileParams{{{"epsilon", c.get("epsilon")}}});
  auto sigma = [=](double u) { return std::sqrt(std::complex<double>(a2 * (2 * rhat - u))); };
  const HomSpec h{sigma, sigma, eps / 2 - rhat, 1.0, source, target};
  RepOptions opt;
  opt.truncation = o.N.value_or(100);
  const Rep y = rep_surface(target, {}, opt);
  const HomImage img = hom_apply(h, y, {});
  std::vector<double> below;
  for (double u : y.diag)
    if (u <= 2 * rhat) below.push_back(u);
  const std::map<std::string, std::string> p{{"source", c.name}, {"target", "paraboloid"}, {"N", std::to_string(y.dim())}};
  const double tol = opt_tol(o, 1e-10);
  std::vector<CheckReport> reports{numeric_report("hom.factorization", p, hom_factorization_residual(h, y.diag, {}), tol),
                                   numeric_report("hom.relations", p, img.residual, tol)};
  if (a2 > 0) reports.push_back(numeric_report("hom.conjugation", p, hom_conjugation_residual(h, below), tol));
  if (pick_format(o, Format::Json) == Format::Json) return finish(o, out, reports);
  std::string text = csv_row({"index", "Y0", "X0", "Xp_re", "Xp_im"});
  for (int i = 0; i < y.dim(); ++i) {
    const auto xp = i > 0 ? img.Xp(i, i - 1) : std::complex<double>(0);
    text += csv_row({std::to_string(i), f17(y.diag[static_cast<std::size_t>(i)]), f17(img.X0(i, i).real()), f17(xp.real()),
                     f17(xp.imag())});
  }
  emit(o, out, text);
  return all_ok(reports) ? 0 : 1;
}

int cmd_profile_show(const Options& o, std::ostream& out) {
  const SurfaceConfig c = need_config(o);
  const SurfaceProfile s = c.profile();
  const double eps = s.epsilon_value();
  const auto comps = positivity_components(s, {});
  if (pick_format(o, Format::Csv) == Format::Csv) {
    std::string text = csv_row({"component", "lo", "hi", "length", "length_over_eps"});
    for (std::size_t i = 0; i < comps.size(); ++i)
      text += csv_row({std::to_string(i), f17(comps[i].lo), f17(comps[i].hi), f17(comps[i].length()),
                       f17(comps[i].length() / eps)});
    emit(o, out, text);
    return 0;
  }
  std::ostringstream js;
  js << "{\"name\": \"" << c.name << "\", \"exact\": " << (s.is_exact() ? "true" : "false") << ", \"epsilon\": " << f17(eps)
     << ", \"components\": [";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(v > 0 ? "\"inf\"" : "\"-inf\""); };
    js << (i ? ", " : "") << "{\"lo\": " << num(comps[i].lo) << ", \"hi\": " << num(comps[i].hi)
       << ", \"length_over_eps\": " << num(comps[i].length() / eps) << "}";
  }
  js << "]}\n";
  emit(o, out, js.str());
  return 0;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*$)");
  static const std::regex pure(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*$)");
  const std::string s(text);
  std::smatch mt;
  if (std::regex_match(s, mt, pure)) {
    const double mag = mt[2].matched ? std::stod(mt[2]) : 1.0;
    return {0.0, mt[1] == "-" ? -mag : mag};
  }
  if (std::regex_match(s, mt, re) && mt[1].matched) {
    const double re_part = std::stod(mt[1]);
    double im = 0.0;
    if (mt[2].matched) {
      im = mt[3].matched ? std::stod(mt[3]) : 1.0;
      if (mt[2] == "-") im = -im;
    }
    return {re_part, im};
  }
  throw UsageError("malformed complex number '" + s + "' (expected a+bi)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numeric checks for noncommutative surfaces of rotation", "ncsurf"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "surface config file")->check(CLI::ExistingFile);
    sub->add_option("--nmax", o.nmax, "largest harmonic degree")->check(CLI::NonNegativeNumber);
    sub->add_option("--k", o.k, "spin, e.g. 2 or 5/2");
    sub->add_option("--m", o.m, "magnetic index");
    sub->add_option("--lambda", o.lambda, "complex number a+bi");
    sub->add_option("--N", o.N, "truncation / sequence length")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "numeric tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "write output here instead of stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--component", o.component, "positivity component when I_rho is disconnected");
    sub->add_option("--epsilon", o.epsilon, "deformation parameter (hyperboloid modes without config)");
    sub->add_option("--rhat", o.rhat, "Rhat (hyperboloid modes without config)");
  };

  using Cmd = int (*)(const Options&, std::ostream&);
  std::vector<std::pair<CLI::App*, Cmd>> leaves;
  auto group = [&](const char* name, const char* help) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };
  auto leaf = [&](CLI::App* parent, const char* name, const char* help, Cmd fn) {
    auto* sub = parent->add_subcommand(name, help);
    common(sub);
    leaves.emplace_back(sub, fn);
  };

  auto* verify = group("verify", "exact and numeric verification suites");
  leaf(verify, "algebra", "relations, associativity, Casimir, Poisson limit", cmd_verify_algebra);
  leaf(verify, "harmonic", "eigen-equations, ladders, norms, anticommutator, Gram matrix", cmd_verify_harmonic);
  leaf(verify, "product", "product law via Clebsch-Gordan and 6j coefficients", cmd_verify_product);
  leaf(verify, "wigner-op", "harmonics as Wigner operators on spin k", cmd_verify_wigner);
  leaf(group("rep", "representations"), "build", "ladder representation of a profile", cmd_rep_build);
  leaf(group("spectrum", "spectra"), "crystal", "eigenvalues of X0 + X+ + X-", cmd_spectrum_crystal);
  leaf(group("hyperboloid", "one-sheeted hyperboloid"), "modes", "c_n recursion and exponent fit", cmd_hyperboloid_modes);
  leaf(group("project", "projections"), "stereo", "noncommutative stereographic projection", cmd_project_stereo);
  leaf(group("map", "homomorphisms"), "hom", "Holstein-Primakoff map onto the paraboloid", cmd_map_hom);
  leaf(group("profile", "profiles"), "show", "positivity set of a profile", cmd_profile_show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [sub, fn] : leaves)
      if (sub->parsed()) return fn(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return 1;
  }
  err << "no command given\n";
  return 2;
}

}  // namespace ncsurf::cli
