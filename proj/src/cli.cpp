#include "fracpow/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "fracpow/error.hpp"
#include "fracpow/exact.hpp"
#include "fracpow/fem.hpp"
#include "fracpow/geometry.hpp"
#include "fracpow/rational.hpp"

namespace fracpow::cli {

namespace {

struct KeyInfo {
  const char* name;
  const char* help;
};

// Every key accepted on the command line or in a run file.
constexpr KeyInfo kKeys[] = {
    {"g", "Robin coefficient(s), comma list"},
    {"alpha", "fractional power(s) in (0, 1), comma list"},
    {"beta", "negative power in (0, 1)"},
    {"mu", "expansion point: auto or a positive value"},
    {"M", "quadrature order(s), comma list"},
    {"N", "time step count(s), comma list"},
    {"k", "root indices, comma list"},
    {"sigma", "weight of the implicit scheme in [0.5, 1]"},
    {"level", "mesh level(s) 1..3, comma list"},
    {"scheme", "explicit or implicit"},
    {"nu", "resolvent shift nu >= 0 (0: negative power)"},
    {"T", "final time"},
    {"zmin", "smallest sample point (0: mu)"},
    {"zmax", "largest sample point"},
    {"samples", "number of log-spaced sample points"},
    {"out", "output file (default stdout)"},
};

const std::set<std::string>& keys_for(Command c) {
  static const std::map<Command, std::set<std::string>> table = {
      {Command::Roots, {"g", "k", "out"}},
      {Command::Spectrum, {"g", "level", "out"}},
      {Command::Gamma, {"alpha", "M", "mu", "g", "out"}},
      {Command::ApproxError,
       {"beta", "alpha", "nu", "mu", "g", "M", "zmin", "zmax", "samples", "out"}},
      {Command::Converge, {"scheme", "alpha", "g", "level", "M", "N", "sigma", "mu", "T", "out"}},
      {Command::Mesh, {"level", "out"}},
  };
  return table.at(c);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParameterError("--" + key + ": '" + text + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError("--" + key + ": '" + text + "' is not an integer");
  return v;
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  if (parts.empty()) throw ParameterError("--" + key + ": empty list");
  for (const auto& p : parts)
    if (p.empty()) throw ParameterError("--" + key + ": empty list entry in '" + text + "'");
  return parts;
}

std::vector<double> real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_list(key, text)) out.push_back(parse_real(key, p));
  return out;
}

std::vector<std::size_t> count_list(const std::string& key, const std::string& text,
                                    long long min_value) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(key, text)) {
    const long long v = parse_integer(key, p);
    if (v < min_value)
      throw ParameterError("--" + key + ": " + p + " is below " + std::to_string(min_value));
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>)
      s += fmt(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

void require_unit_interval(const std::string& key, const std::vector<double>& v) {
  for (double x : v)
    if (!(x > 0.0 && x < 1.0)) throw ParameterError("--" + key + ": " + fmt(x) + " not in (0, 1)");
}

void require_positive(const std::string& key, const std::vector<double>& v) {
  for (double x : v)
    if (!(x > 0.0)) throw ParameterError("--" + key + ": " + fmt(x) + " must be > 0");
}

// Continuous lambda_1 = nu_1(g)^2, the auto expansion point for the scalar studies.
double continuous_lambda1(double g) {
  const double r = robin_roots(g, 1).roots[0];
  return r * r;
}

double scalar_mu(const ExperimentConfig& cfg) {
  return cfg.mu ? *cfg.mu : continuous_lambda1(cfg.g.front());
}

void write_header(const ExperimentConfig& cfg, std::ostream& csv) {
  csv << "# fracpow " << to_string(cfg.command) << '\n';
  for (const auto& [k, v] : cfg.echo()) csv << "# " << k << '=' << v << '\n';
}

const char* kExactNote =
    "exact solution u = exp(-nu1^(2 alpha) t) J0(nu1 r) + 1.5 exp(-nu3^(2 alpha) t) J0(nu3 r); "
    "the second mode is read as Bessel order 0 at the third Robin root";

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<double> log_samples(double lo, double hi, std::size_t count) {
  std::vector<double> z(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    z[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  z.front() = lo;
  z.back() = hi;
  return z;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Roots: return "roots";
    case Command::Spectrum: return "spectrum";
    case Command::Gamma: return "gamma";
    case Command::ApproxError: return "approx-error";
    case Command::Converge: return "converge";
    case Command::Mesh: return "mesh";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Roots, Command::Spectrum, Command::Gamma, Command::ApproxError,
                    Command::Converge, Command::Mesh})
    if (to_string(c) == name) return c;
  throw ParameterError("unknown command '" + name + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Settings read_settings(std::istream& in) {
  Settings s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty()) throw ParseError("missing key", lineno);
    bool known = false;
    for (const auto& k : kKeys) known = known || key == k.name;
    if (!known) throw ParseError("unknown key '" + key + "'", lineno);
    s[key] = trim(line.substr(eq + 1));
  }
  return s;
}

Settings read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open run file " + path.string());
  return read_settings(in);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  const auto& keys = keys_for(command);
  auto has = [&](const char* k) { return keys.count(k) > 0; };
  if (has("scheme")) e.emplace_back("scheme", scheme == SchemeKind::Explicit ? "explicit" : "implicit");
  if (has("g")) e.emplace_back("g", join(g));
  if (has("alpha")) e.emplace_back("alpha", join(alpha));
  if (has("beta")) e.emplace_back("beta", join(beta));
  if (has("nu")) e.emplace_back("nu", fmt(nu));
  if (has("mu")) e.emplace_back("mu", mu ? fmt(*mu) : "auto");
  if (has("level")) e.emplace_back("level", join(levels));
  if (has("M")) e.emplace_back("M", join(M));
  if (has("N")) e.emplace_back("N", join(N));
  if (has("k")) e.emplace_back("k", join(k));
  if (has("sigma")) e.emplace_back("sigma", fmt(sigma));
  if (has("T")) e.emplace_back("T", fmt(final_time));
  if (has("zmin")) e.emplace_back("zmin", zmin > 0.0 ? fmt(zmin) : "mu");
  if (has("zmax")) e.emplace_back("zmax", fmt(zmax));
  if (has("samples")) e.emplace_back("samples", std::to_string(samples));
  return e;
}

ExperimentConfig resolve(Command command, const Settings& settings) {
  const auto& allowed = keys_for(command);
  for (const auto& [key, value] : settings) {
    bool known = false;
    for (const auto& k : kKeys) known = known || key == k.name;
    if (!known) throw ParameterError("unknown option --" + key);
    if (!allowed.count(key))
      throw ParameterError("option --" + key + " does not apply to '" + to_string(command) + "'");
    (void)value;
  }
  auto get = [&](const std::string& key, const std::string& fallback) {
    if (!allowed.count(key)) return fallback;
    const auto it = settings.find(key);
    return it == settings.end() ? fallback : it->second;
  };

  ExperimentConfig cfg;
  cfg.command = command;
  cfg.out = get("out", "");

  const bool list_g = command == Command::Roots || command == Command::Spectrum;
  cfg.g = real_list("g", get("g", list_g ? "1,10,100" : "10"));
  require_positive("g", cfg.g);
  if (!list_g && cfg.g.size() != 1) throw ParameterError("--g: a single value is expected");

  cfg.k = count_list("k", get("k", "1,3"), 1);

  const bool list_alpha = command == Command::Gamma;
  cfg.alpha = real_list("alpha", get("alpha", list_alpha ? "0.25,0.5,0.75" : "0.5"));
  require_unit_interval("alpha", cfg.alpha);
  if (!list_alpha && cfg.alpha.size() != 1) throw ParameterError("--alpha: a single value is expected");

  cfg.beta = real_list("beta", get("beta", "0.5"));
  require_unit_interval("beta", cfg.beta);
  if (cfg.beta.size() != 1) throw ParameterError("--beta: a single value is expected");

  const std::string mu = trim(get("mu", "auto"));
  if (mu != "auto") {
    cfg.mu = parse_real("mu", mu);
    if (!(*cfg.mu > 0.0)) throw ParameterError("--mu must be > 0 or auto");
  }

  cfg.M = count_list("M", get("M", "5,10,20,40"), 1);
  cfg.N = count_list("N", get("N", "25,50,100,200"), 0);

  const std::string default_levels = command == Command::Spectrum  ? "1,2,3"
                                     : command == Command::Converge ? "2"
                                                                    : "1";
  for (std::size_t l : count_list("level", get("level", default_levels), 1)) {
    if (l > 3) throw ParameterError("--level: " + std::to_string(l) + " not in 1..3");
    cfg.levels.push_back(static_cast<int>(l));
  }
  if (command != Command::Spectrum && cfg.levels.size() != 1)
    throw ParameterError("--level: a single value is expected");

  const std::string scheme = trim(get("scheme", "explicit"));
  if (scheme == "explicit")
    cfg.scheme = SchemeKind::Explicit;
  else if (scheme == "implicit")
    cfg.scheme = SchemeKind::ImplicitWeighted;
  else
    throw ParameterError("--scheme must be explicit or implicit, got '" + scheme + "'");

  cfg.sigma = parse_real("sigma", get("sigma", "1"));
  if (!(cfg.sigma >= 0.5 && cfg.sigma <= 1.0)) throw ParameterError("--sigma must lie in [0.5, 1]");

  cfg.nu = parse_real("nu", get("nu", "0"));
  if (cfg.nu < 0.0) throw ParameterError("--nu must be >= 0");

  cfg.final_time = parse_real("T", get("T", "0.25"));
  if (!(cfg.final_time > 0.0)) throw ParameterError("--T must be > 0");

  cfg.zmin = parse_real("zmin", get("zmin", "0"));
  cfg.zmax = parse_real("zmax", get("zmax", "100000"));
  if (cfg.zmin < 0.0) throw ParameterError("--zmin must be >= 0");
  if (!(cfg.zmax > cfg.zmin) || !(cfg.zmax > 0.0)) throw ParameterError("--zmax must exceed --zmin");
  const long long samples = parse_integer("samples", get("samples", "200"));
  if (samples < 2) throw ParameterError("--samples must be at least 2");
  cfg.samples = static_cast<std::size_t>(samples);
  return cfg;
}

void cmd_roots(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  std::size_t count = 0;
  for (std::size_t k : cfg.k) count = std::max(count, k);
  write_header(cfg, csv);
  csv << "g,k,nu,nu_squared\n";
  for (double g : cfg.g) {
    const RobinRoots r = robin_roots(g, count);
    for (std::size_t k : cfg.k) {
      const double v = r.roots[k - 1];
      csv << fmt(g) << ',' << k << ',' << fmt(v) << ',' << fmt(v * v) << '\n';
    }
  }
  log << "roots of -nu J1(nu) + g J0(nu) = 0 for " << cfg.g.size() << " value(s) of g\n";
}

void cmd_spectrum(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  write_header(cfg, csv);
  csv << "g,level,vertices,delta_h,delta_bar_h,lambda1,relative_gap,upper_growth\n";
  for (double g : cfg.g) {
    const double lambda1 = continuous_lambda1(g);
    double previous_upper = 0.0;
    for (int level : cfg.levels) {
      auto mesh = std::make_shared<const Mesh>(quarter_disk_mesh(level));
      ProblemCoefficients coeff;
      coeff.g = g;
      const DiscreteOperator op = assemble(mesh, coeff);
      const SpectrumBounds b = op.bounds();
      const double gap = (b.lower - lambda1) / lambda1;
      csv << fmt(g) << ',' << level << ',' << op.size() << ',' << fmt(b.lower) << ','
          << fmt(b.upper) << ',' << fmt(lambda1) << ',' << fmt(gap) << ',';
      if (previous_upper > 0.0) csv << fmt(b.upper / previous_upper);
      csv << '\n';
      log << "g=" << fmt(g) << " level=" << level << ": delta_h "
          << (std::abs(gap) <= 0.01 ? "within" : "NOT within") << " 1% of lambda1";
      if (previous_upper > 0.0) log << ", upper bound growth " << fmt(b.upper / previous_upper);
      log << '\n';
      previous_upper = b.upper;
    }
  }
}

void cmd_gamma(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  const double mu = scalar_mu(cfg);
  write_header(cfg, csv);
  csv << "# mu_value=" << fmt(mu) << '\n';
  csv << "M,alpha,beta,gamma_bar,tau0\n";
  for (std::size_t m : cfg.M)
    for (double alpha : cfg.alpha) {
      const double gb = gamma_bar(build_negative_power(1.0 - alpha, mu, m)).value;
      csv << m << ',' << fmt(alpha) << ',' << fmt(1.0 - alpha) << ',' << fmt(gb) << ','
          << fmt(2.0 / gb) << '\n';
    }
  log << "gamma_bar(M, alpha) = sum d_m at mu = " << fmt(mu) << '\n';
}

void cmd_approx_error(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  const double mu = scalar_mu(cfg);
  const double zmin = cfg.zmin > 0.0 ? cfg.zmin : mu;
  if (!(cfg.zmax > zmin)) throw ParameterError("--zmax must exceed the smallest sample point");
  const auto z = log_samples(zmin, cfg.zmax, cfg.samples);
  write_header(cfg, csv);
  csv << "# mu_value=" << fmt(mu) << '\n';
  if (cfg.nu == 0.0) {
    const double beta = cfg.beta.front();
    csv << "M,z,approx,exact,abs_error,z_approx,z_exact,gamma_bar\n";
    for (std::size_t m : cfg.M) {
      const RationalApprox r = build_negative_power(beta, mu, m);
      const double gb = gamma_bar(r).value;
      for (double x : z) {
        const double a = eval_scalar(r, x);
        const double e = std::pow(x, -beta);
        csv << m << ',' << fmt(x) << ',' << fmt(a) << ',' << fmt(e) << ',' << fmt(std::abs(a - e))
            << ',' << fmt(x * a) << ',' << fmt(x * e) << ',' << fmt(gb) << '\n';
      }
    }
    log << "R_M(z) against z^-" << fmt(beta) << " on [" << fmt(zmin) << ", " << fmt(cfg.zmax)
        << "]\n";
  } else {
    const double alpha = cfg.alpha.front();
    csv << "M,z,approx,exact,abs_error,inv_nu\n";
    for (std::size_t m : cfg.M) {
      const RationalApprox r = build_resolvent(alpha, cfg.nu, mu, m);
      for (double x : z) {
        const double a = eval_scalar(r, x);
        const double e = 1.0 / (cfg.nu + std::pow(x, alpha));
        csv << m << ',' << fmt(x) << ',' << fmt(a) << ',' << fmt(e) << ',' << fmt(std::abs(a - e))
            << ',' << fmt(1.0 / cfg.nu) << '\n';
      }
    }
    log << "R_M(z; nu) against (nu + z^" << fmt(alpha) << ")^-1, nu = " << fmt(cfg.nu) << '\n';
  }
}

void cmd_converge(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  const double g = cfg.g.front();
  const double alpha = cfg.alpha.front();
  const int level = cfg.levels.front();
  const ExactSolutionSpec spec = make_exact_solution(g, alpha, cfg.final_time);

  auto mesh = std::make_shared<const Mesh>(quarter_disk_mesh(level));
  ProblemCoefficients coeff;
  coeff.g = g;
  const DiscreteOperator op = assemble(mesh, coeff);
  const ScalarField u0 = exact_field(spec, 0.0);
  const ScalarField uT = exact_field(spec, cfg.final_time);
  const Vector w0 = l2_project(u0, *mesh, op.mass());

  write_header(cfg, csv);
  csv << "# " << kExactNote << '\n';
  csv << "# nu1=" << fmt(spec.nu1) << " nu3=" << fmt(spec.nu3) << " vertices=" << op.size()
      << " delta_h=" << fmt(op.bounds().lower) << " delta_bar_h=" << fmt(op.bounds().upper) << '\n';
  csv << "scheme,level,sigma,M,N,tau,eps2,eps_inf,stable,certificate\n";
  log << kExactNote << '\n';

  const char* scheme = cfg.scheme == SchemeKind::Explicit ? "explicit" : "implicit";
  const double sigma = cfg.scheme == SchemeKind::Explicit ? 1.0 : cfg.sigma;
  for (std::size_t m : cfg.M) {
    for (std::size_t n : cfg.N) {
      csv << scheme << ',' << level << ',' << fmt(sigma) << ',' << m << ',' << n << ',';
      if (n == 0) {
        const ErrorNorms e = error_norms(w0, u0, *mesh, op.mass());
        csv << "0," << fmt(e.eps2) << ',' << fmt(e.eps_inf) << ",1," << quote("projection of u0")
            << '\n';
        continue;
      }
      SchemeConfig sc = SchemeConfig::uniform(cfg.scheme, cfg.final_time, n, alpha, m, sigma);
      sc.mu = cfg.mu;
      const RunResult res = run_scheme(op, w0, {}, sc, &uT);
      csv << fmt(sc.tau) << ',' << fmt(res.error->eps2) << ',' << fmt(res.error->eps_inf) << ','
          << (res.certificate.holds ? 1 : 0) << ',' << quote(res.certificate.describe()) << '\n';
      for (const auto& w : res.warnings) log << "M=" << m << " N=" << n << ": " << w << '\n';
    }
  }
}

void cmd_mesh(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  const Mesh mesh = quarter_disk_mesh(cfg.levels.front());
  write_mesh(mesh, out);
  log << "level " << cfg.levels.front() << ": " << mesh.vertices.size() << " vertices, "
      << mesh.triangles.size() << " triangles, " << mesh.boundary_edges.size()
      << " boundary edges\n";
}

void run(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log) {
  switch (cfg.command) {
    case Command::Roots: cmd_roots(cfg, csv, log); break;
    case Command::Spectrum: cmd_spectrum(cfg, csv, log); break;
    case Command::Gamma: cmd_gamma(cfg, csv, log); break;
    case Command::ApproxError: cmd_approx_error(cfg, csv, log); break;
    case Command::Converge: cmd_converge(cfg, csv, log); break;
    case Command::Mesh: cmd_mesh(cfg, csv, log); break;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional-power parabolic solver experiments"};
  app.require_subcommand(1);

  struct Sub {
    Command command;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  const std::map<Command, const char*> descriptions = {
      {Command::Roots, "roots of the Robin eigenvalue equation"},
      {Command::Spectrum, "spectrum bounds of the FEM operator"},
      {Command::Gamma, "upper bounds gamma_bar(M, alpha)"},
      {Command::ApproxError, "sampled error of the rational approximations"},
      {Command::Converge, "error tables of the time-stepping schemes"},
      {Command::Mesh, "write a quarter-disk mesh"},
  };
  for (const auto& [command, description] : descriptions) {
    auto sub = std::make_unique<Sub>();
    sub->command = command;
    sub->app = app.add_subcommand(to_string(command), description);
    for (const auto& k : kKeys)
      if (keys_for(command).count(k.name))
        sub->app->add_option(std::string("--") + k.name, sub->values[k.name], k.help);
    sub->app->add_option("--config", sub->config, "key=value run file; flags override it");
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& sub : subs) {
      if (!sub->app->parsed()) continue;
      Settings settings;
      if (!sub->config.empty()) settings = read_settings(std::filesystem::path(sub->config));
      for (const auto& [key, value] : sub->values)
        if (sub->app->count("--" + key) > 0) settings[key] = value;
      const ExperimentConfig cfg = resolve(sub->command, settings);
      if (cfg.out.empty()) {
        run(cfg, out, err);
      } else {
        std::ostringstream buffer;
        run(cfg, buffer, err);
        std::ofstream file(cfg.out);
        if (!file) throw ParameterError("cannot open output file " + cfg.out);
        file << buffer.str();
        if (!file) throw ParameterError("failed writing " + cfg.out);
        err << "wrote " << cfg.out << '\n';
      }
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (residual " << fmt(e.residual()) << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace fracpow::cli
