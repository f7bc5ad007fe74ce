// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fracpow/cli.hpp"
#include "fracpow/exact.hpp"
#include "fracpow/fem.hpp"
#include "fracpow/quadrature.hpp"
#include "fracpow/rational.hpp"
#include "fracpow/stepper.hpp"
#include "support.hpp"

using namespace fracpow;

namespace {

using Table = std::vector<std::map<std::string, std::string>>;

// Runs a CLI command with the given settings and returns its CSV rows keyed by column.
Table run_command(cli::Command command, const cli::Settings& settings) {
  const auto cfg = cli::resolve(command, settings);
  std::ostringstream csv, log;
  cli::run(cfg, csv, log);
  Table table;
  std::vector<std::string> header;
  std::istringstream in(csv.str());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else cell += c;
    }
    cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    table.push_back(row);
  }
  return table;
}

double num(const std::map<std::string, std::string>& row, const std::string& key) {
  return std::stod(row.at(key));
}

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0.0) c.expect(secs < limit_s, "runtime " + sci(secs) + " s >= " + sci(limit_s) + " s");
  for (const auto& n : c.notes) std::cout << "    " << n << "\n";
  std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << sci(secs)
            << " s)" << std::endl;
  failures += !c.ok;
}

double mass_distance(const DiscreteOperator& op, const Vector& a, const Vector& b) {
  Vector d(a);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
  return op.mass_norm(d);
}

}  // namespace

int main() {
  criterion(1, "Robin roots table", 1.0, [](Check& c) {
    const std::map<std::pair<double, int>, double> ref = {
        {{1.0, 1}, 1.25578371},  {{10.0, 1}, 2.17949660}, {{100.0, 1}, 2.38090166},
        {{1.0, 3}, 7.15579917},  {{10.0, 3}, 7.95688342}, {{100.0, 3}, 8.56783165}};
    const auto t = run_command(cli::Command::Roots, {});
    c.expect(t.size() == 6, "six rows");
    double worst = 0.0;
    for (const auto& row : t) {
      const double expect = ref.at({num(row, "g"), static_cast<int>(num(row, "k"))});
      worst = std::max(worst, std::abs(num(row, "nu") - expect));
    }
    c.note("max abs deviation " + sci(worst));
    c.expect(worst < 1e-6, "roots within 1e-6");
  });

  criterion(2, "gamma bar table", 5.0, [](Check& c) {
    const std::map<std::pair<int, double>, double> ref = {
        {{5, 0.25}, 4.4602175},  {{5, 0.5}, 21.794966},  {{5, 0.75}, 142.00220},
        {{10, 0.25}, 6.3106349}, {{10, 0.5}, 43.589932}, {{10, 0.75}, 401.45610},
        {{20, 0.25}, 8.9256294}, {{20, 0.5}, 87.179864}, {{20, 0.75}, 1135.3565},
        {{40, 0.25}, 12.623116}, {{40, 0.5}, 174.35973}, {{40, 0.75}, 3211.1792}};
    const auto t = run_command(cli::Command::Gamma, {{"mu", "4.75020542941"}});
    c.expect(t.size() == 12, "twelve rows");
    double worst = 0.0, closed = 0.0;
    for (const auto& row : t) {
      const int m = static_cast<int>(num(row, "M"));
      const double a = num(row, "alpha");
      const double gb = num(row, "gamma_bar");
      const double expect = ref.at({m, a});
      worst = std::max(worst, std::abs(gb - expect) / expect);
      if (a == 0.5) {
        const double cf = 2.0 * m * std::sqrt(4.75020542941);
        closed = std::max(closed, std::abs(gb - cf) / cf);
      }
    }
    c.note("max rel deviation " + sci(worst) + ", closed form " + sci(closed));
    c.expect(worst < 1e-4, "table entries within 1e-4 relative");
    c.expect(closed < 1e-6, "closed form within 1e-6 relative");
  });

  criterion(3, "expansion point identities", 0.0, [](Check& c) {
    const double mu = 4.75020542941;
    struct Case {
      double beta;
      double value;
    };
    double worst = 0.0;
    for (const Case k : {Case{0.5, 0.458821546223}, Case{0.25, 0.677363673534}, Case{0.75, 0.310789048046}})
      for (std::size_t m : {1, 5, 10, 20, 40})
        worst = std::max(worst, std::abs(eval_scalar(build_negative_power(k.beta, mu, m), mu) - k.value));
    c.note("max abs deviation " + sci(worst));
    c.expect(worst < 1e-9, "identities within 1e-9");
  });

  criterion(4, "spectrum bounds", 60.0, [](Check& c) {
    const std::map<double, double> lambda1 = {
        {1.0, 1.57699272630}, {10.0, 4.75020542941}, {100.0, 5.66869271459}};
    const auto t = run_command(cli::Command::Spectrum, {});
    std::map<double, std::map<int, std::pair<double, double>>> b;
    for (const auto& row : t)
      b[num(row, "g")][static_cast<int>(num(row, "level"))] = {num(row, "delta_h"), num(row, "delta_bar_h")};
    for (const auto& [g, lam] : lambda1) {
      const auto& lv = b.at(g);
      const double gap2 = (lv.at(2).first - lam) / lam;
      const double gap3 = (lv.at(3).first - lam) / lam;
      const double grow12 = lv.at(2).second / lv.at(1).second;
      const double grow23 = lv.at(3).second / lv.at(2).second;
      c.note("g=" + sci(g) + ": gap level2 " + sci(gap2) + ", level3 " + sci(gap3) + "; upper growth 1->2 " +
             sci(grow12) + ", 2->3 " + sci(grow23));
      c.expect(std::abs(gap2) < 0.01 && std::abs(gap3) < 0.01, "delta_h within 1% for g=" + sci(g));
      c.expect(std::abs(gap3) < std::abs(gap2), "delta_h converges for g=" + sci(g));
      c.expect(grow23 >= 3.0 && grow23 <= 5.0, "upper bound growth in [3, 5] for g=" + sci(g));
    }
  });

  criterion(5, "convergence tables", 600.0, [](Check& c) {
    std::map<std::pair<int, int>, double> ex;  // (M, N) -> eps2, level 2
    for (const auto& row :
         run_command(cli::Command::Converge, {{"M", "10,20,40"}, {"N", "25,50,100,200"}}))
      ex[{static_cast<int>(num(row, "M")), static_cast<int>(num(row, "N"))}] = num(row, "eps2");

    const double a = ex.at({20, 100});
    c.note("(a) explicit M=20 N=100 eps2 " + sci(a) + " vs 0.00164787");
    c.expect(a > 0.00164787 / 2.0 && a < 0.00164787 * 2.0, "(a) within factor 2");

    bool mono = true;
    for (int m : {10, 20, 40})
      for (int n : {50, 100, 200}) mono = mono && ex.at({m, n}) < ex.at({m, n / 2});
    c.expect(mono, "(b) eps2 decreases in N for M >= 10");

    double sat = 0.0;
    for (int n : {25, 50, 100, 200})
      sat = std::max(sat, std::abs(ex.at({40, n}) - ex.at({20, n})) / ex.at({20, n}));
    c.note("(c) max relative M=20/M=40 difference " + sci(sat));
    c.expect(sat < 0.01, "(c) M=20 and M=40 agree to 1%");

    std::map<int, double> lv;
    for (int level : {1, 3})
      lv[level] = num(run_command(cli::Command::Converge,
                                  {{"level", std::to_string(level)}, {"M", "20"}, {"N", "200"}})
                          .at(0),
                      "eps2");
    lv[2] = ex.at({20, 200});
    c.note("(d) level 1/2/3 eps2 " + sci(lv.at(1)) + " " + sci(lv.at(2)) + " " + sci(lv.at(3)));
    c.expect(lv.at(1) > lv.at(2) && lv.at(2) > lv.at(3), "(d) level ordering");

    const auto im = run_command(cli::Command::Converge,
                                {{"scheme", "implicit"}, {"sigma", "1"}, {"M", "10"}, {"N", "200"}});
    const double e = num(im.at(0), "eps2");
    c.note("(e) implicit M=10 N=200 eps2 " + sci(e) + " vs 0.00018398");
    c.expect(e > 0.00018398 / 3.0 && e < 0.00018398 * 3.0, "(e) within factor 3");
  });

  criterion(6, "stability of homogeneous runs", 0.0, [](Check& c) {
    std::mt19937_64 rng(2024);
    const DiscreteOperator ops[2] = {testing::quarter_disk_operator(1, 10.0),
                                     testing::quarter_disk_operator(2, 10.0)};
    const double alphas[3] = {0.25, 0.5, 0.75};
    const double sigmas[3] = {0.5, 0.75, 1.0};
    const std::size_t orders[5] = {1, 5, 10, 20, 40};
    std::uniform_int_distribution<int> pick(0, 1 << 20);
    std::uniform_real_distribution<double> frac(0.05, 1.0);
    double worst = 0.0;
    int runs = 0;
    for (SchemeKind kind : {SchemeKind::Explicit, SchemeKind::ImplicitWeighted})
      for (int r = 0; r < 20; ++r) {
        const auto& op = ops[pick(rng) % 2];
        SchemeConfig cfg;
        cfg.kind = kind;
        cfg.alpha = alphas[pick(rng) % 3];
        cfg.quad_order = orders[pick(rng) % 5];
        cfg.steps = 10 + pick(rng) % 41;
        if (kind == SchemeKind::Explicit) {
          const double mu = default_expansion_point(op);
          const double tau0 = 2.0 / gamma_bar(build_negative_power(1.0 - cfg.alpha, mu, cfg.quad_order)).value;
          cfg.tau = tau0 * frac(rng);
        } else {
          cfg.sigma = sigmas[pick(rng) % 3];
          cfg.tau = 0.25 / cfg.steps * 4.0 * frac(rng);
        }
        const Vector w0 = testing::random_vector(op.size(), rng);
        const auto res = run_scheme(op, w0, {}, cfg);
        c.expect(res.certificate.holds, "certificate holds (" + res.certificate.describe() + ")");
        for (std::size_t n = 1; n < res.norms.size(); ++n)
          worst = std::max(worst, (res.norms[n] - res.norms[n - 1]) / res.norms[0]);
        ++runs;
      }
    c.note(std::to_string(runs) + " runs, max relative norm increase " + sci(worst));
    c.expect(worst <= 1e-12, "norm sequence non-increasing");
  });

  criterion(7, "temporal order against the spectral reference", 0.0, [](Check& c) {
    const auto op = testing::quarter_disk_operator(1, 10.0);
    const auto spec = make_exact_solution(10.0, 0.5);
    const Vector w0 = l2_project(exact_field(spec, 0.0), *op.mesh(), op.mass());
    const std::vector<double> times{0.25};
    const Vector ref = spectral_reference(op, w0, std::nullopt, 0.5, times)[0];
    struct Case {
      std::string name;
      SchemeKind kind;
      double sigma;
      double min_order;
    };
    for (const Case& k : {Case{"explicit", SchemeKind::Explicit, 1.0, 0.8},
                          Case{"implicit sigma=1", SchemeKind::ImplicitWeighted, 1.0, 0.8},
                          Case{"implicit sigma=0.5", SchemeKind::ImplicitWeighted, 0.5, 1.7}}) {
      std::vector<double> steps, errors;
      for (std::size_t n : {25, 50, 100, 200}) {
        const auto r = run_scheme(op, w0, {}, SchemeConfig::uniform(k.kind, 0.25, n, 0.5, 40, k.sigma));
        steps.push_back(static_cast<double>(n));
        errors.push_back(mass_distance(op, r.final_state, ref));
      }
      const double p = testing::observed_order(steps, errors);
      c.note(k.name + ": errors " + sci(errors[0]) + " .. " + sci(errors[3]) + ", order " + sci(p));
      c.expect(p >= k.min_order, k.name + " order >= " + sci(k.min_order));
    }
  });

  criterion(8, "quadrature exactness", 0.0, [](Check& c) {
    const double mu = testing::kLambda1;
    const std::vector<std::size_t> orders{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 40};
    double worst = 0.0;
    int rules = 0;
    auto check_rule = [&](const QuadratureRule& rule, const std::vector<double>& ref) {
      double err = 0.0;
      for (std::size_t k = 0; k < 2 * rule.size(); ++k) {
        double s = 0.0;
        for (std::size_t m = 0; m < rule.size(); ++m)
          s += rule.weights[m] * std::pow(rule.nodes[m], static_cast<double>(k));
        err = std::max(err, std::abs(s - ref[k]) / std::abs(ref[0]));
      }
      worst = std::max(worst, err);
      ++rules;
      return err;
    };
    for (double e : {0.25, 0.5, 0.75})
      for (double nu : {0.0, 200.0, 400.0, 800.0}) {
        const auto ref = testing::moments(
            [&](double s, double t) { return testing::resolvent_weight(s, t, nu, e, mu); }, 79);
        for (std::size_t m : orders) {
          const double err = check_rule(gauss_custom(m, nu, e, mu), ref);
          if (err >= 1e-9) c.note("e=" + sci(e) + " nu=" + sci(nu) + " M=" + std::to_string(m) + ": " + sci(err));
          if (nu == 0.0) check_rule(gauss_jacobi(m, -e, e - 1.0), ref);
        }
      }
    c.note(std::to_string(rules) + " rules, max relative moment error " + sci(worst));
    c.expect(worst < 1e-9, "all rules exact to 1e-9");
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
