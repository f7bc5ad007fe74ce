#include "fracpow/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracpow/error.hpp"

namespace fracpow {

namespace {

// Below this argument the power series is summed in extended precision; the
// cancellation it suffers stays around 1e-12 up to here, and the Hankel
// expansion beyond it has its smallest term near exp(-2x).
constexpr double kSeriesLimit = 20.0;

double series(int order, double x) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double term = order == 0 ? 1.0L : 0.5L * static_cast<long double>(x);
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-24L * std::abs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

double hankel(int order, double x) {
  const double mu4 = 4.0 * order * order;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu4 - odd * odd) / (k * 8.0 * x);
      if (std::abs(term) > std::abs(last)) break;  // asymptotic series started diverging
      last = term;
    }
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  return x <= kSeriesLimit ? series(0, x) : hankel(0, x);
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double v = ax <= kSeriesLimit ? series(1, ax) : hankel(1, ax);
  return x < 0.0 ? -v : v;
}

RobinRoots robin_roots(double g, std::size_t count) {
  if (!(g > 0.0) || !std::isfinite(g)) throw ParameterError("Robin coefficient g must be > 0");
  if (count == 0) throw ParameterError("root count must be at least 1");

  auto f = [g](double nu) { return -nu * bessel_j1(nu) + g * bessel_j0(nu); };
  const double step = std::numbers::pi / 8.0;
  const std::size_t max_intervals = 8 * (count + 4) + 64;

  RobinRoots out;
  out.g = g;
  double lo = 0.0;
  double flo = f(lo);
  for (std::size_t j = 1; out.roots.size() < count; ++j) {
    if (j > max_intervals)
      throw RootSearchError("found only " + std::to_string(out.roots.size()) + " of " +
                                std::to_string(count) + " roots",
                            std::abs(flo));
    const double hi = static_cast<double>(j) * step;
    const double fhi = f(hi);
    if (fhi == 0.0) {
      out.roots.push_back(hi);
    } else if ((flo < 0.0) != (fhi < 0.0) && flo != 0.0) {
      double a = lo;
      double b = hi;
      double fa = flo;
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  return out;
}

ExactSolutionSpec make_exact_solution(double g, double alpha, double final_time) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
  const auto roots = robin_roots(g, 3);
  ExactSolutionSpec spec;
  spec.g = g;
  spec.alpha = alpha;
  spec.nu1 = roots.roots[0];
  spec.nu3 = roots.roots[2];
  spec.final_time = final_time;
  return spec;
}

double exact_solution(const ExactSolutionSpec& spec, double r, double t) {
  const double decay1 = std::exp(-std::pow(spec.nu1, 2.0 * spec.alpha) * t);
  const double decay3 = std::exp(-std::pow(spec.nu3, 2.0 * spec.alpha) * t);
  return spec.amp1 * decay1 * bessel_j0(spec.nu1 * r) + spec.amp3 * decay3 * bessel_j0(spec.nu3 * r);
}

ScalarField exact_field(const ExactSolutionSpec& spec, double t) {
  return [spec, t](const Point& p) { return exact_solution(spec, std::hypot(p.x, p.y), t); };
}

}  // namespace fracpow
