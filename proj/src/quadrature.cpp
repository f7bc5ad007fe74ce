#include "fracpow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "fracpow/error.hpp"

namespace fracpow {

// --- Tridiagonal eigenproblem (implicit-shift QL) ---------------------------

TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) throw ParameterError("tridiagonal_eigen: empty matrix");
  if (offdiag.size() + 1 < n) throw ParameterError("tridiagonal_eigen: off-diagonal too short");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy_n(offdiag.begin(), n - 1, e.begin());
  // Only the first row of the accumulated rotation matrix is needed.
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 60;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_sweeps)
          throw ConstructionError("tridiagonal QL iteration did not converge", std::abs(e[l]));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          const double zf = z[i + 1];
          z[i + 1] = s * z[i] + c * zf;
          z[i] = c * z[i] - s * zf;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.values.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t k : order) {
    out.values.push_back(d[k]);
    out.first_components.push_back(z[k]);
  }
  return out;
}

// --- Weights -----------------------------------------------------------------

namespace {

double resolvent_g(const ResolventWeight& w, double s, double t) {
  if (w.nu == 0.0) return 1.0;
  // nu mu^{-alpha} q^alpha with q = s / t
  const double y = w.nu * std::exp(w.alpha * (std::log(s) - std::log(t) - std::log(w.mu)));
  const double c = std::cos(std::numbers::pi * w.alpha);
  return 1.0 / (1.0 + 2.0 * c * y + y * y);
}

}  // namespace

double weight_value(const WeightKind& w, double s, double t) {
  if (const auto* jw = std::get_if<JacobiWeight>(&w)) return std::pow(t, jw->a) * std::pow(s, jw->b);
  const auto& rw = std::get<ResolventWeight>(w);
  return std::pow(t, -rw.alpha) * std::pow(s, rw.alpha - 1.0) * resolvent_g(rw, s, t);
}

double weight_mass(const JacobiWeight& w) {
  const double a = w.a;
  const double b = w.b;
  return std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                  std::lgamma(a + b + 2.0));
}

// --- Gauss-Jacobi --------------------------------------------------------------

Recurrence jacobi_recurrence(std::size_t n, double a_exp, double b_exp) {
  if (!(a_exp > -1.0) || !(b_exp > -1.0))
    throw ParameterError("Jacobi exponents must exceed -1");
  const double a = a_exp;
  const double b = b_exp;
  const double ab = a + b;

  Recurrence rec;
  rec.a.resize(n);
  rec.b.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    if (k == 0) {
      rec.a[0] = (b - a) / (ab + 2.0);
      rec.b[0] = weight_mass({a, b});
    } else {
      rec.a[k] = (b * b - a * a) / (s * (s + 2.0));
      if (k == 1)
        rec.b[1] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
      else
        rec.b[k] = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  return rec;
}

QuadratureRule gauss_from_recurrence(const Recurrence& rec, std::size_t n, WeightKind weight) {
  if (n == 0) throw ParameterError("quadrature order must be at least 1");
  if (rec.a.size() < n || rec.b.size() < n)
    throw ParameterError("gauss_from_recurrence: not enough recurrence coefficients");

  std::vector<double> off(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(rec.b[k]);
  const auto eig = tridiagonal_eigen(std::span(rec.a.data(), n), off);

  QuadratureRule rule;
  rule.nodes = eig.values;
  rule.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    rule.weights[k] = rec.b[0] * eig.first_components[k] * eig.first_components[k];
  rule.weight = weight;
  return rule;
}

QuadratureRule gauss_jacobi(std::size_t m, double a_exp, double b_exp) {
  if (m == 0) throw ParameterError("quadrature order must be at least 1");
  return gauss_from_recurrence(jacobi_recurrence(m, a_exp, b_exp), m, JacobiWeight{a_exp, b_exp});
}

// --- Resolvent weight: discretized Stieltjes -----------------------------------

namespace {

// Each half of (-1, 1) is split into dyadic panels [2^{-j-1}, 2^{-j}] in the
// distance to the nearer endpoint, down to this depth; the innermost piece
// [0, 2^{-depth}] gets a Gauss-Jacobi rule that absorbs the endpoint power.
constexpr int kPanelDepth = 340;

}  // namespace

DiscreteMeasure discretize_resolvent_weight(const ResolventWeight& weight,
                                            std::size_t points_per_panel) {
  const std::size_t n = points_per_panel;
  const double alpha = weight.alpha;
  const QuadratureRule legendre = gauss_jacobi(n, 0.0, 0.0);
  // Singular end pieces: (1+y)^{alpha-1} at the left end, (1+y)^{-alpha} at the right.
  const QuadratureRule left_end = gauss_jacobi(n, 0.0, alpha - 1.0);
  const QuadratureRule right_end = gauss_jacobi(n, 0.0, -alpha);

  DiscreteMeasure dm;
  const std::size_t total = 2 * (static_cast<std::size_t>(kPanelDepth) + 1) * n;
  dm.s.reserve(total);
  dm.t.reserve(total);
  dm.w.reserve(total);

  auto push = [&](double s, double t, double w) {
    dm.s.push_back(s);
    dm.t.push_back(t);
    dm.w.push_back(w);
  };

  // Left half, distance s = 1 + x in (0, 1].
  const double eps = std::ldexp(1.0, -kPanelDepth);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 0.5 * eps * (1.0 + left_end.nodes[k]);
    const double t = 2.0 - s;
    const double smooth = std::pow(t, -alpha) * resolvent_g(weight, s, t);
    push(s, t, std::pow(0.5 * eps, alpha) * left_end.weights[k] * smooth);
  }
  for (int j = kPanelDepth - 1; j >= 0; --j) {
    const double lo = std::ldexp(1.0, -j - 1);
    const double half = 0.5 * lo;  // panel [lo, 2 lo] has half-width lo / 2
    for (std::size_t k = 0; k < n; ++k) {
      const double s = lo + half * (1.0 + legendre.nodes[k]);
      const double t = 2.0 - s;
      push(s, t, half * legendre.weights[k] * weight_value(weight, s, t));
    }
  }
  // Right half, distance t = 1 - x in (0, 1], visited so that x ascends.
  for (int j = 0; j < kPanelDepth; ++j) {
    const double lo = std::ldexp(1.0, -j - 1);
    const double half = 0.5 * lo;
    for (std::size_t k = n; k-- > 0;) {
      const double t = lo + half * (1.0 + legendre.nodes[k]);
      const double s = 2.0 - t;
      push(s, t, half * legendre.weights[k] * weight_value(weight, s, t));
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    const double t = 0.5 * eps * (1.0 + right_end.nodes[k]);
    const double s = 2.0 - t;
    const double smooth = std::pow(s, alpha - 1.0) * resolvent_g(weight, s, t);
    push(s, t, std::pow(0.5 * eps, 1.0 - alpha) * right_end.weights[k] * smooth);
  }
  return dm;
}

Recurrence stieltjes(const DiscreteMeasure& measure, std::size_t n) {
  const std::size_t npts = measure.w.size();
  std::vector<double> x(npts);
  for (std::size_t i = 0; i < npts; ++i)
    x[i] = measure.s[i] <= 1.0 ? measure.s[i] - 1.0 : 1.0 - measure.t[i];

  Recurrence rec;
  rec.a.resize(n);
  rec.b.resize(n);
  std::vector<double> p_prev(npts, 0.0);
  std::vector<double> p(npts, 1.0);
  double norm_prev = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    double xm = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      const double wp2 = measure.w[i] * p[i] * p[i];
      nrm += wp2;
      xm += wp2 * x[i];
    }
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw ConstructionError("Stieltjes procedure lost positivity at degree " + std::to_string(k),
                              nrm);
    rec.a[k] = xm / nrm;
    rec.b[k] = k == 0 ? nrm : nrm / norm_prev;
    norm_prev = nrm;
    if (k + 1 == n) break;
    for (std::size_t i = 0; i < npts; ++i) {
      const double next = (x[i] - rec.a[k]) * p[i] - (k == 0 ? 0.0 : rec.b[k]) * p_prev[i];
      p_prev[i] = p[i];
      p[i] = next;
    }
  }
  return rec;
}

QuadratureRule gauss_custom(std::size_t m, double nu, double alpha, double mu) {
  if (m == 0) throw ParameterError("quadrature order must be at least 1");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ParameterError("nu must be finite and >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be finite and > 0");

  const ResolventWeight weight{nu, alpha, mu};
  constexpr double kSettle = 1e-12;

  Recurrence prev = stieltjes(discretize_resolvent_weight(weight, 8), m);
  double change = std::numeric_limits<double>::infinity();
  for (std::size_t pts = 16; pts <= 64; pts *= 2) {
    Recurrence next = stieltjes(discretize_resolvent_weight(weight, pts), m);
    change = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      change = std::max(change, std::abs(next.a[k] - prev.a[k]));
      change = std::max(change, std::abs(next.b[k] - prev.b[k]) / std::abs(next.b[k]));
    }
    prev = std::move(next);
    if (change < kSettle) return gauss_from_recurrence(prev, m, weight);
  }
  throw ConstructionError("recurrence coefficients for the resolvent weight did not settle",
                          change);
}

}  // namespace fracpow
