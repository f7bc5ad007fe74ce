#pragma once

// Independent oracles shared by the unit tests and the acceptance suite.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fracpow/fem.hpp"
#include "fracpow/geometry.hpp"
#include "fracpow/linalg.hpp"

namespace testing {

inline constexpr double kLambda1 = 4.75020542941;  // g = 10

// Resolvent weight written out from its definition, with s = 1 + x, t = 1 - x.
inline double resolvent_weight(double s, double t, double nu, double alpha, double mu) {
  const double base = std::pow(t, -alpha) * std::pow(s, alpha - 1.0);
  if (nu == 0.0) return base;
  const double qa = std::pow(s / t, alpha) * std::pow(mu, -alpha);
  const double inv = 1.0 + 2.0 * nu * std::cos(std::numbers::pi * alpha) * qa + nu * nu * qa * qa;
  return base / inv;
}

// Integrals of x^k w(s, t) over (-1, 1) for k = 0..kmax by tanh-sinh, which
// hands the integrand the distance to the nearer endpoint.
template <class Weight>
std::vector<double> moments(Weight w, std::size_t kmax) {
  boost::math::quadrature::tanh_sinh<double> ts(15);
  std::vector<double> out;
  for (std::size_t k = 0; k <= kmax; ++k) {
    auto f = [&](double x, double xc) {
      const double s = x < 0.0 ? -xc : 1.0 + x;
      const double t = x < 0.0 ? 1.0 - x : xc;
      if (!(s > 0.0) || !(t > 0.0)) return 0.0;
      return std::pow(x, static_cast<double>(k)) * w(s, t);
    };
    out.push_back(ts.integrate(f, -1.0, 1.0, 1e-14));
  }
  return out;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Dense Cholesky solve, row-major a (n x n).
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw std::runtime_error("dense_solve: matrix not SPD");
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= a[i * n + k] * b[k];
    b[i] /= a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= a[k * n + i] * b[k];
    b[i] /= a[i * n + i];
  }
  return b;
}

inline fracpow::DiscreteOperator quarter_disk_operator(int level, double g) {
  fracpow::ProblemCoefficients coeff;
  coeff.g = g;
  return fracpow::assemble(std::make_shared<const fracpow::Mesh>(fracpow::quarter_disk_mesh(level)),
                           coeff);
}

// Order p of err ~ C N^{-p}: least-squares slope of log(err) against log(N), negated.
inline double observed_order(const std::vector<double>& steps, const std::vector<double>& errors) {
  const std::size_t n = steps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
