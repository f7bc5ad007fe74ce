#include "fracpow/rational.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracpow/error.hpp"
#include "fracpow/parallel.hpp"
#include "fracpow/quadrature.hpp"

namespace fracpow {

namespace {

RationalApprox from_rule(const QuadratureRule& rule, double exponent, double mu) {
  // d_m = 2 mu^{1-e} sin(pi e) / pi * w_m / (1 + x_m),  c_m = mu (1 - x_m) / (1 + x_m)
  const double scale =
      2.0 * std::pow(mu, 1.0 - exponent) * std::sin(std::numbers::pi * exponent) / std::numbers::pi;
  RationalApprox r;
  r.mu = mu;
  r.exponent = exponent;
  r.shifts.reserve(rule.size());
  r.coeffs.reserve(rule.size());
  for (std::size_t m = 0; m < rule.size(); ++m) {
    const double x = rule.nodes[m];
    r.shifts.push_back(mu * (1.0 - x) / (1.0 + x));
    r.coeffs.push_back(scale * rule.weights[m] / (1.0 + x));
  }
  return r;
}

void check_common(double exponent, double mu, std::size_t m) {
  if (!(exponent > 0.0 && exponent < 1.0)) throw ParameterError("exponent must lie in (0, 1)");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be finite and > 0");
  if (m == 0) throw ParameterError("quadrature order must be at least 1");
}

}  // namespace

RationalApprox build_negative_power(double beta, double mu, std::size_t m) {
  check_common(beta, mu, m);
  RationalApprox r = from_rule(gauss_jacobi(m, -beta, beta - 1.0), beta, mu);
  r.kind = RationalKind::NegativePower;
  r.nu = 0.0;
  return r;
}

RationalApprox build_resolvent(double alpha, double nu, double mu, std::size_t m) {
  check_common(alpha, mu, m);
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ParameterError("nu must be finite and >= 0");
  RationalApprox r = from_rule(gauss_custom(m, nu, alpha, mu), alpha, mu);
  r.kind = RationalKind::Resolvent;
  r.nu = nu;
  return r;
}

double eval_scalar(const RationalApprox& r, double z) {
  double sum = 0.0;
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double den = r.shifts[m] + z;
    if (!(den > 0.0)) throw ParameterError("eval_scalar: non-positive denominator c_m + z");
    sum += r.coeffs[m] / den;
  }
  return sum;
}

GammaBound gamma_bar(const RationalApprox& r) {
  if (r.kind != RationalKind::NegativePower)
    throw ParameterError("gamma_bar is defined for the negative-power approximation");
  double sum = 0.0;
  for (double d : r.coeffs) sum += d;
  return {sum};
}

RationalOperator::RationalOperator(RationalApprox r, const DiscreteOperator& op, double cg_tol)
    : r_(std::move(r)), op_(&op), cg_tol_(cg_tol) {
  shifted_.reserve(r_.size());
  for (double c : r_.shifts) shifted_.push_back(op.mass().combine(c, op.stiff(), 1.0));
}

std::vector<Vector> RationalOperator::shifted_solves(std::span<const double> v) const {
  if (v.size() != op_->size()) throw ParameterError("rational apply: dimension mismatch");
  const Vector rhs = op_->mass() * v;
  std::vector<Vector> x(r_.size());
  parallel_for(r_.size(), [&](std::size_t m) {
    CgOptions opts;
    opts.tol = cg_tol_;
    x[m] = cg_solve(shifted_[m], rhs, opts);
  });
  return x;
}

Vector RationalOperator::apply(std::span<const double> v) const {
  const auto x = shifted_solves(v);
  Vector out(v.size(), 0.0);
  for (std::size_t m = 0; m < x.size(); ++m) axpy(r_.coeffs[m], x[m], out);
  return out;
}

Vector RationalOperator::apply_times_operator(std::span<const double> v) const {
  const auto x = shifted_solves(v);
  Vector out(v.size(), 0.0);
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double d = r_.coeffs[m];
    const double c = r_.shifts[m];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d * (v[i] - c * x[m][i]);
  }
  return out;
}

Vector apply(const RationalApprox& r, const DiscreteOperator& op, std::span<const double> v) {
  return RationalOperator(r, op).apply(v);
}

}  // namespace fracpow
