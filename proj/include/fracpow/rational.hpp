#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracpow/fem.hpp"
#include "fracpow/linalg.hpp"

namespace fracpow {

enum class RationalKind {
  NegativePower,  // R_M(z) ~ z^{-beta}
  Resolvent,      // R_M(z; nu) ~ (nu + z^alpha)^{-1}
};

// R(z) = sum_m coeffs[m] / (shifts[m] + z), obtained from a Gauss rule for the
// integral representation after the substitution theta = mu (1 - x) / (1 + x).
struct RationalApprox {
  std::vector<double> shifts;
  std::vector<double> coeffs;
  double mu = 1.0;
  double exponent = 0.5;  // beta for NegativePower, alpha for Resolvent
  double nu = 0.0;
  RationalKind kind = RationalKind::NegativePower;

  std::size_t size() const noexcept { return shifts.size(); }
};

struct GammaBound {
  double value = 0.0;
};

RationalApprox build_negative_power(double beta, double mu, std::size_t m);
RationalApprox build_resolvent(double alpha, double nu, double mu, std::size_t m);

double eval_scalar(const RationalApprox& r, double z);

// Sum of the coefficients: sup of z R(z) over z > 0. Only meaningful for the
// negative-power form.
GammaBound gamma_bar(const RationalApprox& r);

// R bound to a discrete operator, with the shifted matrices c_m mass + stiff
// prepared once. Each action performs one CG solve per term; the solves may
// run in parallel, the final sum is always taken in term order.
class RationalOperator {
 public:
  RationalOperator(RationalApprox r, const DiscreteOperator& op, double cg_tol = 1e-10);

  const RationalApprox& approx() const noexcept { return r_; }

  // R(A) v
  Vector apply(std::span<const double> v) const;
  // A R(A) v, through A (c I + A)^{-1} = I - c (c I + A)^{-1}.
  Vector apply_times_operator(std::span<const double> v) const;

 private:
  std::vector<Vector> shifted_solves(std::span<const double> v) const;

  RationalApprox r_;
  const DiscreteOperator* op_;
  std::vector<SparseSymMatrix> shifted_;
  double cg_tol_;
};

Vector apply(const RationalApprox& r, const DiscreteOperator& op, std::span<const double> v);

}  // namespace fracpow
