#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace fracpow {

// Weight (1 - x)^a (1 + x)^b on (-1, 1).
struct JacobiWeight {
  double a = 0.0;
  double b = 0.0;
};

// Weight (1 - x)^{-alpha} (1 + x)^{alpha - 1} g(x; nu, alpha, mu) with
//   1 / g = 1 + 2 nu cos(pi alpha) mu^{-alpha} q^alpha + nu^2 mu^{-2 alpha} q^{2 alpha},
//   q = (1 + x) / (1 - x).
// This is the resolvent weight; nu = 0 reduces it to JacobiWeight{-alpha, alpha - 1}.
struct ResolventWeight {
  double nu = 0.0;
  double alpha = 0.5;
  double mu = 1.0;
};

using WeightKind = std::variant<JacobiWeight, ResolventWeight>;

struct QuadratureRule {
  std::vector<double> nodes;    // ascending, inside (-1, 1)
  std::vector<double> weights;  // positive
  WeightKind weight;

  std::size_t size() const noexcept { return nodes.size(); }
};

// Evaluates the weight function. The point is given through its distances to
// the two endpoints, s = 1 + x and t = 1 - x, so that values next to +-1 keep
// full relative accuracy.
double weight_value(const WeightKind& w, double s, double t);

// Integral of the weight over (-1, 1). Closed form for Jacobi weights; for the
// resolvent weight it is the zeroth moment of the discretized measure.
double weight_mass(const JacobiWeight& w);

// Three-term recurrence x p_k = p_{k+1} + a_k p_k + b_k p_{k-1} of the monic
// orthogonal polynomials; b[0] holds the total mass of the weight.
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
};

Recurrence jacobi_recurrence(std::size_t n, double a_exp, double b_exp);

// Nodes and weights of the n-point Gauss rule defined by the first n recurrence
// coefficients (Golub-Welsch).
QuadratureRule gauss_from_recurrence(const Recurrence& rec, std::size_t n, WeightKind weight);

QuadratureRule gauss_jacobi(std::size_t m, double a_exp, double b_exp);

// Discretized Stieltjes construction for the resolvent weight. Throws
// ConstructionError when the recurrence coefficients fail to settle under
// refinement of the discretization.
QuadratureRule gauss_custom(std::size_t m, double nu, double alpha, double mu);

// Discrete measure used by gauss_custom (exposed for tests): nodes stored as
// (s, t) distances to the endpoints, positive weights.
struct DiscreteMeasure {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<double> w;
};

DiscreteMeasure discretize_resolvent_weight(const ResolventWeight& weight,
                                            std::size_t points_per_panel);

Recurrence stieltjes(const DiscreteMeasure& measure, std::size_t n);

// Symmetric tridiagonal eigenproblem with diagonal d and off-diagonal e
// (e[i] couples i and i + 1). Returns eigenvalues ascending and, for each,
// the first component of its unit eigenvector.
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> first_components;
};

TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag);

}  // namespace fracpow
