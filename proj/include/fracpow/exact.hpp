#pragma once

#include <cstddef>
#include <vector>

#include "fracpow/fem.hpp"

namespace fracpow {

// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
double bessel_j0(double x);
double bessel_j1(double x);

// Positive roots of nu J0'(nu) + g J0(nu) = 0, i.e. -nu J1(nu) + g J0(nu) = 0.
// The radial eigenvalues of the unit disk with Robin coefficient g are nu_k^2.
struct RobinRoots {
  double g = 0.0;
  std::vector<double> roots;
};

RobinRoots robin_roots(double g, std::size_t count);

// u(r, t) = a1 exp(-nu1^{2 alpha} t) J0(nu1 r) + a3 exp(-nu3^{2 alpha} t) J0(nu3 r)
struct ExactSolutionSpec {
  double g = 10.0;
  double alpha = 0.5;
  double nu1 = 0.0;
  double nu3 = 0.0;
  double amp1 = 1.0;
  double amp3 = 1.5;
  double final_time = 0.25;
};

ExactSolutionSpec make_exact_solution(double g, double alpha, double final_time = 0.25);

double exact_solution(const ExactSolutionSpec& spec, double r, double t);

// The same solution as a field on the plane at fixed time.
ScalarField exact_field(const ExactSolutionSpec& spec, double t);

}  // namespace fracpow
