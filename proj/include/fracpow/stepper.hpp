#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracpow/fem.hpp"
#include "fracpow/linalg.hpp"
#include "fracpow/rational.hpp"

namespace fracpow {

enum class SchemeKind { Explicit, ImplicitWeighted };

struct SchemeConfig {
  double tau = 0.01;
  std::size_t steps = 25;
  double sigma = 1.0;          // ignored by the explicit scheme
  std::size_t quad_order = 20; // M
  double alpha = 0.5;
  std::optional<double> mu;    // expansion point; defaults to the lower spectrum bound
  SchemeKind kind = SchemeKind::Explicit;

  // nu = 1 / (sigma tau), the shift of the implicit transition operator.
  double nu() const { return 1.0 / (sigma * tau); }

  static SchemeConfig uniform(SchemeKind kind, double final_time, std::size_t steps, double alpha,
                              std::size_t quad_order, double sigma = 1.0);
};

// Source term already projected onto the FEM space, psi(t). An empty function
// means psi = 0.
using Source = std::function<Vector(double)>;

struct StabilityCertificate {
  SchemeKind kind = SchemeKind::Explicit;
  // Explicit scheme: gamma_bar = sum d_m and tau0 = 2 / gamma_bar.
  double gamma_bar = 0.0;
  double tau0 = 0.0;
  // Implicit scheme: R(z; nu) <= 1/nu sampled over [lower, upper].
  double sample_lower = 0.0;
  double sample_upper = 0.0;
  double max_excess = 0.0;  // max of R(z; nu) - 1/nu over the samples
  bool holds = true;

  std::string describe() const;
};

struct RunResult {
  Vector final_state;
  std::vector<double> norms;         // mass norms of w^0 .. w^N
  std::vector<double> source_norms;  // mass norms of the source values used at each step
  StabilityCertificate certificate;
  std::optional<ErrorNorms> error;
  std::vector<std::string> warnings;
};

// Lower spectrum bound shrunk by a relative 1e-8 so that it stays below the
// smallest discrete eigenvalue; the default expansion point.
double default_expansion_point(const DiscreteOperator& op);

// w^{n+1} = w^n - tau A R_M(A) w^n + tau psi(t^n).
RunResult run_explicit(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                       const SchemeConfig& cfg, const ScalarField* exact_final = nullptr);

// w^{n+sigma} = R_M(A; nu) (nu w^n + psi(t^n + sigma tau)),
// w^{n+1} = (w^{n+sigma} - (1 - sigma) w^n) / sigma.
RunResult run_implicit(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                       const SchemeConfig& cfg, const ScalarField* exact_final = nullptr);

RunResult run_scheme(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                     const SchemeConfig& cfg, const ScalarField* exact_final = nullptr);

// Samples R(z; nu) <= 1/nu (plus 1e-12) on log-spaced points of [lower, upper].
StabilityCertificate check_resolvent_condition(const RationalApprox& r, double lower, double upper,
                                               std::size_t samples = 1000);

// Exact semidiscrete solution via the dense eigendecomposition:
// w(t) = sum_k exp(-lambda_k^alpha t) (w0, phi_k) phi_k, plus the
// variation-of-constants term when a time-constant source is given.
std::vector<Vector> spectral_reference(const DiscreteOperator& op, std::span<const double> w0,
                                       const std::optional<Vector>& constant_source, double alpha,
                                       std::span<const double> times);

// Same, reusing a precomputed decomposition.
std::vector<Vector> spectral_reference(const DenseEigen& eig, const SparseSymMatrix& mass,
                                       std::span<const double> w0,
                                       const std::optional<Vector>& constant_source, double alpha,
                                       std::span<const double> times);

}  // namespace fracpow
