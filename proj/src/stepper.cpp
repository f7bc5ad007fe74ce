#include "fracpow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracpow/error.hpp"

namespace fracpow {

SchemeConfig SchemeConfig::uniform(SchemeKind kind, double final_time, std::size_t steps,
                                   double alpha, std::size_t quad_order, double sigma) {
  if (steps == 0) throw ParameterError("step count must be positive");
  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.steps = steps;
  cfg.tau = final_time / static_cast<double>(steps);
  cfg.alpha = alpha;
  cfg.quad_order = quad_order;
  cfg.sigma = sigma;
  return cfg;
}

std::string StabilityCertificate::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (kind == SchemeKind::Explicit)
    os << (holds ? "tau<=tau0" : "tau>tau0") << " tau0=" << tau0 << " gamma_bar=" << gamma_bar;
  else
    os << (holds ? "R<=1/nu" : "R>1/nu") << " on [" << sample_lower << "," << sample_upper
       << "] max_excess=" << max_excess;
  return os.str();
}

double default_expansion_point(const DiscreteOperator& op) {
  return op.bounds().lower * (1.0 - 1e-8);
}

namespace {

void validate(const DiscreteOperator& op, std::span<const double> w0, const SchemeConfig& cfg) {
  if (w0.size() != op.size()) throw ParameterError("initial state dimension mismatch");
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) throw ParameterError("tau must be positive");
  if (cfg.steps == 0) throw ParameterError("step count must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (cfg.quad_order == 0) throw ParameterError("quadrature order must be at least 1");
  if (cfg.mu && !(*cfg.mu > 0.0)) throw ParameterError("mu must be positive");
}

bool is_trivial(std::span<const double> w0, const Source& psi) {
  return !psi && std::all_of(w0.begin(), w0.end(), [](double v) { return v == 0.0; });
}

RunResult zero_run(std::size_t n, const SchemeConfig& cfg, const DiscreteOperator& op,
                   const ScalarField* exact_final) {
  RunResult res;
  res.final_state.assign(n, 0.0);
  res.norms.assign(cfg.steps + 1, 0.0);
  res.source_norms.assign(cfg.steps, 0.0);
  res.certificate.kind = cfg.kind;
  if (exact_final && op.mesh())
    res.error = error_norms(res.final_state, *exact_final, *op.mesh(), op.mass());
  return res;
}

void check_finite(std::span<const double> w, std::size_t step) {
  for (double v : w)
    if (!std::isfinite(v))
      throw DivergenceError("state became non-finite at step " + std::to_string(step), step);
}

}  // namespace

StabilityCertificate check_resolvent_condition(const RationalApprox& r, double lower, double upper,
                                               std::size_t samples) {
  StabilityCertificate cert;
  cert.kind = SchemeKind::ImplicitWeighted;
  cert.sample_lower = lower;
  cert.sample_upper = upper;
  const double inv_nu = 1.0 / r.nu;
  cert.max_excess = -inv_nu;
  const std::size_t count = std::max<std::size_t>(samples, 2);
  const double log_lo = std::log(lower);
  const double log_hi = std::log(std::max(upper, lower));
  for (std::size_t i = 0; i < count; ++i) {
    double z = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    if (i == 0) z = lower;
    if (i + 1 == count) z = std::max(upper, lower);
    cert.max_excess = std::max(cert.max_excess, eval_scalar(r, z) - inv_nu);
  }
  cert.holds = cert.max_excess <= 1e-12;
  return cert;
}

RunResult run_explicit(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                       const SchemeConfig& cfg, const ScalarField* exact_final) {
  if (cfg.kind != SchemeKind::Explicit) throw ParameterError("run_explicit needs an explicit config");
  validate(op, w0, cfg);
  if (is_trivial(w0, psi)) return zero_run(op.size(), cfg, op, exact_final);

  const double mu = cfg.mu ? *cfg.mu : default_expansion_point(op);
  const RationalOperator rop(build_negative_power(1.0 - cfg.alpha, mu, cfg.quad_order), op);

  RunResult res;
  res.certificate.kind = SchemeKind::Explicit;
  res.certificate.gamma_bar = gamma_bar(rop.approx()).value;
  res.certificate.tau0 = 2.0 / res.certificate.gamma_bar;
  res.certificate.holds = cfg.tau <= res.certificate.tau0;
  if (!res.certificate.holds)
    res.warnings.push_back("time step exceeds the explicit stability bound: " +
                           res.certificate.describe());

  Vector w(w0.begin(), w0.end());
  res.norms.reserve(cfg.steps + 1);
  res.norms.push_back(op.mass_norm(w));
  for (std::size_t n = 0; n < cfg.steps; ++n) {
    const Vector arw = rop.apply_times_operator(w);
    axpy(-cfg.tau, arw, w);
    if (psi) {
      const Vector source = psi(static_cast<double>(n) * cfg.tau);
      axpy(cfg.tau, source, w);
      res.source_norms.push_back(op.mass_norm(source));
    } else {
      res.source_norms.push_back(0.0);
    }
    check_finite(w, n + 1);
    res.norms.push_back(op.mass_norm(w));
  }
  res.final_state = std::move(w);
  if (exact_final && op.mesh())
    res.error = error_norms(res.final_state, *exact_final, *op.mesh(), op.mass());
  return res;
}

RunResult run_implicit(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                       const SchemeConfig& cfg, const ScalarField* exact_final) {
  if (cfg.kind != SchemeKind::ImplicitWeighted)
    throw ParameterError("run_implicit needs an implicit config");
  validate(op, w0, cfg);
  if (!(cfg.sigma >= 0.5 && cfg.sigma <= 1.0))
    throw ParameterError("weighted scheme needs sigma in [0.5, 1]");
  if (is_trivial(w0, psi)) return zero_run(op.size(), cfg, op, exact_final);

  const double mu = cfg.mu ? *cfg.mu : default_expansion_point(op);
  const double nu = cfg.nu();
  const RationalOperator rop(build_resolvent(cfg.alpha, nu, mu, cfg.quad_order), op);

  RunResult res;
  const SpectrumBounds& b = op.bounds();
  res.certificate = check_resolvent_condition(rop.approx(), b.lower, b.upper);
  if (!res.certificate.holds)
    res.warnings.push_back("resolvent stability condition not verified: " +
                           res.certificate.describe());

  const double sigma = cfg.sigma;
  Vector w(w0.begin(), w0.end());
  Vector rhs(w.size());
  res.norms.reserve(cfg.steps + 1);
  res.norms.push_back(op.mass_norm(w));
  for (std::size_t n = 0; n < cfg.steps; ++n) {
    for (std::size_t i = 0; i < w.size(); ++i) rhs[i] = nu * w[i];
    if (psi) {
      const Vector source = psi((static_cast<double>(n) + sigma) * cfg.tau);
      axpy(1.0, source, rhs);
      res.source_norms.push_back(op.mass_norm(source));
    } else {
      res.source_norms.push_back(0.0);
    }
    const Vector w_sigma = rop.apply(rhs);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (w_sigma[i] - (1.0 - sigma) * w[i]) / sigma;
    check_finite(w, n + 1);
    res.norms.push_back(op.mass_norm(w));
  }
  res.final_state = std::move(w);
  if (exact_final && op.mesh())
    res.error = error_norms(res.final_state, *exact_final, *op.mesh(), op.mass());
  return res;
}

RunResult run_scheme(const DiscreteOperator& op, std::span<const double> w0, const Source& psi,
                     const SchemeConfig& cfg, const ScalarField* exact_final) {
  return cfg.kind == SchemeKind::Explicit ? run_explicit(op, w0, psi, cfg, exact_final)
                                          : run_implicit(op, w0, psi, cfg, exact_final);
}

std::vector<Vector> spectral_reference(const DenseEigen& eig, const SparseSymMatrix& mass,
                                       std::span<const double> w0,
                                       const std::optional<Vector>& constant_source, double alpha,
                                       std::span<const double> times) {
  const std::size_t n = eig.n;
  if (w0.size() != n) throw ParameterError("spectral_reference: dimension mismatch");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");

  const Vector mw0 = mass * w0;
  Vector mpsi;
  if (constant_source) mpsi = mass * std::span<const double>(*constant_source);

  std::vector<double> coef0(n);
  std::vector<double> coef_src(n, 0.0);
  std::vector<double> rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    coef0[k] = dot(eig.vectors[k], mw0);
    if (constant_source) coef_src[k] = dot(eig.vectors[k], mpsi);
    rate[k] = std::pow(eig.values[k], alpha);
  }

  std::vector<Vector> out;
  out.reserve(times.size());
  for (double t : times) {
    Vector w(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double decay = std::exp(-rate[k] * t);
      double c = coef0[k] * decay;
      if (constant_source) c += coef_src[k] * (1.0 - decay) / rate[k];
      axpy(c, eig.vectors[k], w);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Vector> spectral_reference(const DiscreteOperator& op, std::span<const double> w0,
                                       const std::optional<Vector>& constant_source, double alpha,
                                       std::span<const double> times) {
  const DenseEigen eig = dense_generalized_eig(op.stiff(), op.mass());
  return spectral_reference(eig, op.mass(), w0, constant_source, alpha, times);
}

}  // namespace fracpow
