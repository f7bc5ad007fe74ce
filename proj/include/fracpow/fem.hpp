#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>

#include "fracpow/geometry.hpp"
#include "fracpow/linalg.hpp"

namespace fracpow {

using ScalarField = std::function<double(const Point&)>;

// Coefficients of -div(k grad u) + c u with k du/dn + g u = 0 on the arc G3;
// G1 and G2 carry the natural condition du/dn = 0.
struct ProblemCoefficients {
  ScalarField k = [](const Point&) { return 1.0; };
  ScalarField c = [](const Point&) { return 0.0; };
  double g = 0.0;
};

// The discrete operator A defined by (A y, v) = a(y, v) on the P1 space,
// carried as the pencil (stiff, mass). Immutable; spectrum bounds are
// computed on first request and cached.
class DiscreteOperator {
 public:
  DiscreteOperator(SparseSymMatrix stiff, SparseSymMatrix mass,
                   std::shared_ptr<const Mesh> mesh = nullptr);

  const SparseSymMatrix& stiff() const noexcept { return stiff_; }
  const SparseSymMatrix& mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return stiff_.size(); }
  const Mesh* mesh() const noexcept { return mesh_.get(); }

  const SpectrumBounds& bounds() const;
  // Seeds the cache, e.g. with bounds known in closed form.
  void set_bounds(const SpectrumBounds& b) const;

  double mass_norm(std::span<const double> v) const;

 private:
  struct BoundsCache {
    std::mutex mutex;
    std::optional<SpectrumBounds> value;
  };

  SparseSymMatrix stiff_;
  SparseSymMatrix mass_;
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<BoundsCache> cache_;
};

using ElementMatrix = std::array<std::array<double, 3>, 3>;

// Exact P1 element matrices on triangle (a, b, c).
ElementMatrix p1_stiffness(const Point& a, const Point& b, const Point& c);
ElementMatrix p1_mass(const Point& a, const Point& b, const Point& c);

DiscreteOperator assemble(std::shared_ptr<const Mesh> mesh, const ProblemCoefficients& coeff);
inline DiscreteOperator assemble(const Mesh& mesh, const ProblemCoefficients& coeff) {
  return assemble(std::make_shared<const Mesh>(mesh), coeff);
}

Vector nodal_interpolant(const ScalarField& f, const Mesh& mesh);

// L2 projection onto the P1 space (edge-midpoint load quadrature).
Vector l2_project(const ScalarField& f, const Mesh& mesh, const SparseSymMatrix& mass);

struct ErrorNorms {
  double eps2 = 0.0;       // L2(Omega) norm of w_h - exact, 7-point degree-5 rule per triangle
  double eps2_nodal = 0.0; // mass norm of w - I_h(exact)
  double eps_inf = 0.0;    // max vertex deviation
};

ErrorNorms error_norms(std::span<const double> w, const ScalarField& exact, const Mesh& mesh,
                       const SparseSymMatrix& mass);

}  // namespace fracpow
