#include "fracpow/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracpow/error.hpp"

namespace fracpow {

DiscreteOperator::DiscreteOperator(SparseSymMatrix stiff, SparseSymMatrix mass,
                                   std::shared_ptr<const Mesh> mesh)
    : stiff_(std::move(stiff)),
      mass_(std::move(mass)),
      mesh_(std::move(mesh)),
      cache_(std::make_shared<BoundsCache>()) {
  if (stiff_.size() != mass_.size())
    throw ParameterError("stiffness and mass matrices differ in dimension");
}

const SpectrumBounds& DiscreteOperator::bounds() const {
  std::lock_guard lock(cache_->mutex);
  if (!cache_->value) cache_->value = spectrum_bounds(stiff_, mass_);
  return *cache_->value;
}

void DiscreteOperator::set_bounds(const SpectrumBounds& b) const {
  std::lock_guard lock(cache_->mutex);
  cache_->value = b;
}

double DiscreteOperator::mass_norm(std::span<const double> v) const {
  return std::sqrt(dot(v, mass_ * v));
}

ElementMatrix p1_stiffness(const Point& a, const Point& b, const Point& c) {
  const double area = signed_area(a, b, c);
  const std::array<Point, 3> p{a, b, c};
  std::array<std::array<double, 2>, 3> grad{};
  for (int i = 0; i < 3; ++i) {
    const Point& pj = p[(i + 1) % 3];
    const Point& pk = p[(i + 2) % 3];
    grad[i] = {(pj.y - pk.y) / (2.0 * area), (pk.x - pj.x) / (2.0 * area)};
  }
  ElementMatrix k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[i][j] = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
  return k;
}

ElementMatrix p1_mass(const Point& a, const Point& b, const Point& c) {
  const double area = std::abs(signed_area(a, b, c));
  ElementMatrix m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
  return m;
}

DiscreteOperator assemble(std::shared_ptr<const Mesh> mesh, const ProblemCoefficients& coeff) {
  if (!mesh) throw ParameterError("assemble: null mesh");
  if (!(coeff.g >= 0.0)) throw ParameterError("Robin coefficient g must be >= 0");
  const std::size_t n = mesh->vertices.size();

  std::vector<Triplet> stiff;
  std::vector<Triplet> mass;
  stiff.reserve(9 * mesh->triangles.size() + 4 * mesh->boundary_edges.size());
  mass.reserve(9 * mesh->triangles.size());

  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    const auto& tri = mesh->triangles[t];
    const Point& a = mesh->vertices[tri[0]];
    const Point& b = mesh->vertices[tri[1]];
    const Point& c = mesh->vertices[tri[2]];
    if (signed_area(a, b, c) < 1e-14)
      throw AssemblyError("degenerate triangle " + std::to_string(t));

    const Point centroid{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    const double kc = coeff.k(centroid);
    const double cc = coeff.c(centroid);
    if (!(kc > 0.0)) throw ParameterError("diffusion coefficient k must be positive");
    if (!(cc >= 0.0)) throw ParameterError("reaction coefficient c must be >= 0");

    const ElementMatrix ke = p1_stiffness(a, b, c);
    const ElementMatrix me = p1_mass(a, b, c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j) {
        stiff.push_back({tri[i], tri[j], kc * ke[i][j] + cc * me[i][j]});
        mass.push_back({tri[i], tri[j], me[i][j]});
      }
  }

  if (coeff.g > 0.0) {
    for (const auto& e : mesh->boundary_edges) {
      if (e.label != BoundaryLabel::G3) continue;
      const auto [i, j] = e.vertices;
      const Point& p = mesh->vertices[i];
      const Point& q = mesh->vertices[j];
      const double len = std::hypot(q.x - p.x, q.y - p.y);
      const double w = coeff.g * len / 6.0;
      stiff.push_back({i, i, 2.0 * w});
      stiff.push_back({j, j, 2.0 * w});
      stiff.push_back({i, j, w});
    }
  }

  return DiscreteOperator(SparseSymMatrix::from_triplets(n, stiff),
                          SparseSymMatrix::from_triplets(n, mass), std::move(mesh));
}

Vector nodal_interpolant(const ScalarField& f, const Mesh& mesh) {
  Vector v(mesh.vertices.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh.vertices[i]);
  return v;
}

Vector l2_project(const ScalarField& f, const Mesh& mesh, const SparseSymMatrix& mass) {
  if (mass.size() != mesh.vertices.size()) throw ParameterError("l2_project: dimension mismatch");
  Vector load(mesh.vertices.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = std::abs(signed_area(mesh, t));
    std::array<double, 3> fm{};  // fm[k]: f at the midpoint of the edge opposite vertex k
    for (int k = 0; k < 3; ++k) {
      const Point& p = mesh.vertices[tri[(k + 1) % 3]];
      const Point& q = mesh.vertices[tri[(k + 2) % 3]];
      fm[k] = f({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
    }
    // phi_i is 1/2 on the two edges touching vertex i and 0 on the opposite one.
    for (int i = 0; i < 3; ++i)
      load[tri[i]] += area / 3.0 * 0.5 * (fm[(i + 1) % 3] + fm[(i + 2) % 3]);
  }
  CgOptions opts;
  opts.tol = 1e-13;
  return cg_solve(mass, load, opts);
}

ErrorNorms error_norms(std::span<const double> w, const ScalarField& exact, const Mesh& mesh,
                       const SparseSymMatrix& mass) {
  if (w.size() != mesh.vertices.size() || mass.size() != w.size())
    throw ParameterError("error_norms: dimension mismatch");
  Vector e(w.begin(), w.end());
  ErrorNorms out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] -= exact(mesh.vertices[i]);
    out.eps_inf = std::max(out.eps_inf, std::abs(e[i]));
  }
  out.eps2_nodal = std::sqrt(std::max(0.0, dot(e, mass * std::span<const double>(e))));

  // Symmetric 7-point rule, exact for degree 5.
  constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
  constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
  constexpr double bary[7][3] = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, {a1, b1, b1}, {b1, a1, b1},
                                 {b1, b1, a1}, {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
  constexpr double wq[7] = {0.225, w1, w1, w1, w2, w2, w2};
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = std::abs(signed_area(mesh, t));
    for (int q = 0; q < 7; ++q) {
      Point p{0.0, 0.0};
      double wh = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Point& v = mesh.vertices[tri[k]];
        p.x += bary[q][k] * v.x;
        p.y += bary[q][k] * v.y;
        wh += bary[q][k] * w[tri[k]];
      }
      const double d = wh - exact(p);
      sum += area * wq[q] * d * d;
    }
  }
  out.eps2 = std::sqrt(sum);
  return out;
}

}  // namespace fracpow
