#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracpow {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Symmetric sparse matrix; only the lower triangle (including the diagonal)
// is stored, in compressed-row form with sorted column indices per row.
class SparseSymMatrix {
 public:
  // Builds from entries of either triangle; (i, j) and (j, i) are folded
  // onto the lower triangle and duplicates are summed.
  static SparseSymMatrix from_triplets(std::size_t n, std::span<const Triplet> entries);
  static SparseSymMatrix identity(std::size_t n);
  static SparseSymMatrix diagonal(std::span<const double> diag);

  std::size_t size() const noexcept { return n_; }
  std::size_t stored_nonzeros() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<std::size_t>& columns() const noexcept { return columns_; }
  const std::vector<double>& values() const noexcept { return values_; }

  // y = this * x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  double at(std::size_t i, std::size_t j) const;
  double diag(std::size_t i) const { return at(i, i); }

  // a * this + b * other, on the union sparsity pattern.
  SparseSymMatrix combine(double a, const SparseSymMatrix& other, double b) const;

  // Row-major full n*n copy, for small dense oracles.
  std::vector<double> to_dense() const;

 private:
  SparseSymMatrix() = default;

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
};

struct CgOptions {
  double tol = 1e-10;
  // 0 selects 10 * n.
  std::size_t max_iter = 0;
  // Called with the iterate after every update; used by tests that watch the
  // error history.
  std::function<void(std::size_t, std::span<const double>)> observer;
};

struct CgReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Solves mat * x = rhs starting from x = 0. Throws SolverError when the
// relative residual is still above tol after max_iter iterations.
Vector cg_solve(const SparseSymMatrix& mat, std::span<const double> rhs,
                const CgOptions& opts = {}, CgReport* report = nullptr);

inline Vector cg_solve(const SparseSymMatrix& mat, std::span<const double> rhs, double tol,
                       std::size_t max_iter) {
  CgOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return cg_solve(mat, rhs, opts);
}

struct SpectrumBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct SpectrumOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200000;
};

// Extreme eigenvalues of the pencil stiff * phi = lambda * mass * phi:
// inverse iteration for the lower end, power iteration on mass^{-1} stiff for
// the upper end. Both values are Rayleigh quotients of the pencil.
SpectrumBounds spectrum_bounds(const SparseSymMatrix& stiff, const SparseSymMatrix& mass,
                               const SpectrumOptions& opts = {});

inline SpectrumBounds spectrum_bounds(const SparseSymMatrix& stiff, const SparseSymMatrix& mass,
                                      double tol) {
  SpectrumOptions opts;
  opts.tol = tol;
  return spectrum_bounds(stiff, mass, opts);
}

struct DenseEigen {
  std::size_t n = 0;
  Vector values;                // ascending
  std::vector<Vector> vectors;  // vectors[k] is the k-th mass-orthonormal eigenvector
};

inline constexpr std::size_t kDenseEigenCap = 5000;

// Full generalized eigendecomposition through a Cholesky reduction of mass and
// cyclic Jacobi rotations. Meant as an oracle for small problems only.
DenseEigen dense_generalized_eig(const SparseSymMatrix& stiff, const SparseSymMatrix& mass);

}  // namespace fracpow
