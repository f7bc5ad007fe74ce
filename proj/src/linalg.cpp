#include "fracpow/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fracpow/error.hpp"

namespace fracpow {

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// --- SparseSymMatrix -------------------------------------------------------

SparseSymMatrix SparseSymMatrix::from_triplets(std::size_t n, std::span<const Triplet> entries) {
  if (n == 0) throw ParameterError("sparse matrix dimension must be positive");

  std::vector<Triplet> lower;
  lower.reserve(entries.size());
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw ParameterError("triplet index out of range");
    if (t.row >= t.col)
      lower.push_back(t);
    else
      lower.push_back({t.col, t.row, t.value});
  }
  std::sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(n + 1, 0);
  for (std::size_t k = 0; k < lower.size();) {
    const std::size_t r = lower[k].row;
    const std::size_t c = lower[k].col;
    double v = 0.0;
    while (k < lower.size() && lower[k].row == r && lower[k].col == c) v += lower[k++].value;
    m.columns_.push_back(c);
    m.values_.push_back(v);
    ++m.row_offsets_[r + 1];
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

SparseSymMatrix SparseSymMatrix::identity(std::size_t n) {
  const Vector ones(n, 1.0);
  return diagonal(ones);
}

SparseSymMatrix SparseSymMatrix::diagonal(std::span<const double> diag) {
  std::vector<Triplet> t;
  t.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
  return from_triplets(diag.size(), t);
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  assert(x.size() == n_ && y.size() == n_);
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double yi = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t j = columns_[k];
      const double a = values_[k];
      yi += a * x[j];
      if (j != i) y[j] += a * x[i];
    }
    y[i] += yi;
  }
}

Vector SparseSymMatrix::operator*(std::span<const double> x) const {
  Vector y(n_);
  multiply(x, y);
  return y;
}

double SparseSymMatrix::at(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

SparseSymMatrix SparseSymMatrix::combine(double a, const SparseSymMatrix& other, double b) const {
  if (other.n_ != n_) throw ParameterError("combine: dimension mismatch");
  SparseSymMatrix m;
  m.n_ = n_;
  m.row_offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t p = row_offsets_[i];
    std::size_t q = other.row_offsets_[i];
    const std::size_t pe = row_offsets_[i + 1];
    const std::size_t qe = other.row_offsets_[i + 1];
    while (p < pe || q < qe) {
      std::size_t c;
      double v = 0.0;
      if (q == qe || (p < pe && columns_[p] < other.columns_[q])) {
        c = columns_[p];
        v = a * values_[p++];
      } else if (p == pe || other.columns_[q] < columns_[p]) {
        c = other.columns_[q];
        v = b * other.values_[q++];
      } else {
        c = columns_[p];
        v = a * values_[p++] + b * other.values_[q++];
      }
      m.columns_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_[i + 1] = m.columns_.size();
  }
  return m;
}

std::vector<double> SparseSymMatrix::to_dense() const {
  std::vector<double> d(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      d[i * n_ + columns_[k]] = values_[k];
      d[columns_[k] * n_ + i] = values_[k];
    }
  return d;
}

// --- Conjugate gradients ---------------------------------------------------

Vector cg_solve(const SparseSymMatrix& mat, std::span<const double> rhs, const CgOptions& opts,
                CgReport* report) {
  const std::size_t n = mat.size();
  if (rhs.size() != n) throw ParameterError("cg_solve: rhs dimension mismatch");
  if (!(opts.tol > 0.0)) throw ParameterError("cg_solve: tolerance must be positive");
  const std::size_t max_iter = opts.max_iter ? opts.max_iter : 10 * n;

  Vector x(n, 0.0);
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    if (report) *report = {0, 0.0};
    return x;
  }

  Vector r(rhs.begin(), rhs.end());
  Vector p = r;
  Vector q(n);
  double rr = dot(r, r);
  const double target = opts.tol * rhs_norm;

  std::size_t it = 0;
  while (std::sqrt(rr) > target) {
    if (it == max_iter) {
      const double rel = std::sqrt(rr) / rhs_norm;
      throw SolverError("conjugate gradients did not converge in " + std::to_string(max_iter) +
                            " iterations (relative residual " + std::to_string(rel) + ")",
                        rel);
    }
    mat.multiply(p, q);
    const double alpha = rr / dot(p, q);
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    ++it;
    if (opts.observer) opts.observer(it, x);
  }

  // The recursive residual drifts from the true one; report the true value.
  Vector ax = mat * std::span<const double>(x);
  for (std::size_t i = 0; i < n; ++i) ax[i] -= rhs[i];
  if (report) *report = {it, norm2(ax) / rhs_norm};
  return x;
}

// --- Extreme eigenvalues -----------------------------------------------------

namespace {

double mass_normalize(const SparseSymMatrix& mass, Vector& x) {
  const Vector mx = mass * std::span<const double>(x);
  const double nrm = std::sqrt(dot(x, mx));
  for (double& v : x) v /= nrm;
  return nrm;
}

double rayleigh(const SparseSymMatrix& stiff, const SparseSymMatrix& mass,
                std::span<const double> x) {
  return dot(x, stiff * x) / dot(x, mass * x);
}

double pencil_residual(const SparseSymMatrix& stiff, const SparseSymMatrix& mass,
                       std::span<const double> x, double lambda) {
  Vector sx = stiff * x;
  const Vector mx = mass * x;
  axpy(-lambda, mx, sx);
  return norm2(sx) / (std::abs(lambda) * norm2(mx));
}

}  // namespace

SpectrumBounds spectrum_bounds(const SparseSymMatrix& stiff, const SparseSymMatrix& mass,
                               const SpectrumOptions& opts) {
  const std::size_t n = stiff.size();
  if (mass.size() != n) throw ParameterError("spectrum_bounds: dimension mismatch");
  if (!(opts.tol > 0.0)) throw ParameterError("spectrum_bounds: tolerance must be positive");

  CgOptions inner;
  inner.tol = 1e-13;

  SpectrumBounds out;

  // Lower end: inverse iteration, x <- stiff^{-1} mass x.
  {
    Vector x(n, 1.0);
    mass_normalize(mass, x);
    double lambda = rayleigh(stiff, mass, x);
    bool done = n == 1;
    for (std::size_t it = 0; !done; ++it) {
      if (it == opts.max_iter)
        throw EigenError("inverse iteration did not converge",
                         pencil_residual(stiff, mass, x, lambda));
      x = cg_solve(stiff, mass * std::span<const double>(x), inner);
      mass_normalize(mass, x);
      const double next = rayleigh(stiff, mass, x);
      done = std::abs(next - lambda) <= opts.tol * std::abs(next);
      lambda = next;
    }
    out.lower = lambda;
  }

  // Upper end: power iteration, x <- mass^{-1} stiff x.
  {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector x(n);
    for (double& v : x) v = dist(rng);
    mass_normalize(mass, x);
    double lambda = rayleigh(stiff, mass, x);
    bool done = n == 1;
    for (std::size_t it = 0; !done; ++it) {
      if (it == opts.max_iter)
        throw EigenError("power iteration did not converge",
                         pencil_residual(stiff, mass, x, lambda));
      x = cg_solve(mass, stiff * std::span<const double>(x), inner);
      mass_normalize(mass, x);
      const double next = rayleigh(stiff, mass, x);
      done = std::abs(next - lambda) <= opts.tol * std::abs(next);
      lambda = next;
    }
    out.upper = lambda;
  }
  return out;
}

// --- Dense oracle -----------------------------------------------------------

namespace {

// In-place lower Cholesky factor of a row-major SPD matrix.
void cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw EigenError("mass matrix is not positive definite", d);
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
  }
}

// Cyclic Jacobi rotations; on return a is (numerically) diagonal and v holds
// the eigenvectors column-wise.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& v, std::size_t n) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };
  double diag_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(a[i * n + i]));

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= 1e-15 * diag_scale) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  throw EigenError("Jacobi eigenvalue sweeps did not converge", off_norm());
}

}  // namespace

DenseEigen dense_generalized_eig(const SparseSymMatrix& stiff, const SparseSymMatrix& mass) {
  const std::size_t n = stiff.size();
  if (mass.size() != n) throw ParameterError("dense_generalized_eig: dimension mismatch");
  if (n > kDenseEigenCap)
    throw CapacityError("dense eigen oracle refuses dimension " + std::to_string(n) + " > " +
                        std::to_string(kDenseEigenCap));

  std::vector<double> l = mass.to_dense();
  cholesky(l, n);
  const std::vector<double> s = stiff.to_dense();

  // y = L^{-1} S, column by column (forward substitution on every column).
  std::vector<double> y = s;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      double acc = y[i * n + col];
      for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * y[k * n + col];
      y[i * n + col] = acc / l[i * n + i];
    }
  // c = L^{-1} y^T  (= L^{-1} S L^{-T} since S is symmetric)
  std::vector<double> c(n * n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      double acc = y[col * n + i];
      for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * c[k * n + col];
      c[i * n + col] = acc / l[i * n + i];
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (c[i * n + j] + c[j * n + i]);
      c[i * n + j] = avg;
      c[j * n + i] = avg;
    }

  std::vector<double> v;
  jacobi_eigen(c, v, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return c[a * n + a] < c[b * n + b]; });

  DenseEigen out;
  out.n = n;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(c[idx * n + idx]);
    // phi = L^{-T} y_k (back substitution)
    Vector phi(n);
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = v[ii * n + idx];
      for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * phi[k];
      phi[ii] = acc / l[ii * n + ii];
    }
    out.vectors.push_back(std::move(phi));
  }
  return out;
}

}  // namespace fracpow
