#include <doctest.h>

#include <cmath>
#include <random>

#include "fracpow/error.hpp"
#include "fracpow/parallel.hpp"
#include "fracpow/rational.hpp"
#include "support.hpp"

using namespace fracpow;
using testing::kLambda1;

TEST_CASE("gamma bar against the table values") {
  CHECK(gamma_bar(build_negative_power(0.5, kLambda1, 5)).value ==
        doctest::Approx(21.794966).epsilon(1e-4));
  CHECK(gamma_bar(build_negative_power(0.75, kLambda1, 10)).value ==
        doctest::Approx(6.3106349).epsilon(1e-4));
  CHECK(gamma_bar(build_negative_power(0.5, kLambda1, 10)).value ==
        doctest::Approx(43.589932).epsilon(1e-4));
  CHECK(std::abs(gamma_bar(build_negative_power(0.25, kLambda1, 40)).value - 3211.1792) < 0.01);
  CHECK(std::abs(gamma_bar(build_negative_power(0.5, kLambda1, 40)).value - 174.35973) < 1e-3);
  for (std::size_t m : {1, 2, 5, 17, 40})
    CHECK(gamma_bar(build_negative_power(0.5, kLambda1, m)).value ==
          doctest::Approx(2.0 * m * std::sqrt(kLambda1)).epsilon(1e-6));
}

TEST_CASE("gamma bar equals the coefficient sum and the limit of z R(z)") {
  const auto r = build_negative_power(0.5, kLambda1, 1);
  CHECK(gamma_bar(r).value == r.coeffs[0]);
  const auto r20 = build_negative_power(0.3, 2.0, 20);
  double sum = 0.0;
  for (double d : r20.coeffs) sum += d;
  CHECK(gamma_bar(r20).value == sum);
  CHECK(1e14 * eval_scalar(r20, 1e14) == doctest::Approx(sum).epsilon(1e-8));
  CHECK_THROWS_AS(gamma_bar(build_resolvent(0.5, 10.0, 1.0, 3)), ParameterError);
}

TEST_CASE("expansion point identity") {
  CHECK(std::abs(eval_scalar(build_negative_power(0.5, kLambda1, 20), kLambda1) - 0.458821546223) <
        1e-9);
  CHECK(std::abs(eval_scalar(build_negative_power(0.25, kLambda1, 10), kLambda1) - 0.677363673534) <
        1e-9);
  CHECK(std::abs(eval_scalar(build_negative_power(0.75, kLambda1, 10), kLambda1) - 0.310789048046) <
        1e-9);
  for (std::size_t m : {1, 3, 8, 40})
    for (double beta : {0.1, 0.5, 0.9}) {
      const double mu = 50.0;
      CHECK(eval_scalar(build_negative_power(beta, mu, m), mu) ==
            doctest::Approx(std::pow(mu, -beta)).epsilon(1e-10));
    }
}

TEST_CASE("single-pole identity") {
  RationalApprox r;
  r.shifts = {0.0};
  r.coeffs = {1.0};
  CHECK(eval_scalar(r, 4.0) == 0.25);
  CHECK_THROWS_AS(eval_scalar(r, 0.0), ParameterError);
}

TEST_CASE("coefficient invariants") {
  for (std::size_t m : {1, 5, 40}) {
    const auto r = build_negative_power(0.5, kLambda1, m);
    REQUIRE(r.shifts.size() == m);
    REQUIRE(r.coeffs.size() == m);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(r.shifts[i] >= 0.0);
      CHECK(std::isfinite(r.shifts[i]));
      CHECK(r.coeffs[i] > 0.0);
    }
  }
}

TEST_CASE("resolvent form with nu = 0 equals the negative power form") {
  const auto a = build_resolvent(0.5, 0.0, kLambda1, 5);
  const auto b = build_negative_power(0.5, kLambda1, 5);
  for (std::size_t m = 0; m < 5; ++m) {
    CHECK(std::abs(a.shifts[m] - b.shifts[m]) < 1e-9 * std::max(1.0, b.shifts[m]));
    CHECK(std::abs(a.coeffs[m] - b.coeffs[m]) < 1e-9 * std::max(1.0, b.coeffs[m]));
  }
  CHECK(a.kind == RationalKind::Resolvent);
}

TEST_CASE("resolvent approximation accuracy and the stability condition") {
  // A sum of M poles decays like 1/z while the target decays like z^-alpha, so
  // the M = 10 rule is accurate to 1% only up to z of a few hundred; further
  // out the error shrinks with M at every sample.
  const auto r = build_resolvent(0.5, 200.0, kLambda1, 10);
  const auto r20 = build_resolvent(0.5, 200.0, kLambda1, 20);
  const auto r40 = build_resolvent(0.5, 200.0, kLambda1, 40);
  const double lo = std::log(4.75);
  const double hi = std::log(7.5e4);
  for (int i = 0; i < 100; ++i) {
    const double z = std::exp(lo + (hi - lo) * i / 99.0);
    const double exact = 1.0 / (200.0 + std::sqrt(z));
    const double e10 = std::abs(eval_scalar(r, z) - exact) / exact;
    const double e20 = std::abs(eval_scalar(r20, z) - exact) / exact;
    const double e40 = std::abs(eval_scalar(r40, z) - exact) / exact;
    if (z <= 500.0) CHECK(e10 < 1e-2);
    if (z >= 50.0) {
      CHECK(e20 < e10);
      CHECK(e40 < e20);
    }
  }

  const auto op = testing::quarter_disk_operator(1, 10.0);
  const auto b = op.bounds();
  const auto r800 = build_resolvent(0.5, 800.0, kLambda1, 20);
  const double l0 = std::log(b.lower);
  const double l1 = std::log(b.upper);
  for (int i = 0; i < 1000; ++i) {
    const double z = std::exp(l0 + (l1 - l0) * i / 999.0);
    CHECK(eval_scalar(r800, z) <= 1.0 / 800.0 + 1e-12);
  }

  // Error near mu decreases with M.
  double prev = 1e300;
  for (std::size_t m : {2, 5, 10, 20}) {
    const auto rm = build_resolvent(0.5, 200.0, kLambda1, m);
    double err = 0.0;
    for (double z : {kLambda1 * 1.5, kLambda1 * 3.0, kLambda1 * 10.0})
      err = std::max(err, std::abs(eval_scalar(rm, z) - 1.0 / (200.0 + std::sqrt(z))));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("z R(z) is increasing and stays below gamma bar") {
  const auto op = testing::quarter_disk_operator(1, 10.0);
  const double lower = op.bounds().lower;
  for (std::size_t m : {5, 20}) {
    const auto r = build_negative_power(0.5, lower, m);
    const double gb = gamma_bar(r).value;
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double z = lower * std::pow(10.0, 8.0 * i / 999.0);
      const double v = z * eval_scalar(r, z);
      CHECK(v > prev);
      CHECK(v < gb);
      prev = v;
    }
  }
}

TEST_CASE("accuracy on the discrete spectrum improves with M") {
  const auto b = testing::quarter_disk_operator(1, 10.0).bounds();
  double prev = 1e300;
  for (std::size_t m : {5, 10, 20, 40}) {
    const auto r = build_negative_power(0.5, b.lower, m);
    double err = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double z = b.lower * std::pow(b.upper / b.lower, i / 499.0);
      err = std::max(err, std::abs(eval_scalar(r, z) - 1.0 / std::sqrt(z)));
    }
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("operator action on diagonal pencils") {
  const DiscreteOperator op(SparseSymMatrix::diagonal(Vector{4.0, 9.0}), SparseSymMatrix::identity(2));
  const auto r1 = build_negative_power(0.5, 4.0, 1);
  const Vector x = apply(r1, op, Vector{1.0, 0.0});
  CHECK(x[0] == doctest::Approx(r1.coeffs[0] / (r1.shifts[0] + 4.0)).epsilon(1e-10));
  CHECK(x[1] == 0.0);

  const auto r = build_negative_power(0.5, 4.0, 12);
  const Vector v{0.3, -1.7};
  const RationalOperator rop(r, op);
  const Vector y = rop.apply(v);
  const Vector ay = rop.apply_times_operator(v);
  const double lam[2] = {4.0, 9.0};
  for (int k = 0; k < 2; ++k) {
    CHECK(y[k] == doctest::Approx(eval_scalar(r, lam[k]) * v[k]).epsilon(1e-9));
    CHECK(ay[k] == doctest::Approx(lam[k] * eval_scalar(r, lam[k]) * v[k]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(rop.apply(Vector{1.0}), ParameterError);
}

TEST_CASE("operator action matches the dense eigen oracle on the level-1 mesh") {
  const auto op = testing::quarter_disk_operator(1, 10.0);
  const auto r = build_negative_power(0.5, op.bounds().lower, 20);
  std::mt19937_64 rng(5);
  Vector v = testing::random_vector(op.size(), rng);
  const double nv = op.mass_norm(v);
  for (double& x : v) x /= nv;

  const Vector y = apply(r, op, v);
  const auto eig = dense_generalized_eig(op.stiff(), op.mass());
  const Vector mv = op.mass() * v;
  Vector ref(op.size(), 0.0);
  for (std::size_t k = 0; k < eig.n; ++k)
    axpy(eval_scalar(r, eig.values[k]) * dot(eig.vectors[k], mv), eig.vectors[k], ref);
  Vector diff(y);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= ref[i];
  CHECK(op.mass_norm(diff) < 1e-8);
}

TEST_CASE("parallel_for covers every index and forwards exceptions") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(thread_count() >= 1);
  CHECK_THROWS_AS(parallel_for(10,
                               [](std::size_t i) {
                                 if (i == 7) throw SolverError("boom", 1.0);
                               }),
                  SolverError);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(build_negative_power(0.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS(build_negative_power(1.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS(build_negative_power(0.5, -1.0, 5), ParameterError);
  CHECK_THROWS_AS(build_negative_power(0.5, 1.0, 0), ParameterError);
  CHECK_THROWS_AS(build_resolvent(0.5, -2.0, 1.0, 5), ParameterError);
}
