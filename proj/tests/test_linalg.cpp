#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ohbk/errors.hpp"
#include "ohbk/linalg.hpp"

using namespace ohbk;
using linalg::SymMatrix;
using linalg::Vector;

TEST_CASE("dot") {
  CHECK(linalg::dot(Vector{1, 0, 2}, Vector{3, 4, 5}) == 13.0);
  CHECK(linalg::dot(linalg::unit_vector(3, 0), linalg::unit_vector(3, 1)) == 0.0);
  const Vector v{-1.5, 2.0, 0.25};
  CHECK(linalg::dot(v, v) >= 0.0);
  CHECK(linalg::dot(v, v) == doctest::Approx(linalg::norm_sq(v)));
  CHECK_THROWS_AS(linalg::dot(Vector{1, 2}, Vector{1, 2, 3}), DimensionError);
}

TEST_CASE("norm_sq") {
  CHECK(linalg::norm_sq(Vector{3, 4}) == 25.0);
  CHECK(linalg::norm_sq(Vector(7)) == 0.0);
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(linalg::norm_sq(Vector{s, s, s}) - 1.0) < 1e-12);
}

TEST_CASE("axpy") {
  const Vector x{1, 1};
  const Vector y{1, 2};
  CHECK(linalg::axpy(0.0, x, y) == y);
  CHECK(linalg::axpy(1.0, x, Vector(2)) == x);
  CHECK(linalg::axpy(2.0, x, y) == Vector{3, 4});
  CHECK_THROWS_AS(linalg::axpy(1.0, Vector{1}, y), DimensionError);
}

TEST_CASE("vectors must be nonempty") {
  CHECK_THROWS_AS(Vector(0), DimensionError);
  CHECK_THROWS_AS(Vector(std::vector<double>{}), DimensionError);
}

TEST_CASE("rank1_accumulate") {
  SUBCASE("unit vector") {
    SymMatrix m(3);
    linalg::rank1_accumulate(m, linalg::unit_vector(3, 0), 1.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == (i == 0 && j == 0 ? 1.0 : 0.0));
  }
  SUBCASE("zero weight leaves M unchanged") {
    SymMatrix m = SymMatrix::identity(2, 3.0);
    linalg::rank1_accumulate(m, Vector{5, -7}, 0.0);
    CHECK(m(0, 0) == 3.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 1) == 3.0);
  }
  SUBCASE("half of (1,1)(1,1)^T") {
    SymMatrix m(2);
    linalg::rank1_accumulate(m, Vector{1, 1}, 0.5);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(m(i, j) == 0.5);
  }
  SUBCASE("order mismatch") {
    SymMatrix m(2);
    CHECK_THROWS_AS(linalg::rank1_accumulate(m, Vector{1, 2, 3}, 1.0), DimensionError);
  }
}

TEST_CASE("rank1_accumulate keeps exact symmetry") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  SymMatrix m(9);
  for (int k = 0; k < 200; ++k) {
    Vector v(9);
    for (double& x : v) x = normal(gen);
    linalg::rank1_accumulate(m, v, normal(gen));
  }
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) REQUIRE(m(i, j) == m(j, i));
}

TEST_CASE("sym_eigenvalues on small known spectra") {
  SUBCASE("I/50") {
    const auto eig = linalg::sym_eigenvalues(SymMatrix::identity(50, 1.0 / 50.0));
    REQUIRE(eig.size() == 50);
    for (double e : eig) CHECK(e == doctest::Approx(0.02).epsilon(1e-14));
  }
  SUBCASE("diag(3,1,2) sorted") {
    const std::vector<double> d{3, 1, 2};
    const auto eig = linalg::sym_eigenvalues(SymMatrix::diagonal(d));
    CHECK(eig == std::vector<double>{1, 2, 3});
  }
  SUBCASE("[[2,1],[1,2]]") {
    // Characteristic polynomial l^2 - 4l + 3 = (l - 1)(l - 3).
    const std::vector<double> rows{2, 1, 1, 2};
    const auto eig = linalg::sym_eigenvalues(SymMatrix::from_rows(2, rows));
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("order 1") {
    SymMatrix m(1);
    m.set(0, 0, -4.5);
    CHECK(linalg::sym_eigenvalues(m) == std::vector<double>{-4.5});
  }
}

TEST_CASE("sym_eigenvalues rejects non-finite input and reports non-convergence") {
  SymMatrix m(2);
  m.set(0, 1, std::nan(""));
  CHECK_THROWS_AS(linalg::sym_eigenvalues(m), NumericalError);

  const std::vector<double> rows{1, 2, 0, 2, 1, 3, 0, 3, 5};
  linalg::JacobiOptions no_sweeps;
  no_sweeps.max_sweeps = 0;
  CHECK_THROWS_AS(linalg::sym_eigenvalues(SymMatrix::from_rows(3, rows), no_sweeps),
                  NumericalError);
}

namespace {

// Orthogonal matrix by Gram-Schmidt on a Gaussian matrix (columns stored row-major).
std::vector<double> random_orthogonal(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> cols(n, std::vector<double>(n));
  for (auto& c : cols)
    for (double& x : c) x = normal(gen);
  for (std::size_t k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        double d = 0;
        for (std::size_t i = 0; i < n; ++i) d += cols[k][i] * cols[j][i];
        for (std::size_t i = 0; i < n; ++i) cols[k][i] -= d * cols[j][i];
      }
    }
    double len = 0;
    for (double x : cols[k]) len += x * x;
    len = std::sqrt(len);
    for (double& x : cols[k]) x /= len;
  }
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i * n + j] = cols[j][i];
  return q;
}

}  // namespace

TEST_CASE("sym_eigenvalues recovers a planted spectrum Q diag(L) Q^T") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> spec(-3.0, 3.0);
  for (std::size_t n : {2u, 3u, 5u, 8u, 13u, 20u}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> lambda(n);
      for (double& l : lambda) l = spec(gen);
      const auto q = random_orthogonal(n, gen);
      std::vector<double> a(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0;
          for (std::size_t k = 0; k < n; ++k) s += q[i * n + k] * lambda[k] * q[j * n + k];
          a[i * n + j] = s;
        }
      SymMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, 0.5 * (a[i * n + j] + a[j * n + i]));

      const auto eig = linalg::sym_eigenvalues(m);
      std::sort(lambda.begin(), lambda.end());
      double sum = 0;
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(eig[k] - lambda[k]) <= 1e-9);
        sum += eig[k];
      }
      CHECK(std::abs(sum - m.trace()) <= 1e-10 * static_cast<double>(n));
    }
  }
}

TEST_CASE("from_rows rejects asymmetric input") {
  const std::vector<double> rows{1, 2, 3, 4};
  CHECK_THROWS_AS(SymMatrix::from_rows(2, rows), ArgumentError);
  CHECK_THROWS_AS(SymMatrix::from_rows(3, rows), DimensionError);
}
