#include <doctest.h>

#include <cmath>
#include <set>

#include "minvar/linalg.hpp"
#include "minvar/rng.hpp"

using minvar::Matrix;
using minvar::Rng;
using minvar::Vector;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix random_symmetric(int n, Rng& rng) {
  const Matrix g = random_matrix(n, n, rng);
  return 0.5 * (g + g.transpose());
}

}  // namespace

TEST_SUITE_BEGIN("core_math");

TEST_CASE("sym_eig on the identity") {
  const auto eig = minvar::sym_eig(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(1.0));
  const Matrix gram = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sym_eig closed form 2x2") {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto eig = minvar::sym_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector v0 = eig.eigenvectors.col(0);
  Vector v1 = eig.eigenvectors.col(1);
  CHECK(std::abs(v0[0] * inv_sqrt2 - v0[1] * inv_sqrt2) ==
        doctest::Approx(1.0).epsilon(1e-10));  // |<v0, (1,-1)/sqrt(2)>| = 1
  CHECK(std::abs(v1[0] * inv_sqrt2 + v1[1] * inv_sqrt2) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sym_eig reconstruction oracle on random symmetric input") {
  Rng rng(42);
  const Matrix a = random_symmetric(6, rng);
  const auto eig = minvar::sym_eig(a);
  const Matrix rebuilt = eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                         eig.eigenvectors.transpose();
  CHECK((rebuilt - a).norm() <= 1e-8 * a.norm());
  for (int i = 0; i + 1 < 6; ++i) CHECK(eig.eigenvalues[i] <= eig.eigenvalues[i + 1]);
  const Matrix gram = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK((gram - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sym_eig eigenvalues satisfy the min-max characterization") {
  // Random unit vectors orthogonal to the first k-1 eigenvectors never beat
  // the reported eigenvalue.
  Rng rng(7);
  const Matrix a = random_symmetric(8, rng);
  const auto eig = minvar::sym_eig(a);
  for (int k = 0; k < 8; ++k) {
    for (int probe = 0; probe < 25; ++probe) {
      Vector v = random_matrix(8, 1, rng).col(0);
      for (int j = 0; j < k; ++j) {
        v -= eig.eigenvectors.col(j).dot(v) * eig.eigenvectors.col(j);
      }
      if (v.norm() < 1e-8) continue;
      v.normalize();
      CHECK(v.dot(a * v) >= eig.eigenvalues[k] - 1e-8);
    }
  }
}

TEST_CASE("sym_eig input validation") {
  CHECK_THROWS_AS(minvar::sym_eig(Matrix::Zero(2, 3)), minvar::DimensionError);
  Matrix asym(2, 2);
  asym << 1, 2, 3, 4;
  CHECK_THROWS_AS(minvar::sym_eig(asym), minvar::DimensionError);
}

TEST_CASE("principal angles on axis-aligned subspaces") {
  Matrix a = Matrix::Zero(4, 2);
  a(0, 0) = 1;
  a(1, 1) = 1;
  auto cos_same = minvar::principal_angle_cosines(a, a);
  REQUIRE(cos_same.size() == 2);
  CHECK(cos_same[0] == doctest::Approx(1.0));
  CHECK(cos_same[1] == doctest::Approx(1.0));

  Matrix e1 = Matrix::Zero(3, 1), e2 = Matrix::Zero(3, 1);
  e1(0, 0) = 1;
  e2(1, 0) = 1;
  auto cos_orth = minvar::principal_angle_cosines(e1, e2);
  REQUIRE(cos_orth.size() == 1);
  CHECK(cos_orth[0] == doctest::Approx(0.0).epsilon(1e-12));

  Matrix diag = Matrix::Zero(3, 1);
  diag(0, 0) = 1.0 / std::sqrt(2.0);
  diag(1, 0) = 1.0 / std::sqrt(2.0);
  auto cos_45 = minvar::principal_angle_cosines(e1, diag);
  CHECK(cos_45[0] == doctest::Approx(0.70710678).epsilon(1e-8));
}

TEST_CASE("principal angles are basis-invariant") {
  Rng rng(11);
  const Matrix a = random_matrix(12, 3, rng);
  const Matrix u = minvar::random_orthogonal(3, rng);
  for (double c : minvar::principal_angle_cosines(a, a * u)) {
    CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Any invertible right factor leaves the span unchanged.
  Matrix m = random_matrix(3, 3, rng);
  m += 3.0 * Matrix::Identity(3, 3);
  for (double c : minvar::principal_angle_cosines(a, a * m)) {
    CHECK(c == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("principal angles reject rank-deficient input") {
  Matrix a(4, 2);
  a.col(0) << 1, 2, 3, 4;
  a.col(1) = 2.0 * a.col(0);
  const Matrix b = Matrix::Identity(4, 2);
  CHECK_THROWS_AS(minvar::principal_angle_cosines(a, b), minvar::RankError);
  CHECK_THROWS_WITH_AS(minvar::principal_angle_cosines(b, a),
                       doctest::Contains("B"), minvar::RankError);
}

TEST_CASE("normal sampling moments") {
  Rng rng(123);
  const int draws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double variance = sum_sq / draws - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(variance - 1.0) < 0.03);
}

TEST_CASE("rng determinism and seed sensitivity") {
  Rng a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const double xa = a.normal();
    CHECK(xa == b.normal());
    if (xa != c.normal()) differs = true;
  }
  CHECK(differs);

  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("forked streams are independent and reproducible") {
  Rng root(2024);
  Rng f1 = root.fork(1);
  Rng f2 = root.fork(2);
  Rng f1_again = Rng(2024).fork(1);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const double x = f1.normal();
    CHECK(x == f1_again.normal());
    if (x != f2.normal()) differs = true;
  }
  CHECK(differs);
}

TEST_SUITE_END();
