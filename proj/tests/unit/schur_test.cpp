#include <gtest/gtest.h>

#include <cmath>

#include "expnet/linalg.hpp"
#include "expnet/random.hpp"
#include "oracles.hpp"

namespace expnet {
namespace {

void expect_valid_schur(const CMatrix& a, const SchurForm& s) {
  const std::size_t n = a.dim();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  EXPECT_LE(frobenius_norm(s.q * adjoint(s.q) - CMatrix::identity(n)), 1e-10 * sqrt_n);
  EXPECT_LE(frobenius_norm(s.q * s.t * adjoint(s.q) - a), 1e-10 * frobenius_norm(a));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(s.t(i, j), Complex(0.0));
    EXPECT_EQ(s.eigenvalues[i], s.t(i, i));
  }
}

TEST(SchurTest, DiagonalInputIsAlreadyTriangular) {
  const std::vector<Complex> d{Complex(3, 1), -2.0, Complex(0, 5), 0.5};
  const CMatrix a = CMatrix::diagonal(d);
  const SchurForm s = schur_decompose(a);
  expect_valid_schur(a, s);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, d), 1e-14);
  // Q is a permutation with unit-modulus phases.
  for (std::size_t i = 0; i < 4; ++i) {
    int unit = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double m = std::abs(s.q(i, j));
      if (std::abs(m - 1.0) < 1e-14) ++unit;
      else EXPECT_LT(m, 1e-14);
    }
    EXPECT_EQ(unit, 1);
  }
}

TEST(SchurTest, NilpotentBlock) {
  const CMatrix a{{0.0, 1.0}, {0.0, 0.0}};
  const SchurForm s = schur_decompose(a);
  expect_valid_schur(a, s);
  EXPECT_EQ(s.eigenvalues[0], Complex(0.0));
  EXPECT_EQ(s.eigenvalues[1], Complex(0.0));
  EXPECT_NEAR(std::abs(s.t(0, 1)), 1.0, 1e-15);
}

TEST(SchurTest, RandomSixBySixMatchesCompanionOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix a = random_matrix(6, seed, MatrixKind::kComplexGaussian);
    const SchurForm s = schur_decompose(a);
    expect_valid_schur(a, s);
    EXPECT_LE(oracle::multiset_distance(s.eigenvalues, oracle::companion_eigenvalues(a)), 1e-8)
        << "seed " << seed;
  }
}

TEST(SchurTest, RealInputWithComplexPairs) {
  const CMatrix rot{{0.0, -1.0}, {1.0, 0.0}};
  const SchurForm s = schur_decompose(rot);
  expect_valid_schur(rot, s);
  EXPECT_LE(oracle::multiset_distance(s.eigenvalues, {Complex(0, 1), Complex(0, -1)}), 1e-14);
}

TEST(SchurTest, UnitarityAndReconstructionProperty) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 2 + seed % 15;
    const MatrixKind kind = seed % 3 == 0 ? MatrixKind::kRealGaussian : MatrixKind::kComplexGaussian;
    const CMatrix a = random_matrix(n, 5000 + seed, kind);
    expect_valid_schur(a, schur_decompose(a));
  }
}

TEST(SchurTest, DefectiveJordanInput) {
  const CMatrix j = oracle::jordan_matrix({{Complex(2, 0), 3}, {Complex(-1, 0.5), 2}});
  const CMatrix p = random_matrix(5, 42, MatrixKind::kComplexGaussian);
  const CMatrix a = p * j * oracle::eigen_inverse(p);
  expect_valid_schur(a, schur_decompose(a));
}

TEST(SchurTest, IsDeterministic) {
  const CMatrix a = random_matrix(9, 3, MatrixKind::kComplexGaussian);
  const SchurForm s1 = schur_decompose(a);
  const SchurForm s2 = schur_decompose(a);
  EXPECT_EQ(s1.q, s2.q);
  EXPECT_EQ(s1.t, s2.t);
}

}  // namespace
}  // namespace expnet
