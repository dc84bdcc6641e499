#include <gtest/gtest.h>

#include "bilinrank/matrix.hpp"
#include "bilinrank/random.hpp"
#include "oracles.hpp"

using namespace bilinrank;

namespace {

double max_abs_diff(const DenseMatrix& a, const oracle::EMatrix& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

}  // namespace

TEST(DenseMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(DenseMatrix(0, 3), InvalidInput);
  EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), InvalidInput);
  EXPECT_THROW(DenseMatrix(1, 1, {Complex(std::nan(""), 0.0)}), InvalidInput);
  EXPECT_THROW(DenseMatrix::from_rows({{1.0, 2.0}, {3.0}}), InvalidInput);
}

TEST(DenseMatrix, KronMatchesDefinition) {
  const auto x = random_gaussian(3, 2, 11);
  const auto y = random_gaussian(2, 4, 12);
  const auto k = kron(x, y);
  ASSERT_EQ(k.rows(), 6u);
  ASSERT_EQ(k.cols(), 8u);
  EXPECT_EQ(max_abs_diff(k, oracle::kron_brute(oracle::to_eigen(x), oracle::to_eigen(y))), 0.0);
}

TEST(DenseMatrix, KronSmallIntegerExample) {
  const auto x = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const auto y = DenseMatrix::from_rows({{0.0, 5.0}, {6.0, 7.0}});
  const auto expected = DenseMatrix::from_rows({{0.0, 5.0, 0.0, 10.0},
                                                {6.0, 7.0, 12.0, 14.0},
                                                {0.0, 15.0, 0.0, 20.0},
                                                {18.0, 21.0, 24.0, 28.0}});
  EXPECT_EQ(kron(x, y), expected);
}

TEST(DenseMatrix, KronIsAssociativeOnIntegers) {
  const auto a = DenseMatrix::from_rows({{1.0, -2.0}, {0.0, 3.0}});
  const auto b = DenseMatrix::from_rows({{Complex(0, 1), 2.0, 1.0}});
  const auto c = DenseMatrix::from_rows({{2.0}, {Complex(1, -1)}});
  EXPECT_EQ(kron(kron(a, b), c), kron(a, kron(b, c)));
}

TEST(DenseMatrix, KronEnforcesDimensionCap) {
  const auto x = DenseMatrix::identity(8);
  EXPECT_THROW(kron(x, x, 63), InvalidInput);
  EXPECT_NO_THROW(kron(x, x, 64));
}

TEST(DenseMatrix, VecStacksColumns) {
  const auto x = DenseMatrix::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
  const auto v = vec(x);
  ASSERT_EQ(v.rows(), 6u);
  ASSERT_EQ(v.cols(), 1u);
  const double expected[] = {1, 4, 2, 5, 3, 6};
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(v(k, 0), Complex(expected[k]));
}

TEST(DenseMatrix, RandomUnitaryIsUnitary) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto u = random_unitary(12, seed);
    EXPECT_LT(frobenius_distance(adjoint(u) * u, DenseMatrix::identity(12)), 1e-13);
    EXPECT_LT(frobenius_distance(u * adjoint(u), DenseMatrix::identity(12)), 1e-13);
  }
  EXPECT_EQ(random_unitary(5, 3), random_unitary(5, 3));
  EXPECT_NE(random_unitary(5, 3), random_unitary(5, 4));
}

TEST(DenseMatrix, HermitianPartIsExactlyHermitian) {
  const auto h = hermitian_part(random_gaussian(7, 7, 5));
  EXPECT_EQ(hermitian_deviation(h), 0.0);
  EXPECT_EQ(h, adjoint(h));
}

TEST(DenseMatrix, MultiplyMatchesEigen) {
  const auto a = random_gaussian(5, 7, 1);
  const auto b = random_gaussian(7, 3, 2);
  const oracle::EMatrix ref = oracle::to_eigen(a) * oracle::to_eigen(b);
  EXPECT_LT(max_abs_diff(a * b, ref), 1e-13);
  EXPECT_THROW(multiply(a, a), InvalidInput);
}

TEST(DenseMatrix, TraceAndNorms) {
  const auto m = DenseMatrix::from_rows({{1.0, Complex(0, 2)}, {3.0, Complex(4, 0)}});
  EXPECT_EQ(trace(m), Complex(5.0, 0.0));
  EXPECT_DOUBLE_EQ(frobenius_norm(m), std::sqrt(1.0 + 4.0 + 9.0 + 16.0));
  EXPECT_EQ(frobenius_distance(m, m), 0.0);
}

TEST(Rng, DeterministicAndMoments) {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.normal(), b.normal());
  Rng rng(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(rng.below(7), 7u);
  EXPECT_NE(mix_seed(1, 2), mix_seed(1, 3));
}
