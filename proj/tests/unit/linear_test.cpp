#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subalign/errors.hpp"
#include "subalign/linear.hpp"

namespace subalign {
namespace {

TEST(Pca, VarianceAlongFirstAxis) {
  Matrix data(2, 2);
  data << 1, 0, -1, 0;
  const Subspace s = pca(data, 1);
  EXPECT_NEAR(s.basis()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(s.basis()(1, 0), 0.0, 1e-12);
}

TEST(Pca, DiagonalDirection) {
  Matrix data(2, 2);
  data << 1, 1, -1, -1;
  const Subspace s = pca(data, 1);
  EXPECT_NEAR(s.basis()(0, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.basis()(1, 0), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Pca, MatchesCovarianceEigenvectors) {
  std::mt19937_64 rng(11);
  // Distinct column scales keep the eigenvalues well separated.
  Matrix data = oracle::random_matrix(rng, 20, 5);
  for (Eigen::Index j = 0; j < 5; ++j) data.col(j) *= 1.0 + 0.7 * j;
  const Subspace s = pca(data, 3);
  EXPECT_TRUE(oracle::same_columns_up_to_sign(
      s.basis(), oracle::covariance_pca(data, 3), 1e-8));
}

TEST(Pca, SignCanonicalization) {
  std::mt19937_64 rng(5);
  const Matrix data = oracle::random_matrix(rng, 30, 6);
  const Matrix basis = pca(data, 4).basis();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(basis(arg, j), 0.0);
  }
  // Negating the data flips the principal axes; canonical signs undo that.
  EXPECT_LT((pca(-data, 4).basis() - basis).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pca, RejectsBadDimension) {
  const Matrix data = Matrix::Random(4, 3);
  EXPECT_THROW(pca(data, 0), DimensionError);
  EXPECT_THROW(pca(data, 4), DimensionError);
  EXPECT_THROW(pca(Matrix::Random(2, 5), 3), DimensionError);
}

TEST(Pca, RejectsDegenerateAndNonFinite) {
  Matrix constant = Matrix::Constant(5, 3, 2.5);
  EXPECT_THROW(pca(constant, 1), DegenerateData);
  Matrix bad = Matrix::Random(5, 3);
  bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(pca(bad, 1), FiniteCheck);
}

TEST(Pca, BasisIsOrthonormalForRandomShapes) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(2, 25);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = size(rng);
    const int d = size(rng);
    std::uniform_int_distribution<int> dims(1, std::min(n, d));
    const Matrix data = oracle::random_matrix(rng, n, d);
    const Matrix p = pca(data, dims(rng)).basis();
    const Matrix gram = p.transpose() * p;
    EXPECT_LE((gram - Matrix::Identity(p.cols(), p.cols())).norm(), 1e-8)
        << n << "x" << d;
  }
}

TEST(Pca, ReconstructionIsOptimal) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix data = oracle::random_matrix(rng, 12, 6);
    const Matrix centered = data.rowwise() - data.colwise().mean();
    const Matrix p = pca(data, 2).basis();
    const double best = (centered - centered * p * p.transpose()).norm();
    for (int q_trial = 0; q_trial < 20; ++q_trial) {
      const Matrix q = oracle::random_orthonormal(rng, 6, 2);
      EXPECT_LE(best, (centered - centered * q * q.transpose()).norm() + 1e-8);
    }
  }
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
  Matrix b(3, 2);
  b << 1, 1, 0, 0, 0, 1;
  EXPECT_THROW(Subspace{b}, DimensionError);
  EXPECT_THROW(Subspace{Matrix(2, 3)}, DimensionError);
}

TEST(FrobeniusNorm, Basics) {
  EXPECT_EQ(frobenius_norm(Matrix::Zero(3, 4)), 0.0);
  EXPECT_NEAR(frobenius_norm(Matrix::Identity(2, 2)), std::sqrt(2.0), 1e-15);
}

TEST(FrobeniusNorm, MatchesTraceIdentity) {
  std::mt19937_64 rng(21);
  const Matrix m = oracle::random_matrix(rng, 4, 3);
  EXPECT_NEAR(frobenius_norm(m), oracle::trace_norm(m), 1e-12);
}

TEST(FrobeniusNorm, AbsolutelyHomogeneous) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = oracle::random_matrix(rng, 3, 5);
    const double c = scale(rng);
    EXPECT_NEAR(frobenius_norm(c * m), std::abs(c) * frobenius_norm(m), 1e-12);
  }
}

TEST(Standardize, ConstantColumnBecomesZero) {
  Matrix data(4, 2);
  data << 0.1, 1, 0.1, 2, 0.1, 3, 0.1, 4;
  const auto [out, stats] = standardize(data);
  EXPECT_LE(out.col(0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(stats.mean(0), 0.1, 1e-15);
}

TEST(Standardize, UnitColumnUnchanged) {
  Matrix data(4, 1);
  data << 1, -1, 1, -1;  // mean 0, population std 1
  const auto [out, stats] = standardize(data);
  EXPECT_LE((out - data).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Standardize, MomentsMatchOracle) {
  std::mt19937_64 rng(4);
  Matrix data = oracle::random_matrix(rng, 10, 4, 3.0);
  data.array() += 7.0;
  const Matrix out = standardize(data).first;
  const oracle::Vec mean = oracle::column_means(out);
  const oracle::Vec sd = oracle::column_stds(out);
  for (Eigen::Index j = 0; j < 4; ++j) {
    EXPECT_NEAR(mean(j), 0.0, 1e-10);
    EXPECT_NEAR(sd(j), 1.0, 1e-10);
  }
}

TEST(Standardize, ReusesGivenStats) {
  std::mt19937_64 rng(6);
  const Matrix a = oracle::random_matrix(rng, 8, 3);
  const Matrix b = oracle::random_matrix(rng, 5, 3);
  const auto [a_std, stats] = standardize(a);
  const Matrix b_std = standardize(b, stats).first;
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(b_std(0, j), (b(0, j) - stats.mean(j)) / stats.stddev(j), 1e-14);
  }
  EXPECT_THROW(standardize(Matrix::Random(2, 4), stats), DimensionError);
}

}  // namespace
}  // namespace subalign
