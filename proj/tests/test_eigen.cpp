#include "oracle_values.hpp"

#include "tdefl/eigen_sym.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

using namespace tdefl;

namespace {

Matrix random_symmetric(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  return 0.5 * (a + a.transpose());
}

TEST(Jacobi, MatchesFrozenReferenceSpectrum) {
  const int n = 12;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 1.0 / (1.0 + std::abs(i - j)) + std::cos(i * j) / (i + j + 1.0);
  const SymEigenResult r = jacobi_eigen(a);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(r.values[i], oracle::kEigenvalues12[i], 1e-9) << i;
}

TEST(Jacobi, AgreesWithEigenSolverUpToThirty) {
  for (Index n : {1, 2, 7, 16, 30}) {
    const Matrix a = random_symmetric(n, 100 + n);
    const SymEigenResult r = jacobi_eigen(a);
    const Eigen::SelfAdjointEigenSolver<Matrix> ref(a, Eigen::EigenvaluesOnly);
    EXPECT_LT((r.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9) << n;
  }
}

TEST(Jacobi, VectorsDiagonalise) {
  const Matrix a = random_symmetric(20, 5);
  const SymEigenResult r = jacobi_eigen(a);
  const Matrix& v = r.vectors;
  EXPECT_LT((v.transpose() * v - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((a * v - v * r.values.asDiagonal()).cwiseAbs().maxCoeff(), 1e-10);
  for (Index i = 1; i < 20; ++i) EXPECT_LE(r.values[i - 1], r.values[i]);
}

TEST(Jacobi, DiagonalInputNeedsNoRotation) {
  const Matrix d = Vector{{3.0, -1.0, 2.0}}.asDiagonal();
  const SymEigenResult r = jacobi_eigen(d);
  EXPECT_EQ(r.values, (Vector{{-1.0, 2.0, 3.0}}));
}

TEST(Jacobi, LeadingEigenvector) {
  Matrix a = Matrix::Identity(4, 4);
  a(2, 2) = 5.0;
  const Vector v = leading_eigenvector(a);
  EXPECT_NEAR(std::abs(v[2]), 1.0, 1e-14);
}

TEST(Jacobi, RejectsBadInput) {
  EXPECT_THROW(jacobi_eigen(Matrix::Zero(2, 3)), DimensionError);
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = a(1, 0) = NAN;
  EXPECT_THROW(jacobi_eigen(a), NumericError);
}

}  // namespace
