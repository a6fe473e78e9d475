#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mmfd/linops.hpp"

namespace {

using mmfd::from_triplets;
using mmfd::SparseMatrix;
using mmfd::Triplet;
using mmfd::Vector;

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& a) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) t.emplace_back(i, j, a(i, j));
    }
  }
  return from_triplets(a.rows(), a.cols(), t);
}

TEST(Solve, Identity) {
  Vector b(3);
  b << 1, 2, 3;
  const Vector x = mmfd::solve_sparse(mmfd::sparse_identity(3), b);
  EXPECT_EQ(x, b);
}

TEST(Solve, Tridiagonal) {
  Eigen::MatrixXd a(3, 3);
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  Vector b(3);
  b << 1, 0, 0;
  const Vector x = mmfd::solve_sparse(dense_to_sparse(a), b);
  EXPECT_NEAR(x[0], 0.75, 1e-15);
  EXPECT_NEAR(x[1], 0.5, 1e-15);
  EXPECT_NEAR(x[2], 0.25, 1e-15);
}

TEST(Solve, SingularReportsPivot) {
  Vector b(1);
  b << 1;
  const SparseMatrix z = from_triplets(1, 1, {Triplet(0, 0, 0.0)});
  EXPECT_THROW(mmfd::solve_sparse(z, b), mmfd::SingularSystem);
  try {
    mmfd::solve_sparse(z, b);
  } catch (const mmfd::SingularSystem& e) {
    EXPECT_EQ(e.pivot, 0u);
  }
}

TEST(Solve, DimensionMismatch) {
  EXPECT_THROW(mmfd::solve_sparse(mmfd::sparse_identity(3), Vector::Ones(2)), mmfd::DimensionMismatch);
}

TEST(Solve, RandomDiagonallyDominantResidual) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index n : {10, 200, 5000}) {
    std::vector<Triplet> t;
    std::uniform_int_distribution<Eigen::Index> col(0, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      for (int k = 0; k < 6; ++k) {
        const double v = u(rng);
        t.emplace_back(i, col(rng), v);
        row += std::abs(v);
      }
      t.emplace_back(i, i, row + 1.0);
    }
    const SparseMatrix a = from_triplets(n, n, t);
    Vector b(n);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = u(rng) * 10.0;
    const Vector x = mmfd::solve_sparse(a, b);
    const double res = (a * x - b).cwiseAbs().maxCoeff();
    EXPECT_LE(res, 1e-10 * (1.0 + b.cwiseAbs().maxCoeff())) << "n=" << n;
  }
}

TEST(Triplets, DuplicatesAreSummed) {
  const SparseMatrix a = from_triplets(2, 2, {Triplet(0, 1, 1.5), Triplet(0, 1, 2.0)});
  EXPECT_DOUBLE_EQ(a.coeff(0, 1), 3.5);
  EXPECT_THROW(from_triplets(2, 2, {Triplet(2, 0, 1.0)}), mmfd::OutOfRange);
}

TEST(Eig, Examples) {
  const SparseMatrix d = from_triplets(2, 2, {Triplet(0, 0, -1.0), Triplet(1, 1, -2.0)});
  EXPECT_NEAR(mmfd::max_symmetric_eig(d), -1.0, 1e-12);
  const SparseMatrix skew = from_triplets(2, 2, {Triplet(0, 1, 1.0), Triplet(1, 0, -1.0)});
  EXPECT_NEAR(mmfd::max_symmetric_eig(skew), 0.0, 1e-12);
  const SparseMatrix c =
      from_triplets(2, 2, {Triplet(0, 0, -2.0), Triplet(0, 1, 3.0), Triplet(1, 1, -2.0)});
  EXPECT_NEAR(mmfd::max_symmetric_eig(c), -0.5, 1e-12);
}

TEST(Eig, TransposeInvariantAndPowerIterationPath) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index n : {50, 300}) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = u(rng);
    }
    const SparseMatrix s = dense_to_sparse(a);
    const SparseMatrix st = s.transpose();
    const double e1 = mmfd::max_symmetric_eig(s);
    EXPECT_NEAR(e1, mmfd::max_symmetric_eig(st), 1e-10);
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().maxCoeff();
    EXPECT_NEAR(e1, ref, 1e-8 * std::abs(ref));
  }
  // Shifted power iteration for a large negative semidefinite tridiagonal.
  const Eigen::Index n = 2500;
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, -2.0 - 1.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, 1.0);
      t.emplace_back(i + 1, i, 1.0);
    }
  }
  const double big = mmfd::max_symmetric_eig(from_triplets(n, n, t), 2000);
  EXPECT_LE(big, -1.0 + 1e-6);
  EXPECT_GE(big, -1.0 - 1e-3);
}

TEST(Mass, PositivityCheck) {
  Vector m(3);
  m << 1.0, 0.0, 2.0;
  EXPECT_THROW(mmfd::require_positive_mass(m, 0.5), mmfd::DegenerateMesh);
  m[1] = 0.1;
  EXPECT_NO_THROW(mmfd::require_positive_mass(m, 0.5));
  const mmfd::DiagonalMatrix d{m};
  EXPECT_NEAR(d.sqrt().entries[2], std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.inverse().entries[1], 10.0, 1e-14);
}

}  // namespace
