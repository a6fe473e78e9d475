#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mmfd/errors.hpp"

namespace mmfd {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Diagonal matrix stored as its entries.
struct DiagonalMatrix {
  Vector entries;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(entries.size()); }
  [[nodiscard]] DiagonalMatrix sqrt() const { return {entries.array().sqrt().matrix()}; }
  [[nodiscard]] DiagonalMatrix inverse() const { return {entries.cwiseInverse()}; }
};

/// Throws DegenerateMesh at the first nonpositive entry.
inline void require_positive_mass(const Vector& mass, double t) {
  for (Eigen::Index i = 0; i < mass.size(); ++i) {
    if (!(mass[i] > 0.0)) throw DegenerateMesh(static_cast<std::size_t>(i), t, mass[i]);
  }
}

/// Builds a rows x cols sparse matrix; duplicate triplets are summed.
inline SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols,
                                  const std::vector<Triplet>& triplets) {
  SparseMatrix a(rows, cols);
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols) {
      throw OutOfRange("triplet (" + std::to_string(t.row()) + "," + std::to_string(t.col()) +
                       ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

/// Largest absolute entry; zero for an empty matrix.
inline double max_abs_entry(const SparseMatrix& a) {
  double v = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) v = std::max(v, std::abs(it.value()));
  }
  return v;
}

/// Solves A x = b by sparse LU with partial (threshold) pivoting.
inline Vector solve_sparse(const SparseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("solve_sparse: matrix not square");
  if (a.rows() != b.size()) throw DimensionMismatch("solve_sparse: rhs length mismatch");
  SparseMatrix work = a;
  work.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(work);
  lu.factorize(work);
  if (lu.info() != Eigen::Success) {
    // Eigen reports the failing column (1-based) in the column-permuted order.
    const std::string msg = lu.lastErrorMessage();
    std::size_t pivot = 0;
    const auto pos = msg.find_last_of(' ');
    if (pos != std::string::npos) {
      try {
        const long permuted = std::stol(msg.substr(pos + 1)) - 1;
        const auto& perm = lu.colsPermutation().indices();
        pivot = static_cast<std::size_t>(permuted);
        for (Eigen::Index c = 0; c < perm.size(); ++c) {
          if (perm[c] == permuted) {
            pivot = static_cast<std::size_t>(c);
            break;
          }
        }
      } catch (const std::exception&) {
        pivot = 0;
      }
    }
    throw SingularSystem(pivot, msg);
  }
  Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SingularSystem(0, "solve produced non-finite values");
  }
  return x;
}

/// Largest eigenvalue of the symmetric part (C + C^T)/2.
///
/// Dense symmetric eigensolve up to `dense_limit` unknowns; beyond that a
/// Gershgorin-shifted power iteration (200 iterations, tolerance 1e-9).
inline double max_symmetric_eig(const SparseMatrix& c, Eigen::Index dense_limit = 2000) {
  if (c.rows() != c.cols()) throw DimensionMismatch("max_symmetric_eig: matrix not square");
  const Eigen::Index n = c.rows();
  if (n == 0) return 0.0;
  SparseMatrix ct = c.transpose();
  SparseMatrix sym = 0.5 * (c + ct);
  if (n <= dense_limit) {
    Eigen::MatrixXd dense = Eigen::MatrixXd(sym);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  // Shift so that sym + sigma I is positive semidefinite; its dominant
  // eigenvalue is then the largest one of sym, shifted.
  double sigma = 0.0;
  Vector radius = Vector::Zero(n);
  Vector diag = Vector::Zero(n);
  for (int k = 0; k < sym.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(sym, k); it; ++it) {
      if (it.row() == it.col()) diag[it.row()] = it.value();
      else radius[it.row()] += std::abs(it.value());
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) sigma = std::max(sigma, radius[i] - diag[i]);
  Vector x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) x[i] *= 1.0 + 1e-3 * std::sin(static_cast<double>(i + 1));
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector y = sym * x + sigma * x;
    const double next = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) return -sigma;
    x = y / norm;
    if (it > 0 && std::abs(next - lambda) <= 1e-9 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - sigma;
}

}  // namespace mmfd
