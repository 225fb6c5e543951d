#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace evi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default tolerance for algebraic residuals (complementarity, membership,
/// matrix-equation residuals).
inline constexpr double kAlgebraicTol = 1e-9;

/// Default tolerance for trajectory-level checks (per-sample constraint
/// residuals, Lyapunov increments).
inline constexpr double kTrajectoryTol = 1e-6;

/// Rank cutoff used when splitting range/kernel of symmetric matrices.
inline constexpr double kRankCutoff = 1e-10;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

/// Orthonormal basis of the kernel of a symmetric matrix, eigenvalue
/// magnitudes below `cutoff` counted as zero. Columns are the basis.
inline Matrix symmetric_kernel_basis(const Matrix& S, double cutoff = kRankCutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  const Vector& ev = es.eigenvalues();
  Index k = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= cutoff) ++k;
  Matrix basis(S.rows(), k);
  Index col = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= cutoff) basis.col(col++) = es.eigenvectors().col(i);
  return basis;
}

/// Orthonormal basis of the range of a symmetric matrix (complement of the
/// kernel under the same cutoff).
inline Matrix symmetric_range_basis(const Matrix& S, double cutoff = kRankCutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  const Vector& ev = es.eigenvalues();
  Index k = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) ++k;
  Matrix basis(S.rows(), k);
  Index col = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) basis.col(col++) = es.eigenvectors().col(i);
  return basis;
}

inline double min_eigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  return es.eigenvalues().minCoeff();
}

inline double max_eigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  return es.eigenvalues().maxCoeff();
}

inline bool is_symmetric(const Matrix& S, double tol = 1e-12) {
  if (S.rows() != S.cols()) return false;
  return (S - S.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, S.cwiseAbs().maxCoeff());
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

inline Vector vec(const Matrix& A) {
  return Eigen::Map<const Vector>(A.data(), A.size());
}

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace detail

}  // namespace evi
