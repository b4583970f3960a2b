#pragma once

#include "qcs/types.hpp"

#include <Eigen/QR>

namespace qcs {

/// Indices of the K largest-magnitude entries of x; ties go to the lower index.
IndexSet top_support(const Vector& x, std::size_t k);

/// eta_K: keeps x on top_support(x, k), zeroes everything else.
Vector hard_threshold(const Vector& x, std::size_t k);

/// Columns of phi selected by cols, in cols order.
Matrix restrict_columns(const Matrix& phi, const IndexSet& cols);

/// Embeds coefficients over cols into a zero vector of length n.
Vector embed(const Vector& coeffs, const IndexSet& cols, Index n);

/// phi * x, touching only the columns where x is nonzero.
Vector apply_sparse(const Matrix& phi, const Vector& x);

/// Minimum-norm least-squares solve, reusable for many right-hand sides.
class LeastSquares {
 public:
  explicit LeastSquares(const Matrix& a);
  [[nodiscard]] Vector solve(const Vector& b) const;
  [[nodiscard]] Index rows() const { return rows_; }
  [[nodiscard]] Index cols() const { return cols_; }

 private:
  Index rows_;
  Index cols_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
};

/// Minimum-norm solution of min ||b - A x||_2 (pseudo-inverse applied to b).
Vector least_squares(const Matrix& a, const Vector& b);

/// Unit l2 vector in the direction of x; the zero vector maps to itself.
Vector normalize(const Vector& x);

/// Largest singular value of phi by power iteration on phi^T phi.
/// Stops when successive estimates agree to `tolerance` relative.
double operator_norm(const Matrix& phi, double tolerance = 1e-6, int max_iterations = 10000);

/// Largest singular value of phi from Lanczos on phi^T phi with full
/// reorthogonalization. Converges in far fewer products than power iteration
/// when the top singular values are clustered, as for Gaussian matrices.
double operator_norm_lanczos(const Matrix& phi, double tolerance = 1e-12, int max_steps = 100);

}  // namespace qcs
