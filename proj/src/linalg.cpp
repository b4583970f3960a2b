#include "qcs/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcs {

IndexSet top_support(const Vector& x, std::size_t k) {
  const auto n = static_cast<std::size_t>(x.size());
  if (k == 0 || k > n) throw InvalidArgument("top_support: sparsity must be in [1, length(x)]");
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  const auto larger = [&x](Index a, Index b) {
    const double ma = std::abs(x[a]);
    const double mb = std::abs(x[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), larger);
  order.resize(k);
  return IndexSet(std::move(order));
}

Vector hard_threshold(const Vector& x, std::size_t k) {
  const IndexSet keep = top_support(x, k);
  Vector out = Vector::Zero(x.size());
  for (Index i : keep) out[i] = x[i];
  return out;
}

Matrix restrict_columns(const Matrix& phi, const IndexSet& cols) {
  if (cols.max() >= phi.cols()) throw InvalidArgument("restrict_columns: index out of range");
  Matrix out(phi.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = phi.col(cols[j]);
  return out;
}

Vector embed(const Vector& coeffs, const IndexSet& cols, Index n) {
  if (static_cast<std::size_t>(coeffs.size()) != cols.size()) throw InvalidArgument("embed: size mismatch");
  if (cols.max() >= n) throw InvalidArgument("embed: index out of range");
  Vector out = Vector::Zero(n);
  for (std::size_t j = 0; j < cols.size(); ++j) out[cols[j]] = coeffs[static_cast<Index>(j)];
  return out;
}

Vector apply_sparse(const Matrix& phi, const Vector& x) {
  if (phi.cols() != x.size()) throw InvalidArgument("apply_sparse: dimension mismatch");
  Vector out = Vector::Zero(phi.rows());
  for (Index j = 0; j < x.size(); ++j)
    if (x[j] != 0.0) out.noalias() += x[j] * phi.col(j);
  return out;
}

LeastSquares::LeastSquares(const Matrix& a) : rows_(a.rows()), cols_(a.cols()) {
  if (cols_ > 0) cod_.compute(a);
}

Vector LeastSquares::solve(const Vector& b) const {
  if (b.size() != rows_) throw InvalidArgument("least_squares: rows(A) != length(b)");
  if (cols_ == 0) return Vector(0);
  return cod_.solve(b);
}

Vector least_squares(const Matrix& a, const Vector& b) { return LeastSquares(a).solve(b); }

Vector normalize(const Vector& x) {
  const double nrm = x.norm();
  if (nrm == 0.0) return x;
  return x / nrm;
}

double operator_norm(const Matrix& phi, double tolerance, int max_iterations) {
  if (!(tolerance > 0.0)) throw InvalidArgument("operator_norm: tolerance must be positive");
  if (phi.size() == 0) return 0.0;
  Vector v = Vector::Constant(phi.cols(), 1.0 / std::sqrt(static_cast<double>(phi.cols())));
  double estimate = (phi * v).norm();
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = phi.transpose() * (phi * v);
    const double wn = w.norm();
    if (wn == 0.0) return estimate;
    v = w / wn;
    const double next = (phi * v).norm();
    if (std::abs(next - estimate) <= tolerance * next) return next;
    estimate = next;
  }
  return estimate;
}

double operator_norm_lanczos(const Matrix& phi, double tolerance, int max_steps) {
  if (phi.size() == 0) return 0.0;
  const Index n = phi.cols();
  const int steps = static_cast<int>(std::min<Index>(max_steps, n));
  Matrix basis(n, steps);
  std::vector<double> alpha, beta;
  Vector q = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double previous = -1.0;
  double estimate = 0.0;
  for (int j = 0; j < steps; ++j) {
    basis.col(j) = q;
    Vector w = phi.transpose() * (phi * q);
    alpha.push_back(q.dot(w));
    // Full reorthogonalization against every stored Lanczos vector.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[static_cast<std::size_t>(i - 1)];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri, Eigen::EigenvaluesOnly);
    estimate = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    const double b = w.norm();
    if (b <= 1e-14 * std::max(1.0, std::abs(alpha.back()))) break;
    if (previous >= 0.0 && std::abs(estimate - previous) <= tolerance * estimate) break;
    previous = estimate;
    beta.push_back(b);
    q = w / b;
  }
  return estimate;
}

}  // namespace qcs
