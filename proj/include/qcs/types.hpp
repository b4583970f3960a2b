#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when inputs violate an operation's preconditions (dimension
/// mismatch, out-of-range sparsity, values that are not quantizer levels).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sorted set of distinct zero-based column (or row) indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<Index> idx) : IndexSet(std::vector<Index>(idx)) {}
  /// Sorts and deduplicates.
  explicit IndexSet(std::vector<Index> idx);

  static IndexSet range(Index n);

  [[nodiscard]] std::size_t size() const { return idx_.size(); }
  [[nodiscard]] bool empty() const { return idx_.empty(); }
  [[nodiscard]] Index operator[](std::size_t i) const { return idx_[i]; }
  [[nodiscard]] auto begin() const { return idx_.begin(); }
  [[nodiscard]] auto end() const { return idx_.end(); }
  [[nodiscard]] const std::vector<Index>& indices() const { return idx_; }
  [[nodiscard]] bool contains(Index i) const;
  /// Largest index, or -1 when empty.
  [[nodiscard]] Index max() const { return idx_.empty() ? -1 : idx_.back(); }

  [[nodiscard]] IndexSet unite(const IndexSet& other) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> idx_;
};

/// Indices of the nonzero entries of x.
IndexSet support_of(const Vector& x);

}  // namespace qcs
