#include "qcs/types.hpp"

#include <algorithm>
#include <iterator>

namespace qcs {

IndexSet::IndexSet(std::vector<Index> idx) : idx_(std::move(idx)) {
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  if (!idx_.empty() && idx_.front() < 0) throw InvalidArgument("IndexSet: negative index");
}

IndexSet IndexSet::range(Index n) {
  IndexSet out;
  out.idx_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.idx_[static_cast<std::size_t>(i)] = i;
  return out;
}

bool IndexSet::contains(Index i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

IndexSet IndexSet::unite(const IndexSet& other) const {
  IndexSet out;
  out.idx_.reserve(idx_.size() + other.idx_.size());
  std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                 std::back_inserter(out.idx_));
  return out;
}

IndexSet support_of(const Vector& x) {
  std::vector<Index> idx;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) idx.push_back(i);
  return IndexSet(std::move(idx));
}

}  // namespace qcs
