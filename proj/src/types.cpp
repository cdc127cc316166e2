#include "gfrft/types.hpp"

#include <algorithm>
#include <string>

namespace gfrft {

IndexSet::IndexSet(std::vector<Index> indices, Index universe)
    : indices_(std::move(indices)), universe_(universe) {
  if (universe < 0) {
    throw InvalidArgument("IndexSet: negative universe");
  }
  std::sort(indices_.begin(), indices_.end());
  for (size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= universe_) {
      throw InvalidArgument("IndexSet: index " + std::to_string(indices_[i]) +
                            " outside universe of size " + std::to_string(universe_));
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw InvalidArgument("IndexSet: duplicate index " + std::to_string(indices_[i]));
    }
  }
}

IndexSet IndexSet::first(Index k, Index universe) {
  if (k < 0 || k > universe) {
    throw InvalidArgument("IndexSet::first: k outside [0, universe]");
  }
  std::vector<Index> idx(static_cast<size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  return IndexSet(std::move(idx), universe);
}

bool IndexSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSet IndexSet::complement() const {
  std::vector<Index> out;
  out.reserve(static_cast<size_t>(universe_ - size()));
  size_t k = 0;
  for (Index i = 0; i < universe_; ++i) {
    if (k < indices_.size() && indices_[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return IndexSet(std::move(out), universe_);
}

IndexSet IndexSet::with(Index extra) const {
  std::vector<Index> out = indices_;
  out.push_back(extra);
  return IndexSet(std::move(out), universe_);
}

CVector gather(const CVector& x, const IndexSet& s) {
  if (x.size() != s.universe()) {
    throw DimensionMismatch("gather: vector length does not match index universe");
  }
  CVector out(s.size());
  for (Index k = 0; k < s.size(); ++k) out(k) = x(s[k]);
  return out;
}

}  // namespace gfrft
