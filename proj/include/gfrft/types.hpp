#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gfrft/errors.hpp"

namespace gfrft {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Result of an eigendecomposition. vectors.col(j) pairs with values(j); both
// follow the producing routine's deterministic ordering (ascending real parts
// for Hermitian input, ascending principal argument for unitary input) and
// phase convention (largest-magnitude entry of each column real positive,
// lowest index on magnitude ties).
struct EigenPair {
  CVector values;
  CMatrix vectors;
};

// Strictly increasing indices inside a universe {0, ..., universe-1}.
// Used both for vertex subsets S and frequency subsets F.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<Index> indices, Index universe);

  // {0, ..., k-1}
  static IndexSet first(Index k, Index universe);
  static IndexSet all(Index universe) { return first(universe, universe); }

  Index universe() const { return universe_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  Index operator[](Index k) const { return indices_[static_cast<size_t>(k)]; }
  const std::vector<Index>& indices() const { return indices_; }

  bool contains(Index i) const;
  IndexSet complement() const;
  IndexSet with(Index extra) const;  // copy with one more element

  bool operator==(const IndexSet& other) const {
    return universe_ == other.universe_ && indices_ == other.indices_;
  }

 private:
  std::vector<Index> indices_;
  Index universe_ = 0;
};

// Gather x at the given indices, preserving ascending index order.
CVector gather(const CVector& x, const IndexSet& s);

}  // namespace gfrft
