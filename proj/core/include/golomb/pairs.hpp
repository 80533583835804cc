#pragma once

#include <cassert>
#include <utility>
#include <vector>

namespace golomb {

// Dense indexing of mark pairs (i,j), 1 <= i < j <= n.  Marks are 1-based
// throughout the distance formulations; rulers store 0-based positions.
class PairSpace {
 public:
  explicit PairSpace(int n) : n_(n) { assert(n >= 1); }

  int n() const { return n_; }
  int size() const { return n_ * (n_ - 1) / 2; }

  int index(int i, int j) const {
    assert(1 <= i && i < j && j <= n_);
    // Pairs ordered lexicographically: (1,2),(1,3),...,(1,n),(2,3),...
    return (i - 1) * (2 * n_ - i) / 2 + (j - i - 1);
  }

  std::pair<int, int> pair_of(int idx) const {
    assert(0 <= idx && idx < size());
    int i = 1;
    while (idx >= n_ - i) {
      idx -= n_ - i;
      ++i;
    }
    return {i, i + 1 + idx};
  }

  bool consecutive(int idx) const {
    auto [i, j] = pair_of(idx);
    return j == i + 1;
  }

 private:
  int n_;
};

}  // namespace golomb
