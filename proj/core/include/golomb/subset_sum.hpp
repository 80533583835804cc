#pragma once

#include <optional>
#include <vector>

#include "golomb/pairs.hpp"
#include "golomb/rational.hpp"

namespace golomb {

// Any set R of pairwise distances of a Golomb ruler takes |R| distinct positive
// integer values, so sum_R d_ij >= |R|(|R|+1)/2.
struct SubsetSumCut {
  std::vector<int> pair_indices;  // ascending PairSpace indices
  long long rhs = 0;              // k(k+1)/2 for k = |pair_indices|
  Rat violation;                  // rhs - value at the separated point (> 0)
};

// Exact separation: sorting the point and testing every prefix of the k
// smallest values against k(k+1)/2 finds a most-violated member of the family
// or proves none is violated (minimizing sum_R d over |R| = k picks the k
// smallest values).  Ties are broken deterministically toward smaller k.
std::optional<SubsetSumCut> separate_subset_sum(const std::vector<Rat>& point);

}  // namespace golomb
