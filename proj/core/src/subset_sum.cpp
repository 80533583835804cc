#include "golomb/subset_sum.hpp"

#include <algorithm>
#include <numeric>

namespace golomb {

std::optional<SubsetSumCut> separate_subset_sum(const std::vector<Rat>& point) {
  int p = static_cast<int>(point.size());
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return point[a] < point[b]; });

  // Most violated under the rhs-normalized measure (a sparser cut wins ties,
  // and the ascending scan keeps the smallest such k).
  Rat prefix(0);
  Rat best_ratio(0);
  Rat best_violation(0);
  int best_k = 0;
  for (int k = 1; k <= p; ++k) {
    prefix += point[order[k - 1]];
    Rat rhs(static_cast<long>(k) * (k + 1) / 2);
    Rat violation = rhs - prefix;
    if (violation <= 0) continue;
    Rat ratio = violation / rhs;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_violation = violation;
      best_k = k;
    }
  }
  if (best_k == 0) return std::nullopt;

  SubsetSumCut cut;
  cut.pair_indices.assign(order.begin(), order.begin() + best_k);
  std::sort(cut.pair_indices.begin(), cut.pair_indices.end());
  cut.rhs = static_cast<long long>(best_k) * (best_k + 1) / 2;
  cut.violation = best_violation;
  return cut;
}

}  // namespace golomb
