#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "golomb/bounds.hpp"
#include "golomb/lp.hpp"
#include "golomb/rational.hpp"
#include "golomb/ruler.hpp"
#include "golomb/stats.hpp"
#include "golomb/subset_sum.hpp"

namespace golomb::dmilp {

enum class BranchStrategy { Left, Difference };

// Mark pair (i,j), 1-based, i < j; ordered like PairSpace.
using MarkPair = std::pair<int, int>;

// Path constraint d_a <= d_b - 1.  The complementary branch d_a >= d_b + 1 is
// the same shape with the roles swapped.
struct OrderConstraint {
  int a = 0, b = 0;  // PairSpace indices
  bool operator==(const OrderConstraint&) const = default;
};

// Branch-and-bound node: a per-pair bound box plus the ordering constraints
// and lazy subset-sum cuts accumulated on the path from the root.
struct DNode {
  std::vector<int> lower, upper;  // indexed by PairSpace(n)
  std::vector<OrderConstraint> ordering;
  std::vector<SubsetSumCut> cuts;
  Rat bound;  // proven lower bound on the subtree optimum
  int depth = 0;
  std::uint64_t id = 0;  // creation order; the best-first tie-break
};

DNode root_node(const BoundsTable& b);

// Near-equal pair of distance variables: smallest |v_A - v_B| <= 1 whose mark
// pairs share neither the left nor the right mark (pairs sharing a mark on the
// same side are already separated by at least a full gap through the chain
// identities).  Ties go to the lexicographically first (A, B); nullopt when
// every admissible pair differs by more than 1.
std::optional<std::pair<MarkPair, MarkPair>> difference_branch_select(
    const std::map<MarkPair, Rat>& point);

// One child per integer value of the leftmost consecutive gap not yet fixed in
// the node's box; empty when every gap is fixed.  A node without a box of its
// own branches over the table's.
std::vector<DNode> left_branch_children(const DNode& node, const BoundsTable& b);

// Value of the node's gap LP with subset-sum cuts separated to a fixpoint; the
// generated cuts are appended to the node in place.
struct NodeRelaxation {
  lp::LPStatus status = lp::LPStatus::Optimal;
  Rat bound;
  std::vector<Rat> pair_values;  // indexed by PairSpace(n)
  std::uint64_t cuts_added = 0;
};
NodeRelaxation solve_node_relaxation(DNode& node, int n);

enum class DStatus { Optimal, Infeasible, Unknown };

struct DResult {
  DStatus status = DStatus::Unknown;
  int length = 0;              // proven optimum when Optimal
  std::optional<Ruler> ruler;  // witness when Optimal; best incumbent when Unknown
  SolveStats stats;
};

// Best-bound-first branch and bound on the distance formulation.  Every node
// solves its relaxation with lazy subset-sum separation; an integral point
// whose pair values are all distinct becomes an incumbent, anything else
// branches by the chosen strategy.  Proves the optimum of length <= L inside
// the table's box, or infeasibility; a budget expiry returns Unknown with the
// incumbent found so far.
DResult solve_d_formulation(int n, int L, const BoundsTable& b, BranchStrategy strategy,
                            const Budget& budget = {});

}  // namespace golomb::dmilp
