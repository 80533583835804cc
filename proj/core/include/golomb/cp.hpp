#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "golomb/bounds.hpp"
#include "golomb/ruler.hpp"
#include "golomb/stats.hpp"

namespace golomb::cp {

// Finite set of integers in [0, cap], bitset-backed with cached bounds.
// Fixed-width storage keeps DomainStore snapshots allocation-free.
class Domain {
 public:
  static constexpr int kWords = 4;
  static constexpr int kMaxValue = kWords * 64 - 1;

  Domain() = default;
  Domain(int lo, int hi, int cap);

  bool empty() const { return count_ == 0; }
  int size() const { return count_; }
  bool singleton() const { return count_ == 1; }
  int min() const { return min_; }
  int max() const { return max_; }
  bool contains(int v) const {
    return v >= 0 && v <= cap_ && ((words_[v >> 6] >> (v & 63)) & 1u);
  }
  // Smallest member >= v / largest member <= v, or -1.
  int next_value(int v) const;
  int prev_value(int v) const;

  // Mutators report whether the domain shrank; they may empty it.
  bool remove(int v);
  bool remove_below(int v);
  bool remove_above(int v);
  bool assign(int v);

  std::vector<int> values() const;
  bool operator==(const Domain&) const = default;

 private:
  void recount();

  int cap_ = -1;
  int min_ = 1, max_ = 0;
  int count_ = 0;
  std::array<std::uint64_t, kWords> words_{};
};

// One domain per mark pair plus a fail flag; snapshots give backtracking.
struct DomainStore {
  int n = 0;
  bool failed = false;
  std::vector<Domain> doms;  // indexed by PairSpace(n)

  DomainStore() = default;
  explicit DomainStore(const BoundsTable& bounds);

  Domain& dom(int i, int j) { return doms[PairSpace(n).index(i, j)]; }
  const Domain& dom(int i, int j) const { return doms[PairSpace(n).index(i, j)]; }
};

enum class Prop { Fail, Fixpoint, Changed };

// Bounds-consistency via Hall intervals plus removal of assigned values;
// runs to its local fixpoint.
Prop propagate_alldiff(DomainStore& store);

// Interval reasoning on d_ij + d_jk = d_ik for every i<j<k, to fixpoint.
Prop propagate_triangle(DomainStore& store);

// Consecutive-gap triplets over marks i..i+3 that provably cannot extend to a
// 5th mark within the bounds.
struct ForbiddenTable {
  int window_start = 0;                       // i, windows run 1..n-4
  std::vector<std::array<int, 3>> forbidden;  // sorted (d_i,i+1, d_i+1,i+2, d_i+2,i+3)
};

std::vector<ForbiddenTable> build_forbidden_tables(const BoundsTable& bounds, int rounds);

struct SearchConfig {
  enum class Mode { Optimize, Feasibility };
  enum class ValueOrder { Ascending, Impact };

  Mode mode = Mode::Optimize;
  ValueOrder value_order = ValueOrder::Ascending;
  // Mirror symmetry d_{1,2} <= d_{n-1,n}; must stay off in shaving probes,
  // whose conclusions have to cover both orientations.
  bool symmetry_break = true;
  Budget budget;  // zero limits mean unlimited here
};

enum class SearchStatus { Optimal, Feasible, Infeasible, Unknown };

struct CpResult {
  SearchStatus status = SearchStatus::Unknown;
  int length = std::numeric_limits<int>::max();
  std::optional<Ruler> ruler;
  SolveStats stats;
};

// Depth-first search branching on consecutive gaps left to right with full
// propagation at every node.  Optimize mode proves min d_{1,n} or infeasibility
// within length <= bounds.length; feasibility mode stops at the first ruler.
CpResult search(const BoundsTable& bounds, const std::vector<ForbiddenTable>& tables,
                const SearchConfig& config);

}  // namespace golomb::cp
