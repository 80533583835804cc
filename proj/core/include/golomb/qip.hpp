#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "golomb/bounds.hpp"
#include "golomb/lp.hpp"
#include "golomb/optima.hpp"
#include "golomb/rational.hpp"
#include "golomb/ruler.hpp"
#include "golomb/stats.hpp"

namespace golomb::qip {

// Mark-placement view: binary y_l per position l = 0..L, one iff a mark sits
// there.  y_0 is pinned to 1 (placements are translation-normalized), and the
// objective counts marks.
struct PlacementModel {
  int L = 0;       // last admissible position
  int target = 0;  // mark count sought
};

// The continuous relaxation: y in [0,1]^{L+1}, y_0 fixed, maximize sum y.
lp::LinearProgram placement_relaxation(const PlacementModel& model);

enum class CutFamily { Golomb, Clique, NoGood };

// One inequality sum coeff[i] * y[support[i]] <= rhs.  Window and clique cuts
// have unit coefficients; aggregate no-good cuts carry pair multiplicities and
// a fractional right-hand side.
struct Cut {
  CutFamily family = CutFamily::Golomb;
  std::vector<int> support;  // ascending positions
  std::vector<int> coeff;    // parallel to support
  Rat rhs;
  std::uint64_t hits = 0;  // times the cut entered a node relaxation
};

struct CutPool {
  std::vector<Cut> cuts;

  // One cut per line: family tag, support, coefficients, rhs.
  void dump(std::ostream& os) const;
};

// Window inequalities: k+1 marks span at least the optimal k+1-mark length w,
// so any w consecutive positions (span w-1 < w) hold at most k marks.  Table
// entries that are only lower bounds shrink the window, which keeps the
// inequality valid.  With `include_ap`, the same windows are emitted over
// arithmetic progressions of every stride c >= 2: marks there scale down to a
// consecutive window, so the bound carries over.
std::vector<Cut> golomb_cuts(int L, const OptimaTable& optima, bool include_ap);

// All maximal cliques of the simple undirected graph on vertices 0..vertices-1,
// each exactly once, by recursion with pivoting.  Clique members and the list
// itself are sorted ascending.
std::vector<std::vector<int>> bron_kerbosch(int vertices,
                                            const std::vector<std::pair<int, int>>& edges);

// Search node: marks placed from the left, the distances they use, and the cut
// sets active on the path.  The prefix is itself always Golomb.
struct QNode {
  std::vector<int> prefix;       // ascending positions, prefix[0] == 0
  std::vector<int> used;         // sorted pairwise distances of the prefix
  std::vector<int> window_cuts;  // active indices into the window template list
  std::vector<Cut> clique_cuts;  // node-local, valid under the prefix fixing
  Rat lp_value;
  int depth = 0;
};

// Clique cuts for a node relaxation point: the fixed marks induce a distance
// set D, fractional positions whose pairwise distance lies in D form a
// conflict graph, and every maximal clique of fractional weight > 1 yields
// sum y <= 1 - valid for every completion of this node's prefix, so the cuts
// stay local to the subtree.  Graphs with more than `max_fractional` vertices
// are skipped.
std::vector<Cut> separate_clique_cuts(const std::vector<Rat>& y, const QNode& node,
                                      int max_fractional = 200);

// Pairwise mode excludes each conflict by itself: marks {a,b} and {c,d}
// realizing the same distance cannot coexist, so their union sums to at most
// its size minus one.  Aggregate mode folds every conflict for a distance into
// one weighted row; that row can cut off feasible placements, so it is for
// experiments only and certification refuses it.
enum class NoGoodMode { Pairwise, Aggregate };

// Distance-conflict check for a binary placement (marks ascending).  feasible
// iff the placement is Golomb; otherwise at least one returned cut is violated
// by the placement itself (aggregate rows that miss it are backed up by the
// pairwise ones).
struct NoGoodSeparation {
  bool feasible = false;
  std::vector<Cut> cuts;
};
NoGoodSeparation benders_nogood_cuts(const std::vector<int>& marks, NoGoodMode mode);

// One child per admissible next-mark position v: inside the bounds window for
// the pair (1, m+1), past the last placed mark, and no distance v - l_k
// colliding with a used distance.  Children ascend by v.
std::vector<QNode> left_mark_branch(const QNode& node, const BoundsTable& b);

enum class SearchMode { OneTree, MultiTree };

struct QConfig {
  bool window_cuts = true;  // consecutive windows, separated lazily
  bool ap_cuts = false;     // arithmetic-progression windows as well
  bool clique_cuts = true;
  int clique_depth_cap = -1;  // nodes deeper than this skip separation; <0 = target/2
  int clique_max_fractional = 200;
  NoGoodMode nogood_mode = NoGoodMode::Pairwise;
  SearchMode search = SearchMode::OneTree;
  Budget budget;
};

// Reached: target marks were placed (ruler carries them).  Exhausted: the tree
// is proven to contain no target-mark placement; best_found is the largest
// placement encountered on the way.
enum class QStatus { Reached, Exhausted, Unknown };

struct QResult {
  QStatus status = QStatus::Unknown;
  int best_found = 0;
  std::optional<Ruler> ruler;  // the target placement when Reached, else best found
  SolveStats stats;
};

// Maximum-cardinality placement search on positions 0..L with early exit once
// `target` marks are placed.  Branch and cut: left-mark branching, lazy window
// cuts, node-local clique cuts, and no-good cuts - checked inline and pooled
// across the tree in OneTree mode, or accumulated between full re-solves of
// the master in MultiTree mode.  The bounds table shapes the branching
// windows; pass a tightened table when one is available, or nothing to use the
// initial bounds.
QResult max_marks(int L, int target, const OptimaTable& optima, const QConfig& config = {},
                  const std::optional<BoundsTable>& bounds = std::nullopt);

// Certification by ascending length: starting just past the optimum for
// target-1 marks, prove max_marks < target length by length until the first
// length that places all target marks - that length is the optimum, and every
// shorter one carries an exhaustion certificate.  Only optima for smaller
// orders are consumed.  A budget expiry stops the scan with proven = false.
struct LengthCertificate {
  int length = 0;
  std::optional<Ruler> witness;
  bool proven = false;
  struct PerLength {
    int L = 0;
    QResult result;
  };
  std::vector<PerLength> attempts;  // ascending L, the reached length last
};
LengthCertificate certify_optimal_length(int n, const OptimaTable& optima,
                                         const QConfig& config = {});

}  // namespace golomb::qip
