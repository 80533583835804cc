#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "golomb/optima.hpp"
#include "golomb/pairs.hpp"

namespace golomb {

// Inclusive integer bounds on every pairwise distance d_ij of an n-mark ruler
// of length at most `length`.
struct BoundsTable {
  int n = 0;
  int length = 0;
  bool infeasible = false;
  std::vector<int> lower, upper;  // indexed by PairSpace(n)

  PairSpace pairs() const { return PairSpace(n); }
  int lower_of(int i, int j) const { return lower[PairSpace(n).index(i, j)]; }
  int upper_of(int i, int j) const { return upper[PairSpace(n).index(i, j)]; }

  // Range width (upper - lower) summed over pairs; the tightening metric.
  long long total_width() const;

  bool operator==(const BoundsTable&) const = default;
};

// Seed bounds: the distance between marks i and j contains j-i+1 marks, so it
// is at least the optimal length for that order; symmetrically the prefix
// before i and suffix after j each consume at least their optimal lengths of
// the available ruler, bounding d_ij from above by L minus those.
// Requires optima entries for all orders 1..n.
BoundsTable initial_bounds(int n, int L, const OptimaTable& optima);

// Pairwise max of lowers / min of uppers; both arguments must agree on n.
BoundsTable intersect(const BoundsTable& a, const BoundsTable& b);

// True when every pairwise distance of the ruler lies inside the table.
bool table_contains(const BoundsTable& table, std::span<const int> marks);

// Line-oriented "i j lower upper" records with a leading "# n <n> L <L>"
// comment; readable by every engine and the CLI.
void write_bounds(const BoundsTable& table, std::ostream& os);
BoundsTable read_bounds(std::istream& is);

}  // namespace golomb
