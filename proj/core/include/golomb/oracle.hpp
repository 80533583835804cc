#pragma once

#include <cstdint>
#include <vector>

#include "golomb/ruler.hpp"
#include "golomb/stats.hpp"

namespace golomb {

enum class OracleStatus { Proved, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::Proved;
  int length = 0;        // proven optimum, or best incumbent on budget exhaustion
  Ruler ruler;           // witness of `length`
  std::uint64_t nodes = 0;
};

// Reference solver: depth-first enumeration over increasing mark positions with
// a distance bitset, mirror-symmetry breaking, and a lower bound from the
// smallest still-unused distances.  Exact and deterministic; exponential in n.
OracleResult brute_force_optimal(int n, const Budget& budget = {});

// Every Golomb ruler of order n and length exactly `length`, both orientations,
// sorted.  Exhaustive; intended for tests on small n.
std::vector<Ruler> enumerate_rulers_of_length(int n, int length);

}  // namespace golomb
