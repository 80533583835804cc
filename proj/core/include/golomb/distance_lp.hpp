#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "golomb/bounds.hpp"
#include "golomb/lp.hpp"
#include "golomb/stats.hpp"

namespace golomb {

struct DistanceLpResult {
  lp::LPStatus status = lp::LPStatus::Optimal;
  Rat bound;                     // optimal total length of the relaxation
  std::vector<Rat> pair_values;  // distance value per pair at the optimum
  std::uint64_t cuts_added = 0;
  std::uint64_t iterations = 0;
};

// Distance-only relaxation over the n-1 consecutive-gap variables: interval
// rows for every longer pair plus subset-sum rows generated to fixpoint
// (capped at one generation round per pair, each round adding a cut the
// current point violates, so no cut repeats).
DistanceLpResult d_lp_bound(const BoundsTable& bounds);

// Assignment-style relaxation: a distance variable per pair coupled to one
// indicator column per admissible value, every value usable by at most one
// pair, gaps chained to the longer distances.  Values outside a pair's bounds
// get no column at all.
DistanceLpResult de_lp_bound(const BoundsTable& bounds);

// Repeated single-pair min/max probes over the assignment relaxation with the
// basis kept warm across objective swaps; used by LP-based bound tightening.
class DeLpProber {
 public:
  explicit DeLpProber(const BoundsTable& bounds);

  bool infeasible();
  // Exact LP extremum of the pair's distance; nullopt iff the relaxation is
  // infeasible.
  std::optional<Rat> probe(int pair_index, bool maximize);
  std::uint64_t iterations() const { return iterations_; }

 private:
  std::optional<lp::SimplexSolver> solver_;
  std::vector<int> pair_var_;
  int num_vars_ = 0;
  bool first_done_ = false;
  bool infeasible_ = false;
  std::uint64_t iterations_ = 0;
};

}  // namespace golomb
