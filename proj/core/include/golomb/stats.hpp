#pragma once

#include <cstdint>

namespace golomb {

// Cuts generated, by family.  "golomb" covers both consecutive-window and
// arithmetic-progression windows; "subset_sum" is the distance-formulation family.
struct CutCounts {
  std::uint64_t golomb = 0;
  std::uint64_t clique = 0;
  std::uint64_t nogood = 0;
  std::uint64_t subset_sum = 0;

  CutCounts& operator+=(const CutCounts& o) {
    golomb += o.golomb;
    clique += o.clique;
    nogood += o.nogood;
    subset_sum += o.subset_sum;
    return *this;
  }
};

// Per-solve accounting shared by every engine.
struct SolveStats {
  double bound_tighten_time_s = 0.0;
  double optimize_time_s = 0.0;
  double total_time_s = 0.0;
  std::uint64_t nodes = 0;
  CutCounts cuts;

  SolveStats& operator+=(const SolveStats& o) {
    bound_tighten_time_s += o.bound_tighten_time_s;
    optimize_time_s += o.optimize_time_s;
    total_time_s += o.total_time_s;
    nodes += o.nodes;
    cuts += o.cuts;
    return *this;
  }
};

// Deterministic search/probe limits.  Zero means "no limit".  Node limits keep
// repeated runs bit-identical; wall-clock limits are opt-in.
struct Budget {
  std::uint64_t node_limit = 0;
  double time_limit_s = 0.0;

  bool unlimited() const { return node_limit == 0 && time_limit_s == 0.0; }
};

}  // namespace golomb
