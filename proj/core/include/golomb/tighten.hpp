#pragma once

#include <utility>
#include <vector>

#include "golomb/bounds.hpp"
#include "golomb/optima.hpp"
#include "golomb/stats.hpp"

namespace golomb {

enum class ExactBoundingMode { Optimize, Shave };

struct TightenConfig {
  int max_rounds = 5;          // one round = an LP pass plus an exact pass
  bool lp_rounds = true;
  bool exact_rounds = true;
  ExactBoundingMode exact_mode = ExactBoundingMode::Optimize;
  Budget probe_budget{0, 1.0};  // per CP feasibility probe; both zero = skip
  int table_rounds = 2;         // forbidden-table passes per exact round
};

struct TightenReport {
  int rounds = 0;
  std::vector<double> round_times_s;
  // Total shrinkage of sum(upper-lower) vs. the initial table; when the table
  // is proven infeasible this equals the initial total width.
  long long range_reduction = 0;
  double subsolver_time_s = 0.0;
  bool infeasible = false;
};

// One pass of per-pair LP min/max over the assignment relaxation, rounded
// inward; marks the table infeasible when the relaxation is empty or a pair
// admits no integer value.  Never widens.
BoundsTable lp_bounding_round(const BoundsTable& b);

// One pass of budget-limited exact probes per pair via the CP engine.
// Optimize runs dichotomic feasibility probes towards both ends; shave pins
// the current lower (then upper) bound and drops it on a proven
// infeasibility.  Only proven exclusions move a bound; a zero budget returns
// the table unchanged.  Probes run without symmetry breaking so every ruler
// inside the box survives.
BoundsTable exact_bounding_round(const BoundsTable& b, const Budget& probe_budget,
                                 ExactBoundingMode mode, double* subsolver_time_s = nullptr,
                                 int table_rounds = 2);

// Builds the initial box, then alternates LP/exact rounds until nothing moves
// or the round limit is hit.
std::pair<BoundsTable, TightenReport> tighten_fixpoint(int n, int L, const OptimaTable& optima,
                                                       const TightenConfig& config = {});

}  // namespace golomb
