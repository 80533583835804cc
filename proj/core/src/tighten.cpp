#include "golomb/tighten.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "golomb/cp.hpp"
#include "golomb/distance_lp.hpp"
#include "golomb/pairs.hpp"
#include "golomb/rational.hpp"

namespace golomb {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ProbeResult {
  cp::SearchStatus status;
  int witness = -1;  // the probed pair's distance in the found ruler
};

// Feasibility of "some ruler inside `base` has pair k in [lo, hi]".
ProbeResult probe_pair(const BoundsTable& base, const std::vector<cp::ForbiddenTable>& tables,
                       int k, int lo, int hi, const Budget& budget, double* used_s) {
  BoundsTable t = base;
  t.lower[static_cast<std::size_t>(k)] = lo;
  t.upper[static_cast<std::size_t>(k)] = hi;
  cp::SearchConfig cfg;
  cfg.mode = cp::SearchConfig::Mode::Feasibility;
  cfg.symmetry_break = false;
  cfg.budget = budget;
  auto res = cp::search(t, tables, cfg);
  if (used_s) *used_s += res.stats.total_time_s;
  ProbeResult out{res.status, -1};
  if (res.status == cp::SearchStatus::Feasible) {
    auto [i, j] = PairSpace(base.n).pair_of(k);
    out.witness = res.ruler->marks[static_cast<std::size_t>(j - 1)] -
                  res.ruler->marks[static_cast<std::size_t>(i - 1)];
  }
  return out;
}

}  // namespace

BoundsTable lp_bounding_round(const BoundsTable& b) {
  if (b.infeasible) return b;
  BoundsTable out = b;
  DeLpProber prober(b);
  if (prober.infeasible()) {
    out.infeasible = true;
    return out;
  }
  for (std::size_t k = 0; k < b.lower.size(); ++k) {
    if (b.lower[k] == b.upper[k]) continue;
    auto mn = prober.probe(static_cast<int>(k), false);
    auto mx = prober.probe(static_cast<int>(k), true);
    if (!mn || !mx) {
      out.infeasible = true;
      return out;
    }
    int lo = static_cast<int>(rat_to_long(rat_ceil(*mn)));
    int hi = static_cast<int>(rat_to_long(rat_floor(*mx)));
    out.lower[k] = std::max(out.lower[k], lo);
    out.upper[k] = std::min(out.upper[k], hi);
    if (out.lower[k] > out.upper[k]) {
      out.infeasible = true;
      return out;
    }
  }
  return out;
}

BoundsTable exact_bounding_round(const BoundsTable& b, const Budget& probe_budget,
                                 ExactBoundingMode mode, double* subsolver_time_s,
                                 int table_rounds) {
  if (b.infeasible) return b;
  if (probe_budget.unlimited()) return b;  // zero budget: no probing

  PairSpace ps(b.n);
  auto tables = cp::build_forbidden_tables(b, table_rounds);
  BoundsTable out = b;

  // Widest ranges first; ties by pair index.
  std::vector<int> order(ps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    return b.upper[static_cast<std::size_t>(a)] - b.lower[static_cast<std::size_t>(a)] >
           b.upper[static_cast<std::size_t>(c)] - b.lower[static_cast<std::size_t>(c)];
  });

  for (int k : order) {
    int lo = b.lower[static_cast<std::size_t>(k)];
    int hi = b.upper[static_cast<std::size_t>(k)];
    if (lo >= hi) continue;  // singleton: nothing to probe
    int new_lo = lo, new_hi = hi;
    bool saw_witness = false;
    if (mode == ExactBoundingMode::Optimize) {
      // Raise the lower bound: find the least feasible value by dichotomy.
      int a = lo, c = hi;
      while (a < c) {
        int mid = a + (c - a) / 2;
        auto pr = probe_pair(b, tables, k, a, mid, probe_budget, subsolver_time_s);
        if (pr.status == cp::SearchStatus::Infeasible) {
          a = mid + 1;
        } else if (pr.status == cp::SearchStatus::Feasible) {
          saw_witness = true;
          c = std::min(mid, pr.witness);
        } else {
          break;  // budget expired: keep what is proven so far
        }
      }
      new_lo = a;
      // Lower the upper bound symmetrically.
      int a2 = new_lo, c2 = hi;
      while (a2 < c2) {
        int mid = a2 + (c2 - a2 + 1) / 2;
        auto pr = probe_pair(b, tables, k, mid, c2, probe_budget, subsolver_time_s);
        if (pr.status == cp::SearchStatus::Infeasible) {
          c2 = mid - 1;
        } else if (pr.status == cp::SearchStatus::Feasible) {
          saw_witness = true;
          a2 = std::max(mid, pr.witness);
        } else {
          break;
        }
      }
      new_hi = c2;
      // If no probe ever produced a ruler, the surviving range is unproven;
      // one more probe may show the whole pair (hence the table) is empty.
      if (!saw_witness && new_lo <= new_hi) {
        auto pr = probe_pair(b, tables, k, new_lo, new_hi, probe_budget, subsolver_time_s);
        if (pr.status == cp::SearchStatus::Infeasible) new_hi = new_lo - 1;
      }
    } else {  // Shave
      auto pr = probe_pair(b, tables, k, lo, lo, probe_budget, subsolver_time_s);
      if (pr.status == cp::SearchStatus::Infeasible) new_lo = lo + 1;
      auto pr2 = probe_pair(b, tables, k, hi, hi, probe_budget, subsolver_time_s);
      if (pr2.status == cp::SearchStatus::Infeasible) new_hi = hi - 1;
    }
    out.lower[static_cast<std::size_t>(k)] = std::max(out.lower[static_cast<std::size_t>(k)], new_lo);
    out.upper[static_cast<std::size_t>(k)] = std::min(out.upper[static_cast<std::size_t>(k)], new_hi);
    if (out.lower[static_cast<std::size_t>(k)] > out.upper[static_cast<std::size_t>(k)]) {
      out.infeasible = true;
      return out;
    }
  }
  return out;
}

std::pair<BoundsTable, TightenReport> tighten_fixpoint(int n, int L, const OptimaTable& optima,
                                                       const TightenConfig& config) {
  BoundsTable cur = initial_bounds(n, L, optima);
  TightenReport rep;
  long long init_width = cur.infeasible ? 0 : cur.total_width();
  for (int r = 0; r < config.max_rounds && !cur.infeasible; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    BoundsTable next = cur;
    if (config.lp_rounds) next = lp_bounding_round(next);
    if (!next.infeasible && config.exact_rounds)
      next = exact_bounding_round(next, config.probe_budget, config.exact_mode,
                                  &rep.subsolver_time_s, config.table_rounds);
    ++rep.rounds;
    rep.round_times_s.push_back(seconds_since(t0));
    bool changed = !(next == cur);
    cur = std::move(next);
    if (!changed) break;
  }
  rep.infeasible = cur.infeasible;
  rep.range_reduction = cur.infeasible ? init_width : init_width - cur.total_width();
  return {cur, rep};
}

}  // namespace golomb
