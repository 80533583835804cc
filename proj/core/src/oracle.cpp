#include "golomb/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace golomb {
namespace {

using Clock = std::chrono::steady_clock;

struct Search {
  int n;
  int best_len;                 // incumbent length (exclusive upper bound for pruning)
  std::vector<int> best_marks;
  std::vector<int> marks;
  std::vector<char> used;       // distance -> already realized by the partial ruler
  std::uint64_t nodes = 0;
  const Budget* budget;
  Clock::time_point t0;
  bool stopped = false;

  bool out_of_budget() {
    if (budget->node_limit && nodes >= budget->node_limit) return true;
    if (budget->time_limit_s > 0.0 && (nodes & 1023) == 0) {
      double el = std::chrono::duration<double>(Clock::now() - t0).count();
      if (el >= budget->time_limit_s) return true;
    }
    return false;
  }

  // Sum of the r smallest distances not yet used; the consecutive gaps still to
  // be placed are pairwise distinct and unused, so the final length is at least
  // marks.back() plus this.
  int remaining_lower_bound(int r) const {
    int sum = 0;
    for (int v = 1; r > 0; ++v) {
      if (!used[v]) {
        sum += v;
        --r;
      }
    }
    return sum;
  }

  void place(int k) {
    ++nodes;
    if (stopped || (stopped = out_of_budget())) return;
    if (k == n) {
      // Strictly better by construction of the position loop bound.
      best_len = marks.back();
      best_marks = marks;
      return;
    }
    int last = marks.back();
    // After this mark there are n-k-1 more gaps, pairwise distinct and unused,
    // so the final length is at least p plus the sum of the n-k-1 smallest
    // unused distances (computed before placing p, which only underestimates).
    int lb = remaining_lower_bound(n - k - 1);
    // Gap for this mark at least 1; mirror symmetry lets us force the final gap
    // to be no smaller than the first.
    int min_gap = (k == n - 1) ? std::max(1, marks[1] - marks[0]) : 1;
    for (int p = last + min_gap; p + lb < best_len; ++p) {
      bool ok = true;
      for (int t = k - 1; t >= 0; --t) {
        int d = p - marks[t];
        if (d >= best_len || used[d]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (int t = 0; t < k; ++t) used[p - marks[t]] = 1;
      marks.push_back(p);
      place(k + 1);
      marks.pop_back();
      for (int t = 0; t < k; ++t) used[p - marks[t]] = 0;
      if (stopped) return;
    }
  }
};

// First ruler found by always taking the smallest conflict-free next mark;
// gives a valid (generally suboptimal) incumbent to start from.
std::vector<int> greedy_ruler(int n) {
  std::vector<int> marks{0};
  std::set<int> used;
  while (static_cast<int>(marks.size()) < n) {
    int p = marks.back() + 1;
    for (;; ++p) {
      bool ok = true;
      for (int m : marks) {
        if (used.count(p - m)) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    for (int m : marks) used.insert(p - m);
    marks.push_back(p);
  }
  return marks;
}

}  // namespace

OracleResult brute_force_optimal(int n, const Budget& budget) {
  if (n < 1) throw std::invalid_argument("order must be >= 1");
  OracleResult res;
  if (n == 1) {
    res.ruler.marks = {0};
    res.length = 0;
    res.nodes = 1;
    return res;
  }
  std::vector<int> incumbent = greedy_ruler(n);

  Search s;
  s.n = n;
  s.best_len = incumbent.back();
  s.best_marks = incumbent;
  s.marks = {0};
  s.used.assign(incumbent.back() + 1, 0);
  s.budget = &budget;
  s.t0 = Clock::now();
  s.place(1);

  res.status = s.stopped ? OracleStatus::BudgetExceeded : OracleStatus::Proved;
  res.length = s.best_len;
  res.ruler.marks = s.best_marks;
  res.nodes = s.nodes;
  return res;
}

namespace {

void enumerate_rec(int n, int length, std::vector<int>& marks, std::vector<char>& used,
                   std::vector<Ruler>& out) {
  int k = static_cast<int>(marks.size());
  if (k == n - 1) {
    // Final mark is pinned at `length`.
    for (int t = 0; t < k; ++t) {
      int d = length - marks[t];
      if (used[d]) return;
    }
    // Distances to the last mark are distinct among themselves because the
    // marks are; check against used ones only.
    std::vector<char> seen(used.size(), 0);
    for (int t = 0; t < k; ++t) {
      int d = length - marks[t];
      if (seen[d]) return;
      seen[d] = 1;
    }
    Ruler r;
    r.marks = marks;
    r.marks.push_back(length);
    out.push_back(std::move(r));
    return;
  }
  for (int p = marks.back() + 1; p < length - (n - 2 - k); ++p) {
    bool ok = true;
    for (int t = 0; t < k; ++t) {
      if (used[p - marks[t]]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (int t = 0; t < k; ++t) used[p - marks[t]] = 1;
    marks.push_back(p);
    enumerate_rec(n, length, marks, used, out);
    marks.pop_back();
    for (int t = 0; t < k; ++t) used[p - marks[t]] = 0;
  }
}

}  // namespace

std::vector<Ruler> enumerate_rulers_of_length(int n, int length) {
  if (n < 2 || length < 1) throw std::invalid_argument("need n >= 2 and length >= 1");
  std::vector<Ruler> out;
  std::vector<int> marks{0};
  std::vector<char> used(length + 1, 0);
  enumerate_rec(n, length, marks, used, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace golomb
