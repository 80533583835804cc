#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "golomb/bounds.hpp"
#include "golomb/cp.hpp"
#include "golomb/oracle.hpp"
#include "golomb/optima.hpp"
#include "golomb/pairs.hpp"
#include "golomb/ruler.hpp"

using namespace golomb;

namespace {

cp::Domain dom_of(const std::vector<int>& vals, int cap) {
  cp::Domain d(0, cap, cap);
  std::set<int> keep(vals.begin(), vals.end());
  for (int v = 0; v <= cap; ++v)
    if (!keep.contains(v)) d.remove(v);
  return d;
}

cp::DomainStore store3(const std::vector<int>& d12, const std::vector<int>& d13,
                       const std::vector<int>& d23, int cap) {
  cp::DomainStore s;
  s.n = 3;
  s.doms.resize(PairSpace(3).size());
  s.dom(1, 2) = dom_of(d12, cap);
  s.dom(1, 3) = dom_of(d13, cap);
  s.dom(2, 3) = dom_of(d23, cap);
  return s;
}

// Reference alldiff: literal interval sweep over every [a,b] box.
bool naive_alldiff(std::vector<cp::Domain>& doms, int cap) {
  for (bool dirty = true; dirty;) {
    dirty = false;
    for (std::size_t a = 0; a < doms.size(); ++a) {
      if (!doms[a].singleton()) continue;
      for (std::size_t b = 0; b < doms.size(); ++b) {
        if (a == b) continue;
        if (doms[b].singleton() && doms[b].min() == doms[a].min()) return false;
        if (doms[b].remove(doms[a].min())) {
          dirty = true;
          if (doms[b].empty()) return false;
        }
      }
    }
    for (int a = 0; a <= cap; ++a)
      for (int b = a; b <= cap; ++b) {
        int inside = 0;
        for (auto& d : doms)
          if (d.min() >= a && d.max() <= b) ++inside;
        if (inside > b - a + 1) return false;
        if (inside != b - a + 1) continue;
        for (auto& d : doms) {
          if (d.min() >= a && d.max() <= b) continue;
          bool ch = false;
          if (d.min() >= a && d.min() <= b) ch |= d.remove_below(b + 1);
          if (d.max() >= a && d.max() <= b) ch |= d.remove_above(a - 1);
          if (ch) {
            dirty = true;
            if (d.empty()) return false;
          }
        }
      }
  }
  return true;
}

void propagate_to_fixpoint(cp::DomainStore& s, bool& failed) {
  failed = false;
  for (;;) {
    cp::Prop a = cp::propagate_alldiff(s);
    if (a == cp::Prop::Fail) {
      failed = true;
      return;
    }
    cp::Prop t = cp::propagate_triangle(s);
    if (t == cp::Prop::Fail) {
      failed = true;
      return;
    }
    if (a == cp::Prop::Fixpoint && t == cp::Prop::Fixpoint) return;
  }
}

std::vector<int> gaps_of(const Ruler& r) {
  std::vector<int> g;
  for (std::size_t k = 1; k < r.marks.size(); ++k) g.push_back(r.marks[k] - r.marks[k - 1]);
  return g;
}

}  // namespace

TEST_CASE("domain mirrors a reference set under random edits") {
  std::mt19937 rng(7001);
  for (int trial = 0; trial < 200; ++trial) {
    int cap = 1 + static_cast<int>(rng() % 60);
    int lo = static_cast<int>(rng() % (cap + 1));
    int hi = lo + static_cast<int>(rng() % (cap - lo + 1));
    cp::Domain d(lo, hi, cap);
    std::set<int> ref;
    for (int v = lo; v <= hi; ++v) ref.insert(v);
    for (int step = 0; step < 30; ++step) {
      int op = static_cast<int>(rng() % 4);
      int v = static_cast<int>(rng() % (cap + 1));
      switch (op) {
        case 0:
          CHECK(d.remove(v) == (ref.erase(v) > 0));
          break;
        case 1: {
          bool changed = d.remove_below(v);
          auto before = ref.size();
          ref.erase(ref.begin(), ref.lower_bound(v));
          CHECK(changed == (ref.size() != before));
          break;
        }
        case 2: {
          bool changed = d.remove_above(v);
          auto before = ref.size();
          ref.erase(ref.upper_bound(v), ref.end());
          CHECK(changed == (ref.size() != before));
          break;
        }
        default: {
          bool had = ref.contains(v);
          bool was_single = ref.size() == 1 && had;
          bool changed = d.assign(v);
          if (had)
            ref = {v};
          else
            ref.clear();
          CHECK(changed == !was_single);
          break;
        }
      }
      CHECK(d.size() == static_cast<int>(ref.size()));
      CHECK(d.empty() == ref.empty());
      if (!ref.empty()) {
        CHECK(d.min() == *ref.begin());
        CHECK(d.max() == *ref.rbegin());
      }
      std::vector<int> vals(ref.begin(), ref.end());
      CHECK(d.values() == vals);
      if (ref.empty()) break;
    }
  }
}

TEST_CASE("alldiff removes values taken by singletons") {
  auto s = store3({1}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 2}, 20);
  CHECK(cp::propagate_alldiff(s) == cp::Prop::Changed);
  CHECK(s.dom(2, 3).values() == std::vector<int>{2});
  CHECK_FALSE(s.dom(1, 3).contains(1));
  CHECK_FALSE(s.dom(1, 3).contains(2));
}

TEST_CASE("alldiff prunes around a hall interval") {
  auto s = store3({1, 2}, {1, 2}, {1, 2, 3}, 20);
  CHECK(cp::propagate_alldiff(s) == cp::Prop::Changed);
  CHECK(s.dom(2, 3).values() == std::vector<int>{3});
}

TEST_CASE("alldiff fails on a pigeonhole overload") {
  auto s = store3({1, 2}, {1, 2}, {1, 2}, 20);
  CHECK(cp::propagate_alldiff(s) == cp::Prop::Fail);
  CHECK(s.failed);
}

TEST_CASE("alldiff agrees with the naive interval sweep") {
  std::mt19937 rng(7002);
  for (int trial = 0; trial < 300; ++trial) {
    int nvars = 2 + static_cast<int>(rng() % 6);
    int cap = 3 + static_cast<int>(rng() % 9);
    std::vector<cp::Domain> doms;
    for (int v = 0; v < nvars; ++v) {
      std::vector<int> vals;
      for (int x = 0; x <= cap; ++x)
        if (rng() % 3) vals.push_back(x);
      if (vals.empty()) vals.push_back(static_cast<int>(rng() % (cap + 1)));
      doms.push_back(dom_of(vals, cap));
    }
    auto ref = doms;
    bool ref_ok = naive_alldiff(ref, cap);
    cp::DomainStore s;
    s.n = 2;
    s.doms = doms;
    cp::Prop got = cp::propagate_alldiff(s);
    if (!ref_ok) {
      CHECK(got == cp::Prop::Fail);
    } else {
      REQUIRE(got != cp::Prop::Fail);
      CHECK(s.doms == ref);
    }
  }
}

TEST_CASE("triangle adds and subtracts intervals") {
  std::vector<int> wide;
  for (int v = 0; v <= 20; ++v) wide.push_back(v);

  auto s = store3({1, 2, 3}, wide, {2, 3, 4}, 20);
  CHECK(cp::propagate_triangle(s) == cp::Prop::Changed);
  CHECK(s.dom(1, 3).min() >= 3);
  CHECK(s.dom(1, 3).max() <= 7);

  auto s2 = store3({2}, {5}, wide, 20);
  CHECK(cp::propagate_triangle(s2) == cp::Prop::Changed);
  CHECK(s2.dom(2, 3).values() == std::vector<int>{3});

  auto s3 = store3({4, 5}, {1, 2, 3, 4, 5, 6, 7}, {4, 5}, 20);
  CHECK(cp::propagate_triangle(s3) == cp::Prop::Fail);
  CHECK(s3.failed);
}

TEST_CASE("triangle pins every pair once gaps are fixed") {
  cp::DomainStore s;
  s.n = 4;
  s.doms.assign(PairSpace(4).size(), cp::Domain(0, 20, 20));
  s.dom(1, 2) = dom_of({1}, 20);
  s.dom(2, 3) = dom_of({3}, 20);
  s.dom(3, 4) = dom_of({2}, 20);
  CHECK(cp::propagate_triangle(s) == cp::Prop::Changed);
  CHECK(s.dom(1, 3).values() == std::vector<int>{4});
  CHECK(s.dom(2, 4).values() == std::vector<int>{5});
  CHECK(s.dom(1, 4).values() == std::vector<int>{6});
}

TEST_CASE("forbidden tables are empty for a pinned valid subruler") {
  // marks 0,1,4,9,11
  std::vector<int> marks{0, 1, 4, 9, 11};
  BoundsTable b;
  b.n = 5;
  b.length = 11;
  PairSpace ps(5);
  b.lower.resize(ps.size());
  b.upper.resize(ps.size());
  for (int i = 1; i < 5; ++i)
    for (int j = i + 1; j <= 5; ++j) {
      int d = marks[static_cast<std::size_t>(j - 1)] - marks[static_cast<std::size_t>(i - 1)];
      b.lower[static_cast<std::size_t>(ps.index(i, j))] = d;
      b.upper[static_cast<std::size_t>(ps.index(i, j))] = d;
    }
  auto tables = cp::build_forbidden_tables(b, 3);
  REQUIRE(tables.size() == 1);
  CHECK(tables[0].window_start == 1);
  CHECK(tables[0].forbidden.empty());
}

TEST_CASE("forbidden tables reject duplicated unit gaps") {
  auto optima = OptimaTable::standard().restricted_below(5);
  BoundsTable b = initial_bounds(5, 11, optima);
  PairSpace ps(5);
  b.lower[static_cast<std::size_t>(ps.index(1, 2))] = 1;
  b.upper[static_cast<std::size_t>(ps.index(1, 2))] = 1;
  b.lower[static_cast<std::size_t>(ps.index(2, 3))] = 1;
  b.upper[static_cast<std::size_t>(ps.index(2, 3))] = 1;
  auto tables = cp::build_forbidden_tables(b, 1);
  REQUIRE(tables.size() == 1);
  int lo3 = b.lower_of(3, 4), hi3 = b.upper_of(3, 4);
  CHECK(static_cast<int>(tables[0].forbidden.size()) == hi3 - lo3 + 1);
  for (auto& t : tables[0].forbidden) {
    CHECK(t[0] == 1);
    CHECK(t[1] == 1);
  }
}

TEST_CASE("forbidden tables never exclude an optimal ruler") {
  auto full = OptimaTable::standard();
  for (int n = 5; n <= 8; ++n) {
    int len = full.length(n);
    BoundsTable b = initial_bounds(n, len, full.restricted_below(n));
    auto tables = cp::build_forbidden_tables(b, 3);
    REQUIRE(static_cast<int>(tables.size()) == n - 4);
    for (const auto& r : enumerate_rulers_of_length(n, len)) {
      auto g = gaps_of(r);
      for (const auto& t : tables) {
        int i = t.window_start;
        std::array<int, 3> trip{g[static_cast<std::size_t>(i - 1)],
                                g[static_cast<std::size_t>(i)],
                                g[static_cast<std::size_t>(i + 1)]};
        CHECK_FALSE(std::binary_search(t.forbidden.begin(), t.forbidden.end(), trip));
      }
    }
  }
}

TEST_CASE("forbidden table sizes for the order-9 certification instance") {
  auto optima = OptimaTable::standard().restricted_below(9);
  BoundsTable b = initial_bounds(9, 43, optima);
  auto tables = cp::build_forbidden_tables(b, 3);
  REQUIRE(tables.size() == 5);
  std::vector<std::size_t> sizes;
  for (auto& t : tables) sizes.push_back(t.forbidden.size());
  // Frozen from a reference run; guards against silent construction drift.
  CHECK(sizes == std::vector<std::size_t>{2285, 7099, 11077, 11077, 7117});
}

TEST_CASE("search finds a ruler when one exists") {
  auto optima = OptimaTable::standard().restricted_below(4);
  BoundsTable b = initial_bounds(4, 6, optima);
  cp::SearchConfig cfg;
  cfg.mode = cp::SearchConfig::Mode::Feasibility;
  auto res = cp::search(b, {}, cfg);
  REQUIRE(res.status == cp::SearchStatus::Feasible);
  REQUIRE(res.ruler.has_value());
  CHECK(verify_golomb(res.ruler->marks));
  CHECK(res.ruler->order() == 4);
  CHECK(res.ruler->length() <= 6);
  CHECK(res.stats.nodes > 0);
}

TEST_CASE("search proves infeasibility below the optimum") {
  auto optima = OptimaTable::standard().restricted_below(4);
  BoundsTable b = initial_bounds(4, 5, optima);
  cp::SearchConfig cfg;
  cfg.mode = cp::SearchConfig::Mode::Feasibility;
  auto res = cp::search(b, {}, cfg);
  CHECK(res.status == cp::SearchStatus::Infeasible);
  CHECK_FALSE(res.ruler.has_value());
}

TEST_CASE("search handles the two-mark base case") {
  auto optima = OptimaTable::standard().restricted_below(2);
  BoundsTable b = initial_bounds(2, 5, optima);
  cp::SearchConfig cfg;
  auto res = cp::search(b, {}, cfg);
  REQUIRE(res.status == cp::SearchStatus::Optimal);
  CHECK(res.length == 1);
  CHECK(res.ruler->marks == std::vector<int>{0, 1});
}

TEST_CASE("search reports unknown when the node budget expires") {
  auto optima = OptimaTable::standard().restricted_below(8);
  BoundsTable b = initial_bounds(8, 34, optima);
  cp::SearchConfig cfg;
  cfg.budget.node_limit = 3;
  auto res = cp::search(b, {}, cfg);
  CHECK(res.status == cp::SearchStatus::Unknown);
  CHECK(res.stats.nodes == 3);
}

TEST_CASE("search optimum matches the oracle") {
  auto full = OptimaTable::standard();
  for (int n = 3; n <= 8; ++n) {
    auto oracle = brute_force_optimal(n);
    REQUIRE(oracle.status == OracleStatus::Proved);
    BoundsTable b = initial_bounds(n, oracle.length, full.restricted_below(n));
    auto tables = cp::build_forbidden_tables(b, 2);
    cp::SearchConfig cfg;
    auto res = cp::search(b, tables, cfg);
    REQUIRE(res.status == cp::SearchStatus::Optimal);
    CHECK(res.length == oracle.length);
    REQUIRE(res.ruler.has_value());
    CHECK(verify_golomb(res.ruler->marks));
    CHECK(res.ruler->length() == oracle.length);

    // One unit below the optimum the instance is infeasible.
    BoundsTable tight = initial_bounds(n, oracle.length - 1, full.restricted_below(n));
    cp::SearchConfig feas;
    feas.mode = cp::SearchConfig::Mode::Feasibility;
    auto res2 = cp::search(tight, cp::build_forbidden_tables(tight, 2), feas);
    CHECK(res2.status == cp::SearchStatus::Infeasible);
  }
}

TEST_CASE("propagation keeps every optimal ruler alive") {
  auto full = OptimaTable::standard();
  for (int n = 3; n <= 8; ++n) {
    int len = full.length(n);
    auto rulers = enumerate_rulers_of_length(n, len);
    REQUIRE_FALSE(rulers.empty());
    PairSpace ps(n);
    for (const auto& r : rulers) {
      cp::DomainStore s(initial_bounds(n, len, full.restricted_below(n)));
      REQUIRE_FALSE(s.failed);
      auto g = gaps_of(r);
      for (int k = 1; k < n; ++k) {
        REQUIRE(s.dom(k, k + 1).contains(g[static_cast<std::size_t>(k - 1)]));
        s.dom(k, k + 1).assign(g[static_cast<std::size_t>(k - 1)]);
        bool failed = false;
        propagate_to_fixpoint(s, failed);
        REQUIRE_FALSE(failed);
      }
      for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          int d = r.marks[static_cast<std::size_t>(j - 1)] - r.marks[static_cast<std::size_t>(i - 1)];
          CHECK(s.dom(i, j).values() == std::vector<int>{d});
        }
    }
  }
}

TEST_CASE("search node counts are deterministic") {
  auto optima = OptimaTable::standard().restricted_below(7);
  BoundsTable b = initial_bounds(7, 25, optima);
  auto tables = cp::build_forbidden_tables(b, 2);
  for (auto order : {cp::SearchConfig::ValueOrder::Ascending, cp::SearchConfig::ValueOrder::Impact}) {
    cp::SearchConfig cfg;
    cfg.value_order = order;
    auto a = cp::search(b, tables, cfg);
    auto c = cp::search(b, tables, cfg);
    REQUIRE(a.status == cp::SearchStatus::Optimal);
    CHECK(a.length == 25);
    CHECK(a.stats.nodes == c.stats.nodes);
    CHECK(a.ruler->marks == c.ruler->marks);
  }
}

TEST_CASE("symmetry breaking keeps the certified optimum reachable") {
  auto optima = OptimaTable::standard().restricted_below(6);
  BoundsTable b = initial_bounds(6, 17, optima);
  cp::SearchConfig with, without;
  without.symmetry_break = false;
  auto r1 = cp::search(b, {}, with);
  auto r2 = cp::search(b, {}, without);
  REQUIRE(r1.status == cp::SearchStatus::Optimal);
  REQUIRE(r2.status == cp::SearchStatus::Optimal);
  CHECK(r1.length == r2.length);
  CHECK(r1.stats.nodes <= r2.stats.nodes);
}
