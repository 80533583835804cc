#include "golomb/cp.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>

#include "golomb/pairs.hpp"

namespace golomb::cp {

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(int lo, int hi, int cap) : cap_(cap) {
  if (cap < 0 || cap > kMaxValue) throw std::invalid_argument("Domain: cap out of range");
  words_.fill(0);
  lo = std::max(lo, 0);
  hi = std::min(hi, cap);
  if (lo > hi) return;  // stays empty
  for (int w = lo >> 6; w <= hi >> 6; ++w) {
    std::uint64_t m = ~0ull;
    if (w == lo >> 6) m &= ~0ull << (lo & 63);
    if (w == hi >> 6) m &= ~0ull >> (63 - (hi & 63));
    words_[w] = m;
  }
  min_ = lo;
  max_ = hi;
  count_ = hi - lo + 1;
}

int Domain::next_value(int v) const {
  if (count_ == 0 || v > max_) return -1;
  v = std::max(v, min_);
  std::uint64_t w = words_[v >> 6] >> (v & 63);
  if (w) return v + std::countr_zero(w);
  for (int i = (v >> 6) + 1; i < kWords; ++i)
    if (words_[i]) return i * 64 + std::countr_zero(words_[i]);
  return -1;
}

int Domain::prev_value(int v) const {
  if (count_ == 0 || v < min_) return -1;
  v = std::min(v, max_);
  std::uint64_t w = words_[v >> 6] << (63 - (v & 63));
  if (w) return v - std::countl_zero(w);
  for (int i = (v >> 6) - 1; i >= 0; --i)
    if (words_[i]) return i * 64 + 63 - std::countl_zero(words_[i]);
  return -1;
}

void Domain::recount() {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  count_ = c;
  if (c == 0) {
    min_ = 1;
    max_ = 0;
  }
}

bool Domain::remove(int v) {
  if (!contains(v)) return false;
  words_[v >> 6] &= ~(1ull << (v & 63));
  --count_;
  if (count_ == 0) {
    min_ = 1;
    max_ = 0;
  } else if (v == min_) {
    min_ = next_value(v + 1);
  } else if (v == max_) {
    max_ = prev_value(v - 1);
  }
  return true;
}

bool Domain::remove_below(int v) {
  if (count_ == 0 || v <= min_) return false;
  if (v > max_) {
    words_.fill(0);
    count_ = 0;
    min_ = 1;
    max_ = 0;
    return true;
  }
  for (int w = 0; w < v >> 6; ++w) words_[w] = 0;
  words_[v >> 6] &= ~0ull << (v & 63);
  min_ = next_value(v);
  recount();
  return true;
}

bool Domain::remove_above(int v) {
  if (count_ == 0 || v >= max_) return false;
  if (v < min_) {
    words_.fill(0);
    count_ = 0;
    min_ = 1;
    max_ = 0;
    return true;
  }
  for (int w = kWords - 1; w > v >> 6; --w) words_[w] = 0;
  words_[v >> 6] &= ~0ull >> (63 - (v & 63));
  max_ = prev_value(v);
  recount();
  return true;
}

bool Domain::assign(int v) {
  if (!contains(v)) {
    bool changed = count_ > 0;
    words_.fill(0);
    count_ = 0;
    min_ = 1;
    max_ = 0;
    return changed;
  }
  if (count_ == 1) return false;
  words_.fill(0);
  words_[v >> 6] = 1ull << (v & 63);
  min_ = max_ = v;
  count_ = 1;
  return true;
}

std::vector<int> Domain::values() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (int v = next_value(0); v >= 0; v = next_value(v + 1)) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// DomainStore

DomainStore::DomainStore(const BoundsTable& bounds) : n(bounds.n) {
  PairSpace ps(n);
  doms.resize(ps.size());
  if (bounds.infeasible) {
    failed = true;
    return;
  }
  for (int k = 0; k < static_cast<int>(ps.size()); ++k) {
    doms[k] = Domain(bounds.lower[k], bounds.upper[k], bounds.length);
    if (doms[k].empty()) failed = true;
  }
}

// ---------------------------------------------------------------------------
// Alldifferent: assigned-value sweep plus Hall-interval bounds consistency.

Prop propagate_alldiff(DomainStore& s) {
  if (s.failed) return Prop::Fail;
  const int V = static_cast<int>(s.doms.size());
  bool any = false;
  std::vector<int> bucket;
  for (bool dirty = true; dirty;) {
    dirty = false;
    // Remove values already taken by singleton domains.
    for (int a = 0; a < V; ++a) {
      if (!s.doms[a].singleton()) continue;
      int v = s.doms[a].min();
      for (int b = 0; b < V; ++b) {
        if (b == a) continue;
        if (s.doms[b].singleton() && s.doms[b].min() == v) {
          s.failed = true;
          return Prop::Fail;
        }
        if (s.doms[b].remove(v)) {
          any = dirty = true;
          if (s.doms[b].empty()) {
            s.failed = true;
            return Prop::Fail;
          }
        }
      }
    }
    if (dirty) continue;
    // Hall intervals over the [min,max] relaxation.
    int cap = 0;
    for (auto& d : s.doms) cap = std::max(cap, d.max());
    bucket.assign(static_cast<std::size_t>(cap) + 1, 0);
    std::vector<int> mins;
    mins.reserve(static_cast<std::size_t>(V));
    for (auto& d : s.doms) mins.push_back(d.min());
    std::sort(mins.begin(), mins.end());
    mins.erase(std::unique(mins.begin(), mins.end()), mins.end());
    for (int a : mins) {
      std::fill(bucket.begin(), bucket.end(), 0);
      for (auto& d : s.doms)
        if (d.min() >= a) ++bucket[static_cast<std::size_t>(d.max())];
      int cum = 0;
      for (int b = a; b <= cap && !dirty; ++b) {
        cum += bucket[static_cast<std::size_t>(b)];
        if (cum > b - a + 1) {
          s.failed = true;
          return Prop::Fail;
        }
        if (cum != b - a + 1) continue;
        // [a,b] is a Hall interval: outside variables may not touch it.
        for (int k = 0; k < V; ++k) {
          Domain& d = s.doms[k];
          if (d.min() >= a && d.max() <= b) continue;
          bool ch = false;
          if (d.min() >= a && d.min() <= b) ch |= d.remove_below(b + 1);
          if (d.max() >= a && d.max() <= b) ch |= d.remove_above(a - 1);
          if (ch) {
            any = dirty = true;
            if (d.empty()) {
              s.failed = true;
              return Prop::Fail;
            }
          }
        }
      }
      if (dirty) break;
    }
  }
  return any ? Prop::Changed : Prop::Fixpoint;
}

// ---------------------------------------------------------------------------
// Triangle propagation d_ij + d_jk = d_ik, queue-driven.

namespace {

struct TriangleCtx {
  std::vector<std::array<int, 3>> triples;  // var ids (ij, jk, ik)
  std::vector<std::vector<int>> var_triples;

  explicit TriangleCtx(int n) : var_triples(PairSpace(n).size()) {
    PairSpace ps(n);
    for (int i = 1; i <= n - 2; ++i)
      for (int j = i + 1; j <= n - 1; ++j)
        for (int k = j + 1; k <= n; ++k) {
          int id = static_cast<int>(triples.size());
          triples.push_back({ps.index(i, j), ps.index(j, k), ps.index(i, k)});
          for (int v : triples.back()) var_triples[static_cast<std::size_t>(v)].push_back(id);
        }
  }
};

struct TriangleQueue {
  std::vector<int> items;
  std::vector<char> queued;
  std::size_t head = 0;

  explicit TriangleQueue(std::size_t ntriples) : queued(ntriples, 0) {}

  void push(int t) {
    if (!queued[static_cast<std::size_t>(t)]) {
      queued[static_cast<std::size_t>(t)] = 1;
      items.push_back(t);
    }
  }
  void push_var(const TriangleCtx& ctx, int var) {
    for (int t : ctx.var_triples[static_cast<std::size_t>(var)]) push(t);
  }
  void push_all(const TriangleCtx& ctx) {
    for (int t = 0; t < static_cast<int>(ctx.triples.size()); ++t) push(t);
  }
  bool empty() const { return head == items.size(); }
  int pop() {
    int t = items[head++];
    queued[static_cast<std::size_t>(t)] = 0;
    if (head == items.size()) {
      items.clear();
      head = 0;
    }
    return t;
  }
};

// Drains the queue; returns Fail/Changed/Fixpoint for the drained work.
Prop run_triangle(DomainStore& s, const TriangleCtx& ctx, TriangleQueue& q) {
  bool any = false;
  while (!q.empty()) {
    auto [va, vb, vc] = ctx.triples[static_cast<std::size_t>(q.pop())];
    Domain& A = s.doms[static_cast<std::size_t>(va)];
    Domain& B = s.doms[static_cast<std::size_t>(vb)];
    Domain& C = s.doms[static_cast<std::size_t>(vc)];  // C = A + B
    bool cha = false, chb = false, chc = false;
    chc |= C.remove_below(A.min() + B.min());
    chc |= C.remove_above(A.max() + B.max());
    if (C.empty()) {
      s.failed = true;
      return Prop::Fail;
    }
    cha |= A.remove_below(C.min() - B.max());
    cha |= A.remove_above(C.max() - B.min());
    if (A.empty()) {
      s.failed = true;
      return Prop::Fail;
    }
    chb |= B.remove_below(C.min() - A.max());
    chb |= B.remove_above(C.max() - A.min());
    if (B.empty()) {
      s.failed = true;
      return Prop::Fail;
    }
    if (cha) q.push_var(ctx, va);
    if (chb) q.push_var(ctx, vb);
    if (chc) q.push_var(ctx, vc);
    any |= cha || chb || chc;
  }
  return any ? Prop::Changed : Prop::Fixpoint;
}

}  // namespace

Prop propagate_triangle(DomainStore& s) {
  if (s.failed) return Prop::Fail;
  TriangleCtx ctx(s.n);
  TriangleQueue q(ctx.triples.size());
  q.push_all(ctx);
  return run_triangle(s, ctx, q);
}

// ---------------------------------------------------------------------------
// Forbidden gap-triplet tables.

namespace {

// Triplets (g1,g2,g3) of consecutive gaps over marks j..j+3 compatible with
// the bounds: six pairwise-distinct distances, each inside its pair interval.
std::vector<std::array<int, 3>> base_triplets(const BoundsTable& bt, int j) {
  std::vector<std::array<int, 3>> out;
  int lo1 = bt.lower_of(j, j + 1), hi1 = bt.upper_of(j, j + 1);
  int lo2 = bt.lower_of(j + 1, j + 2), hi2 = bt.upper_of(j + 1, j + 2);
  int lo3 = bt.lower_of(j + 2, j + 3), hi3 = bt.upper_of(j + 2, j + 3);
  for (int a = lo1; a <= hi1; ++a)
    for (int b = lo2; b <= hi2; ++b) {
      if (a == b) continue;
      int ab = a + b;
      if (ab < bt.lower_of(j, j + 2) || ab > bt.upper_of(j, j + 2)) continue;
      for (int c = lo3; c <= hi3; ++c) {
        if (c == a || c == b) continue;
        int bc = b + c, abc = ab + c;
        if (bc < bt.lower_of(j + 1, j + 3) || bc > bt.upper_of(j + 1, j + 3)) continue;
        if (abc < bt.lower_of(j, j + 3) || abc > bt.upper_of(j, j + 3)) continue;
        if (bc == a || ab == c || ab == bc) continue;  // abc > all single gaps
        out.push_back({a, b, c});
      }
    }
  return out;  // already lexicographically sorted by construction
}

bool extends(const std::vector<std::array<int, 3>>& next_allowed, int g2, int g3, int dlo,
             int dhi) {
  auto it = std::lower_bound(next_allowed.begin(), next_allowed.end(),
                             std::array<int, 3>{g2, g3, dlo});
  return it != next_allowed.end() && (*it)[0] == g2 && (*it)[1] == g3 && (*it)[2] <= dhi;
}

}  // namespace

std::vector<ForbiddenTable> build_forbidden_tables(const BoundsTable& bounds, int rounds) {
  std::vector<ForbiddenTable> out;
  int n = bounds.n;
  if (n < 5 || bounds.infeasible) return out;
  // allowed[j] for j = 1..n-3: still-viable gap triplets over marks j..j+3.
  std::vector<std::vector<std::array<int, 3>>> allowed(static_cast<std::size_t>(n - 2));
  for (int j = 1; j <= n - 3; ++j) allowed[static_cast<std::size_t>(j)] = base_triplets(bounds, j);

  for (int r = 0; r < rounds; ++r) {
    bool any = false;
    std::vector<std::vector<std::array<int, 3>>> dropped(static_cast<std::size_t>(n - 4));
    for (int i = 1; i <= n - 4; ++i) {
      int dlo = bounds.lower_of(i + 3, i + 4), dhi = bounds.upper_of(i + 3, i + 4);
      auto& cur = allowed[static_cast<std::size_t>(i)];
      auto& nxt = allowed[static_cast<std::size_t>(i + 1)];
      for (auto& t : cur)
        if (!extends(nxt, t[1], t[2], dlo, dhi)) dropped[static_cast<std::size_t>(i - 1)].push_back(t);
    }
    for (int i = 1; i <= n - 4; ++i) {
      auto& drop = dropped[static_cast<std::size_t>(i - 1)];
      if (drop.empty()) continue;
      any = true;
      auto& cur = allowed[static_cast<std::size_t>(i)];
      std::vector<std::array<int, 3>> keep;
      keep.reserve(cur.size() - drop.size());
      std::set_difference(cur.begin(), cur.end(), drop.begin(), drop.end(),
                          std::back_inserter(keep));
      cur = std::move(keep);
    }
    if (!any) break;
  }
  // A window's forbidden set is everything in its domain box that either never
  // was a feasible triplet or lost all extensions during the passes.
  for (int i = 1; i <= n - 4; ++i) {
    ForbiddenTable t;
    t.window_start = i;
    const auto& keep = allowed[static_cast<std::size_t>(i)];
    for (int a = bounds.lower_of(i, i + 1); a <= bounds.upper_of(i, i + 1); ++a)
      for (int b = bounds.lower_of(i + 1, i + 2); b <= bounds.upper_of(i + 1, i + 2); ++b)
        for (int c = bounds.lower_of(i + 2, i + 3); c <= bounds.upper_of(i + 2, i + 3); ++c) {
          std::array<int, 3> trip{a, b, c};
          if (!std::binary_search(keep.begin(), keep.end(), trip)) t.forbidden.push_back(trip);
        }
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search.

namespace {

struct Propagator {
  DomainStore* s = nullptr;
  const TriangleCtx* tri = nullptr;
  TriangleQueue q;
  const std::vector<ForbiddenTable>* tables = nullptr;
  std::vector<std::array<int, 3>> table_vars;  // consecutive-gap var ids per table
  bool symmetry = false;
  int var_first = -1, var_last = -1;

  Propagator(DomainStore* store, const TriangleCtx* ctx) : s(store), tri(ctx), q(ctx->triples.size()) {}

  void seed_var(int v) { q.push_var(*tri, v); }
  void seed_all() { q.push_all(*tri); }

  Prop table_pass(bool* changed) {
    if (!tables) return Prop::Fixpoint;
    for (std::size_t t = 0; t < tables->size(); ++t) {
      const auto& forb = (*tables)[t].forbidden;
      if (forb.empty()) continue;
      auto [v1, v2, v3] = table_vars[t];
      Domain& d1 = s->doms[static_cast<std::size_t>(v1)];
      Domain& d2 = s->doms[static_cast<std::size_t>(v2)];
      Domain& d3 = s->doms[static_cast<std::size_t>(v3)];
      int singles = d1.singleton() + d2.singleton() + d3.singleton();
      if (singles < 2) continue;
      if (singles == 3) {
        if (std::binary_search(forb.begin(), forb.end(),
                               std::array<int, 3>{d1.min(), d2.min(), d3.min()})) {
          s->failed = true;
          return Prop::Fail;
        }
        continue;
      }
      int free_pos = !d1.singleton() ? 0 : (!d2.singleton() ? 1 : 2);
      Domain& fd = free_pos == 0 ? d1 : (free_pos == 1 ? d2 : d3);
      int fv = free_pos == 0 ? v1 : (free_pos == 1 ? v2 : v3);
      bool ch = false;
      for (int v : fd.values()) {
        std::array<int, 3> trip{d1.min(), d2.min(), d3.min()};
        trip[static_cast<std::size_t>(free_pos)] = v;
        if (std::binary_search(forb.begin(), forb.end(), trip)) {
          fd.remove(v);
          ch = true;
        }
      }
      if (fd.empty()) {
        s->failed = true;
        return Prop::Fail;
      }
      if (ch) {
        *changed = true;
        seed_var(fv);
      }
    }
    return Prop::Fixpoint;
  }

  Prop symmetry_pass(bool* changed) {
    if (!symmetry) return Prop::Fixpoint;
    Domain& a = s->doms[static_cast<std::size_t>(var_first)];
    Domain& b = s->doms[static_cast<std::size_t>(var_last)];
    bool ch = a.remove_above(b.max());
    ch |= b.remove_below(a.min());
    if (a.empty() || b.empty()) {
      s->failed = true;
      return Prop::Fail;
    }
    if (ch) {
      *changed = true;
      seed_var(var_first);
      seed_var(var_last);
    }
    return Prop::Fixpoint;
  }

  // Full fixpoint over triangle + alldiff + tables + symmetry.
  Prop run() {
    bool any = false;
    for (;;) {
      Prop tr = run_triangle(*s, *tri, q);
      if (tr == Prop::Fail) return Prop::Fail;
      any |= tr == Prop::Changed;
      Prop ad = propagate_alldiff(*s);
      if (ad == Prop::Fail) return Prop::Fail;
      bool stage = false;
      if (ad == Prop::Changed) {
        stage = true;
        seed_all();
      }
      if (table_pass(&stage) == Prop::Fail) return Prop::Fail;
      if (symmetry_pass(&stage) == Prop::Fail) return Prop::Fail;
      any |= stage;
      if (!stage && q.empty()) return any ? Prop::Changed : Prop::Fixpoint;
    }
  }
};

struct Searcher {
  DomainStore store;
  TriangleCtx tri;
  Propagator prop;
  SearchConfig cfg;
  int n;
  std::vector<int> consec;
  int var_1n;
  std::uint64_t nodes = 0;
  bool stopped = false;
  std::chrono::steady_clock::time_point start;
  int best_len = std::numeric_limits<int>::max();
  std::optional<Ruler> best;
  bool feasible_found = false;

  Searcher(const BoundsTable& bounds, const std::vector<ForbiddenTable>& tables,
           const SearchConfig& config)
      : store(bounds), tri(bounds.n), prop(&store, &tri), cfg(config), n(bounds.n) {
    PairSpace ps(n);
    for (int k = 1; k < n; ++k) consec.push_back(ps.index(k, k + 1));
    var_1n = ps.index(1, n);
    prop.symmetry = cfg.symmetry_break && n >= 3;
    prop.var_first = consec.front();
    prop.var_last = consec.back();
    if (!tables.empty()) {
      prop.tables = &tables;
      for (const auto& t : tables) {
        int i = t.window_start;
        prop.table_vars.push_back(
            {ps.index(i, i + 1), ps.index(i + 1, i + 2), ps.index(i + 2, i + 3)});
      }
    }
    start = std::chrono::steady_clock::now();
  }

  bool over_budget() {
    if (stopped) return true;
    if (cfg.budget.node_limit > 0 && nodes >= cfg.budget.node_limit) stopped = true;
    if (!stopped && cfg.budget.time_limit_s > 0 && (nodes & 255) == 0) {
      double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (el > cfg.budget.time_limit_s) stopped = true;
    }
    return stopped;
  }

  int pick_var() const {
    for (int v : consec)
      if (!store.doms[static_cast<std::size_t>(v)].singleton()) return v;
    return -1;
  }

  std::vector<int> order_values(int var) {
    std::vector<int> vals = store.doms[static_cast<std::size_t>(var)].values();
    if (cfg.value_order != SearchConfig::ValueOrder::Impact || vals.size() < 2) return vals;
    // Probe each value; prefer the ones leaving the most domain behind.
    std::vector<std::pair<long, int>> scored;
    scored.reserve(vals.size());
    auto snap = store.doms;
    for (int v : vals) {
      store.doms[static_cast<std::size_t>(var)].assign(v);
      prop.seed_var(var);
      long score = -1;
      if (prop.run() != Prop::Fail) {
        score = 0;
        for (auto& d : store.doms) score += d.size();
      }
      store.doms = snap;
      store.failed = false;
      scored.emplace_back(-score, v);  // ascending sort => larger score first
    }
    std::stable_sort(scored.begin(), scored.end());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = scored[i].second;
    return vals;
  }

  void record_solution() {
    std::vector<int> marks{0};
    for (int v : consec)
      marks.push_back(marks.back() + store.doms[static_cast<std::size_t>(v)].min());
    Ruler r{marks};
    if (!verify_golomb(r.marks)) throw std::logic_error("cp::search produced a non-Golomb ruler");
    int len = r.length();
    if (cfg.mode == SearchConfig::Mode::Optimize) {
      if (len < best_len) {
        best_len = len;
        best = r;
      }
    } else {
      best_len = len;
      best = r;
      feasible_found = true;
    }
  }

  void dfs() {
    int var = pick_var();
    if (var < 0) {
      record_solution();
      return;
    }
    for (int v : order_values(var)) {
      if (over_budget()) return;
      ++nodes;
      auto snap = store.doms;
      store.doms[static_cast<std::size_t>(var)].assign(v);
      prop.seed_var(var);
      bool ok = true;
      if (cfg.mode == SearchConfig::Mode::Optimize &&
          best_len != std::numeric_limits<int>::max()) {
        Domain& obj = store.doms[static_cast<std::size_t>(var_1n)];
        if (obj.remove_above(best_len - 1)) prop.seed_var(var_1n);
        if (obj.empty()) ok = false;
      }
      if (ok && prop.run() != Prop::Fail) dfs();
      store.doms = std::move(snap);
      store.failed = false;
      if (stopped || (cfg.mode == SearchConfig::Mode::Feasibility && feasible_found)) return;
    }
  }
};

}  // namespace

CpResult search(const BoundsTable& bounds, const std::vector<ForbiddenTable>& tables,
                const SearchConfig& config) {
  if (bounds.n < 2) throw std::invalid_argument("cp::search needs n >= 2");
  auto t0 = std::chrono::steady_clock::now();
  CpResult res;
  DomainStore probe(bounds);
  if (probe.failed) {
    res.status = SearchStatus::Infeasible;
    res.stats.total_time_s = res.stats.optimize_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  Searcher sr(bounds, tables, config);
  sr.prop.seed_all();
  if (sr.prop.run() == Prop::Fail) {
    res.status = SearchStatus::Infeasible;
  } else {
    sr.dfs();
    if (sr.stopped) {
      res.status = SearchStatus::Unknown;
    } else if (config.mode == SearchConfig::Mode::Optimize) {
      res.status = sr.best ? SearchStatus::Optimal : SearchStatus::Infeasible;
    } else {
      res.status = sr.feasible_found ? SearchStatus::Feasible : SearchStatus::Infeasible;
    }
  }
  if (sr.best) {
    res.length = sr.best_len;
    res.ruler = sr.best;
  }
  res.stats.nodes = sr.nodes;
  res.stats.optimize_time_s = res.stats.total_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace golomb::cp
