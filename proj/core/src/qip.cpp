#include "golomb/qip.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace golomb::qip {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rat cut_lhs(const Cut& cut, const std::vector<Rat>& y) {
  Rat s = 0;
  for (std::size_t i = 0; i < cut.support.size(); ++i) s += Rat(cut.coeff[i]) * y[cut.support[i]];
  return s;
}

bool cut_violated(const Cut& cut, const std::vector<Rat>& y) { return cut_lhs(cut, y) > cut.rhs; }

std::string cut_key(const Cut& cut) {
  std::string key = std::to_string(static_cast<int>(cut.family));
  for (std::size_t i = 0; i < cut.support.size(); ++i)
    key += ' ' + std::to_string(cut.support[i]) + '*' + std::to_string(cut.coeff[i]);
  return key + " <= " + rat_to_string(cut.rhs);
}

const char* family_tag(CutFamily family) {
  switch (family) {
    case CutFamily::Golomb: return "golomb";
    case CutFamily::Clique: return "clique";
    case CutFamily::NoGood: return "nogood";
  }
  return "?";
}

// --- Bron-Kerbosch over word-packed vertex sets ---------------------------

struct VertexSets {
  int n = 0;
  int words = 0;
  std::vector<std::uint64_t> adj;  // row-major, `words` per vertex

  bool edge(int a, int b) const { return adj[a * words + b / 64] >> (b % 64) & 1; }
};

int popcount_and(const std::uint64_t* a, const std::uint64_t* b, int words) {
  int c = 0;
  for (int w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

void bk_expand(const VertexSets& g, std::vector<int>& r, std::vector<std::uint64_t>& p,
               std::vector<std::uint64_t>& x, std::vector<std::vector<int>>& out) {
  bool p_empty = std::all_of(p.begin(), p.end(), [](std::uint64_t w) { return w == 0; });
  if (p_empty && std::all_of(x.begin(), x.end(), [](std::uint64_t w) { return w == 0; })) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex of P or X covering most of P; candidates are P minus
  // the pivot's neighbourhood, scanned ascending for determinism.
  int pivot = -1, best = -1;
  for (int v = 0; v < g.n; ++v) {
    bool in_p = p[v / 64] >> (v % 64) & 1, in_x = x[v / 64] >> (v % 64) & 1;
    if (!in_p && !in_x) continue;
    int c = popcount_and(p.data(), g.adj.data() + v * g.words, g.words);
    if (c > best) best = c, pivot = v;
  }
  for (int v = 0; v < g.n; ++v) {
    if (!(p[v / 64] >> (v % 64) & 1)) continue;
    if (pivot >= 0 && g.edge(pivot, v)) continue;
    std::vector<std::uint64_t> np(g.words), nx(g.words);
    for (int w = 0; w < g.words; ++w) {
      np[w] = p[w] & g.adj[v * g.words + w];
      nx[w] = x[w] & g.adj[v * g.words + w];
    }
    r.push_back(v);
    bk_expand(g, r, np, nx, out);
    r.pop_back();
    p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    x[v / 64] |= std::uint64_t{1} << (v % 64);
  }
}

// --- solver state ----------------------------------------------------------

struct Solver {
  int L = 0;
  int target = 0;
  QConfig cfg;
  const BoundsTable* bounds = nullptr;
  std::vector<Cut> templates;  // window cuts, separated lazily per node
  CutPool pool;                // no-good cuts, valid tree-wide
  std::set<std::string> pool_keys;
  SolveStats stats;
  Clock::time_point t0 = Clock::now();
  bool expired = false;

  bool out_of_budget() {
    if (expired) return true;
    const Budget& b = cfg.budget;
    if (b.node_limit > 0 && stats.nodes >= b.node_limit) expired = true;
    if (b.time_limit_s > 0.0 && seconds_since(t0) >= b.time_limit_s) expired = true;
    return expired;
  }
};

lp::LinearProgram node_lp(const Solver& s, const QNode& node) {
  lp::LinearProgram prog = placement_relaxation({s.L, s.target});
  for (int v : node.prefix) prog.lower[v] = lp::Bound::at(Rat(1));
  int last = node.prefix.back();
  auto fix_zero = [&prog](int v) { prog.upper[v] = lp::Bound::at(Rat(0)); };
  for (int v = 1, k = 1; v < last; ++v) {
    if (v == node.prefix[k]) {
      ++k;
      continue;
    }
    fix_zero(v);
  }
  for (int v = last + 1; v <= s.L; ++v)
    for (int m : node.prefix)
      if (std::binary_search(node.used.begin(), node.used.end(), v - m)) {
        fix_zero(v);
        break;
      }
  auto add_cut = [&prog](const Cut& cut) {
    std::vector<std::pair<int, Rat>> terms;
    for (std::size_t i = 0; i < cut.support.size(); ++i)
      terms.emplace_back(cut.support[i], Rat(cut.coeff[i]));
    prog.add_row(lp::Sense::LE, cut.rhs, std::move(terms));
  };
  for (int idx : node.window_cuts) add_cut(s.templates[idx]);
  for (const Cut& cut : node.clique_cuts) add_cut(cut);
  for (const Cut& cut : s.pool.cuts) add_cut(cut);
  return prog;
}

bool integral_point(const std::vector<Rat>& y) {
  return std::all_of(y.begin(), y.end(), [](const Rat& v) { return rat_is_integer(v); });
}

std::vector<int> ones_of(const std::vector<Rat>& y) {
  std::vector<int> marks;
  for (int l = 0; l < static_cast<int>(y.size()); ++l)
    if (y[l] == 1) marks.push_back(l);
  return marks;
}

struct Outcome {
  enum class Kind { Pruned, Reached, Candidate, Branch } kind = Kind::Pruned;
  std::vector<int> marks;  // Reached / Candidate
  Rat value;               // Candidate (integral) / Branch (fractional bound)
};

// Solves the node relaxation to a separation fixpoint.  `prune_lt` discards
// the node once its bound drops below the threshold; `inline_benders` is the
// one-tree mode, where integer points feed the no-good pool and the LP is
// re-solved in place, while the master mode hands integer points back as
// candidates.
Outcome process_node(Solver& s, QNode& node, const Rat& prune_lt, bool inline_benders) {
  lp::LinearProgram prog = node_lp(s, node);
  int depth_cap = s.cfg.clique_depth_cap >= 0 ? s.cfg.clique_depth_cap : s.target / 2;
  while (true) {
    lp::LPSolution sol = lp::solve_lp(prog);
    if (sol.status != lp::LPStatus::Optimal) return {};
    node.lp_value = sol.objective;
    if (sol.objective < prune_lt) return {};
    auto add_cut = [&prog](const Cut& cut) {
      std::vector<std::pair<int, Rat>> terms;
      for (std::size_t i = 0; i < cut.support.size(); ++i)
        terms.emplace_back(cut.support[i], Rat(cut.coeff[i]));
      prog.add_row(lp::Sense::LE, cut.rhs, std::move(terms));
    };
    if (integral_point(sol.x)) {
      std::vector<int> marks = ones_of(sol.x);
      if (!inline_benders) return {Outcome::Kind::Candidate, std::move(marks), sol.objective};
      NoGoodSeparation sep = benders_nogood_cuts(marks, s.cfg.nogood_mode);
      if (sep.feasible) {
        if (static_cast<int>(marks.size()) >= s.target)
          return {Outcome::Kind::Reached, std::move(marks), sol.objective};
        // A Golomb integer optimum below target settles the node: nothing in
        // it can do better than the relaxation optimum.
        return {Outcome::Kind::Candidate, std::move(marks), sol.objective};
      }
      std::size_t before = s.pool.cuts.size();
      for (Cut& cut : sep.cuts) {
        if (!s.pool_keys.insert(cut_key(cut)).second) continue;
        cut.hits = 1;
        add_cut(cut);
        s.pool.cuts.push_back(std::move(cut));
        ++s.stats.cuts.nogood;
      }
      // A violated cut cannot already sit in this relaxation, so the pool
      // must have grown; anything else would loop on the same point.
      if (s.pool.cuts.size() == before)
        throw std::logic_error("no-good separation made no progress");
      continue;
    }
    bool separated = false;
    if (s.cfg.window_cuts) {
      for (int idx = 0; idx < static_cast<int>(s.templates.size()); ++idx) {
        if (std::binary_search(node.window_cuts.begin(), node.window_cuts.end(), idx)) continue;
        if (!cut_violated(s.templates[idx], sol.x)) continue;
        node.window_cuts.insert(
            std::lower_bound(node.window_cuts.begin(), node.window_cuts.end(), idx), idx);
        add_cut(s.templates[idx]);
        ++s.templates[idx].hits;
        ++s.stats.cuts.golomb;
        separated = true;
      }
    }
    if (!separated && s.cfg.clique_cuts && node.depth <= depth_cap) {
      for (Cut& cut : separate_clique_cuts(sol.x, node, s.cfg.clique_max_fractional)) {
        cut.hits = 1;
        add_cut(cut);
        node.clique_cuts.push_back(std::move(cut));
        ++s.stats.cuts.clique;
        separated = true;
      }
    }
    if (!separated) return {Outcome::Kind::Branch, {}, sol.objective};
  }
}

QNode root_qnode() { return {{0}, {}, {}, {}, Rat(0), 0}; }

Ruler ruler_of(std::vector<int> marks) { return Ruler{std::move(marks)}; }

// Largest placement seen anywhere in the search, with a witness.
struct Best {
  int count = 0;
  std::vector<int> marks;

  void offer(const std::vector<int>& placement) {
    if (static_cast<int>(placement.size()) > count) {
      count = static_cast<int>(placement.size());
      marks = placement;
    }
  }
};

// One depth-first tree.  In one-tree mode this is the whole search; the master
// mode runs it to exhaustion per Benders iteration, returning the best integer
// candidate for the outer separation check.
struct TreeResult {
  QStatus status = QStatus::Unknown;
  std::vector<int> reached;    // target placement when status == Reached
  std::vector<int> candidate;  // best master point otherwise (may be empty)
  Rat candidate_value;
};

TreeResult run_tree(Solver& s, Best& best, bool inline_benders) {
  TreeResult res;
  std::vector<QNode> stack{root_qnode()};
  best.offer({0});
  bool have_candidate = false;
  while (!stack.empty()) {
    if (s.out_of_budget()) return res;  // Unknown
    QNode node = std::move(stack.back());
    stack.pop_back();
    ++s.stats.nodes;
    // One-tree prunes against the incumbent, so exhaustion pins the exact
    // maximum; the master tree prunes against the target, which keeps its
    // integer candidates at or above it for the outer separation loop.
    Rat prune_lt = inline_benders ? Rat(best.count + 1) : Rat(s.target);
    if (have_candidate) {
      Rat beat = res.candidate_value + 1;
      if (beat > prune_lt) prune_lt = beat;
    }
    Outcome out = process_node(s, node, prune_lt, inline_benders);
    switch (out.kind) {
      case Outcome::Kind::Pruned:
        break;
      case Outcome::Kind::Reached:
        res.status = QStatus::Reached;
        res.reached = std::move(out.marks);
        return res;
      case Outcome::Kind::Candidate:
        if (inline_benders) {  // Golomb point below target
          best.offer(out.marks);
        } else if (!have_candidate || out.value > res.candidate_value) {
          have_candidate = true;
          res.candidate = std::move(out.marks);
          res.candidate_value = out.value;
        }
        break;
      case Outcome::Kind::Branch: {
        std::vector<QNode> children = left_mark_branch(node, *s.bounds);
        for (QNode& child : children)
          if (static_cast<int>(child.prefix.size()) >= s.target) {
            res.status = QStatus::Reached;
            res.reached = std::move(child.prefix);
            return res;
          }
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
          best.offer(it->prefix);
          stack.push_back(std::move(*it));
        }
        break;
      }
    }
  }
  res.status = QStatus::Exhausted;
  return res;
}

}  // namespace

lp::LinearProgram placement_relaxation(const PlacementModel& model) {
  lp::LinearProgram prog;
  for (int l = 0; l <= model.L; ++l)
    prog.add_variable(Rat(0), Rat(1), "y" + std::to_string(l));
  prog.lower[0] = lp::Bound::at(Rat(1));
  prog.set_objective(lp::Direction::Maximize, std::vector<Rat>(model.L + 1, Rat(1)));
  return prog;
}

void CutPool::dump(std::ostream& os) const {
  for (const Cut& cut : cuts) {
    os << family_tag(cut.family) << ' ';
    for (std::size_t i = 0; i < cut.support.size(); ++i)
      os << (i ? "," : "") << cut.support[i];
    os << ' ';
    for (std::size_t i = 0; i < cut.coeff.size(); ++i) os << (i ? "," : "") << cut.coeff[i];
    os << ' ' << rat_to_string(cut.rhs) << " hits=" << cut.hits << '\n';
  }
}

std::vector<Cut> golomb_cuts(int L, const OptimaTable& optima, bool include_ap) {
  std::vector<Cut> out;
  std::vector<int> strides{1};
  if (include_ap)
    for (int c = 2; c <= L / 2; ++c) strides.push_back(c);
  for (int c : strides) {
    for (int i = 2; optima.has(i + 1); ++i) {
      int w = optima.length(i + 1);  // window size; a lower bound only shrinks it
      if ((w - 1) * c > L) break;
      for (int l = 0; l + (w - 1) * c <= L; ++l) {
        Cut cut{CutFamily::Golomb, {}, std::vector<int>(w, 1), Rat(i), 0};
        cut.support.reserve(w);
        for (int t = 0; t < w; ++t) cut.support.push_back(l + t * c);
        out.push_back(std::move(cut));
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> bron_kerbosch(int vertices,
                                            const std::vector<std::pair<int, int>>& edges) {
  if (vertices == 0) return {};
  VertexSets g;
  g.n = vertices;
  g.words = (vertices + 63) / 64;
  g.adj.assign(static_cast<std::size_t>(vertices) * g.words, 0);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    g.adj[a * g.words + b / 64] |= std::uint64_t{1} << (b % 64);
    g.adj[b * g.words + a / 64] |= std::uint64_t{1} << (a % 64);
  }
  std::vector<std::uint64_t> p(g.words, 0), x(g.words, 0);
  for (int v = 0; v < vertices; ++v) p[v / 64] |= std::uint64_t{1} << (v % 64);
  std::vector<std::vector<int>> out;
  std::vector<int> r;
  bk_expand(g, r, p, x, out);
  for (auto& clique : out) std::sort(clique.begin(), clique.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cut> separate_clique_cuts(const std::vector<Rat>& y, const QNode& node,
                                      int max_fractional) {
  std::vector<int> frac;
  for (int l = 0; l < static_cast<int>(y.size()); ++l)
    if (y[l] > 0 && y[l] < 1) frac.push_back(l);
  if (frac.empty() || static_cast<int>(frac.size()) > max_fractional) return {};
  std::vector<std::pair<int, int>> edges;
  for (std::size_t a = 0; a + 1 < frac.size(); ++a)
    for (std::size_t b = a + 1; b < frac.size(); ++b)
      if (std::binary_search(node.used.begin(), node.used.end(), frac[b] - frac[a]))
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  if (edges.empty()) return {};
  std::vector<Cut> cuts;
  for (const std::vector<int>& clique : bron_kerbosch(static_cast<int>(frac.size()), edges)) {
    Rat weight = 0;
    for (int v : clique) weight += y[frac[v]];
    if (weight <= 1) continue;
    Cut cut{CutFamily::Clique, {}, std::vector<int>(clique.size(), 1), Rat(1), 0};
    for (int v : clique) cut.support.push_back(frac[v]);
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

NoGoodSeparation benders_nogood_cuts(const std::vector<int>& marks, NoGoodMode mode) {
  NoGoodSeparation sep;
  std::vector<std::pair<int, std::vector<std::pair<int, int>>>> conflicts;
  std::map<int, std::vector<std::pair<int, int>>> by_distance;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i)
    for (std::size_t j = i + 1; j < marks.size(); ++j)
      by_distance[marks[j] - marks[i]].emplace_back(marks[i], marks[j]);
  for (auto& [u, pairs] : by_distance)
    if (pairs.size() >= 2) conflicts.emplace_back(u, std::move(pairs));
  if (conflicts.empty()) {
    sep.feasible = true;
    return sep;
  }
  auto pairwise = [&sep](const std::vector<std::pair<int, int>>& pairs) {
    for (std::size_t a = 0; a + 1 < pairs.size(); ++a)
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        std::vector<int> support{pairs[a].first, pairs[a].second, pairs[b].first,
                                 pairs[b].second};
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        Rat rhs(static_cast<int>(support.size()) - 1);
        std::vector<int> coeff(support.size(), 1);
        sep.cuts.push_back({CutFamily::NoGood, std::move(support), std::move(coeff), rhs, 0});
      }
  };
  if (mode == NoGoodMode::Pairwise) {
    for (auto& [u, pairs] : conflicts) pairwise(pairs);
    return sep;
  }
  // Aggregate study mode: one weighted row per conflicting distance.  The row
  // may fail to exclude the separating point for wide placements, so pairwise
  // cuts back it up whenever no aggregate row is violated.
  bool any_violated = false;
  for (auto& [u, pairs] : conflicts) {
    Cut cut{CutFamily::NoGood, {}, {}, Rat(static_cast<int>(marks.size())) / 2 + 1, 0};
    long long lhs_at_point = 0;
    for (int l : marks) {
      int mult = 0;
      for (int k : marks)
        if (std::abs(k - l) == u) ++mult;
      if (mult == 0) continue;
      cut.support.push_back(l);
      cut.coeff.push_back(mult);
      lhs_at_point += mult;
    }
    if (Rat(static_cast<long>(lhs_at_point)) > cut.rhs) any_violated = true;
    sep.cuts.push_back(std::move(cut));
  }
  if (!any_violated)
    for (auto& [u, pairs] : conflicts) pairwise(pairs);
  return sep;
}

std::vector<QNode> left_mark_branch(const QNode& node, const BoundsTable& b) {
  int m = static_cast<int>(node.prefix.size());
  if (m >= b.n) return {};
  int lo = std::max(b.lower_of(1, m + 1), node.prefix.back() + 1);
  int hi = b.upper_of(1, m + 1);
  std::vector<QNode> children;
  for (int v = lo; v <= hi; ++v) {
    std::vector<int> fresh;
    fresh.reserve(m);
    bool ok = true;
    for (int mark : node.prefix) {
      int d = v - mark;
      if (std::binary_search(node.used.begin(), node.used.end(), d)) {
        ok = false;
        break;
      }
      fresh.push_back(d);
    }
    if (!ok) continue;
    QNode child = node;
    child.prefix.push_back(v);
    child.used.insert(child.used.end(), fresh.begin(), fresh.end());
    std::sort(child.used.begin(), child.used.end());
    child.depth = node.depth + 1;
    children.push_back(std::move(child));
  }
  return children;
}

QResult max_marks(int L, int target, const OptimaTable& optima, const QConfig& config,
                  const std::optional<BoundsTable>& bounds) {
  if (L < 0 || target < 1) throw std::invalid_argument("max_marks needs L >= 0, target >= 1");
  Clock::time_point t0 = Clock::now();
  QResult res;
  if (target == 1) {
    res.status = QStatus::Reached;
    res.best_found = 1;
    res.ruler = Ruler{{0}};
    return res;
  }
  BoundsTable table = bounds ? *bounds : initial_bounds(target, L, optima);
  if (table.n != target || table.length > L)
    throw std::invalid_argument("bounds table does not match the placement model");
  if (table.infeasible) {
    res.status = QStatus::Exhausted;
    res.best_found = 1;
    res.ruler = Ruler{{0}};
    res.stats.total_time_s = seconds_since(t0);
    return res;
  }
  Solver s;
  s.L = L;
  s.target = target;
  s.cfg = config;
  s.bounds = &table;
  s.t0 = t0;
  if (config.window_cuts) s.templates = golomb_cuts(L, optima, config.ap_cuts);

  Best best;
  auto finish = [&](QStatus status, std::vector<int> marks) {
    res.status = status;
    res.best_found = std::max(best.count, static_cast<int>(marks.size()));
    res.ruler = ruler_of(std::move(marks));
    res.stats = s.stats;
    res.stats.total_time_s = res.stats.optimize_time_s = seconds_since(t0);
    return res;
  };

  if (config.search == SearchMode::OneTree) {
    TreeResult tree = run_tree(s, best, true);
    if (tree.status == QStatus::Reached) return finish(QStatus::Reached, std::move(tree.reached));
    return finish(tree.status, std::move(best.marks));
  }
  // Master iterations: solve to exhaustion, then separate the best integer
  // point; its no-good cuts reshape the next full solve.
  while (true) {
    TreeResult tree = run_tree(s, best, false);
    if (tree.status == QStatus::Reached) return finish(QStatus::Reached, std::move(tree.reached));
    if (tree.status == QStatus::Unknown) return finish(QStatus::Unknown, std::move(best.marks));
    if (tree.candidate.empty()) return finish(QStatus::Exhausted, std::move(best.marks));
    NoGoodSeparation sep = benders_nogood_cuts(tree.candidate, config.nogood_mode);
    if (sep.feasible)  // a Golomb master optimum at or above target
      return finish(QStatus::Reached, std::move(tree.candidate));
    for (Cut& cut : sep.cuts) {
      if (!s.pool_keys.insert(cut_key(cut)).second) continue;
      cut.hits = 1;
      s.pool.cuts.push_back(std::move(cut));
      ++s.stats.cuts.nogood;
    }
  }
}

LengthCertificate certify_optimal_length(int n, const OptimaTable& optima,
                                         const QConfig& config) {
  if (n < 1) throw std::invalid_argument("certify_optimal_length needs n >= 1");
  if (config.nogood_mode == NoGoodMode::Aggregate)
    throw std::invalid_argument("aggregate no-good cuts are study-only; certification needs pairwise");
  LengthCertificate cert;
  if (n == 1) {
    cert.length = 0;
    cert.witness = Ruler{{0}};
    cert.proven = true;
    return cert;
  }
  OptimaTable restricted = optima.restricted_below(n);
  for (int L = restricted.length(n);; ++L) {
    QResult res = max_marks(L, n, restricted, config);
    cert.attempts.push_back({L, res});
    if (res.status == QStatus::Reached) {
      cert.length = L;
      cert.witness = res.ruler;
      cert.proven = true;
      return cert;
    }
    if (res.status == QStatus::Unknown) return cert;  // proven stays false
  }
}

}  // namespace golomb::qip
