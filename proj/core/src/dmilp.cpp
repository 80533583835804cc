#include "golomb/dmilp.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>
#include <stdexcept>

namespace golomb::dmilp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// One boxed variable per pair distance keeps the basis small: the bound box
// lives on the variables and only the chain identities, path constraints and
// cuts become rows.
lp::LinearProgram build_node_lp(const DNode& node, int n) {
  PairSpace ps(n);
  lp::LinearProgram prog;
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    prog.add_variable(Rat(node.lower[idx]), Rat(node.upper[idx]),
                      "d_" + std::to_string(i) + "_" + std::to_string(j));
  }
  std::vector<Rat> obj(ps.size(), Rat(0));
  for (int k = 1; k < n; ++k) obj[ps.index(k, k + 1)] = 1;
  prog.set_objective(lp::Direction::Minimize, std::move(obj));
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    if (j == i + 1) continue;
    std::vector<std::pair<int, Rat>> terms;
    for (int k = i; k < j; ++k) terms.emplace_back(ps.index(k, k + 1), Rat(1));
    terms.emplace_back(idx, Rat(-1));
    prog.add_row(lp::Sense::EQ, Rat(0), std::move(terms));
  }
  for (const OrderConstraint& oc : node.ordering)
    prog.add_row(lp::Sense::LE, Rat(-1), {{oc.a, Rat(1)}, {oc.b, Rat(-1)}});
  for (const SubsetSumCut& cut : node.cuts) {
    std::vector<std::pair<int, Rat>> terms;
    for (int idx : cut.pair_indices) terms.emplace_back(idx, Rat(1));
    prog.add_row(lp::Sense::GE, Rat(static_cast<long>(cut.rhs)), std::move(terms));
  }
  return prog;
}

bool all_integral(const std::vector<Rat>& values) {
  for (const Rat& v : values)
    if (!rat_is_integer(v)) return false;
  return true;
}

bool all_distinct(const std::vector<Rat>& values) {
  std::vector<Rat> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

Ruler ruler_from_point(int n, const std::vector<Rat>& values) {
  PairSpace ps(n);
  Ruler r;
  r.marks.resize(n, 0);
  for (int k = 1; k < n; ++k) {
    int gap = static_cast<int>(rat_to_long(rat_floor(values[ps.index(k, k + 1)])));
    r.marks[k] = r.marks[k - 1] + gap;
  }
  return r;
}

struct WorseNode {
  bool operator()(const DNode& x, const DNode& y) const {
    if (x.bound != y.bound) return x.bound > y.bound;
    return x.id > y.id;
  }
};

bool ordering_used(const DNode& node, int a, int b) {
  for (const OrderConstraint& oc : node.ordering)
    if ((oc.a == a && oc.b == b) || (oc.a == b && oc.b == a)) return true;
  return false;
}

// Children for the difference strategy.  Preference order: the near-equal pair
// with the smallest value gap whose dichotomy is not already on the path, ties
// by pair index; with no such pair the point must be fractional, and the
// fractional pair closest to half-integrality splits its box instead.
std::vector<DNode> difference_children(const DNode& node, const std::vector<Rat>& values,
                                       const PairSpace& ps) {
  struct Candidate {
    Rat gap;
    int a, b;
  };
  std::vector<Candidate> cands;
  for (int a = 0; a < ps.size(); ++a) {
    for (int b = a + 1; b < ps.size(); ++b) {
      auto [ai, aj] = ps.pair_of(a);
      auto [bi, bj] = ps.pair_of(b);
      if (ai == bi || aj == bj) continue;
      Rat gap = abs(values[a] - values[b]);
      if (gap <= 1) cands.push_back({std::move(gap), a, b});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.gap != y.gap) return x.gap < y.gap;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  for (const Candidate& c : cands) {
    if (ordering_used(node, c.a, c.b)) continue;
    DNode le = node, ge = node;
    le.ordering.push_back({c.a, c.b});
    ge.ordering.push_back({c.b, c.a});
    le.depth = ge.depth = node.depth + 1;
    std::vector<DNode> kids;
    kids.push_back(std::move(le));
    kids.push_back(std::move(ge));
    return kids;
  }
  int pick = -1;
  Rat best_score(-1);
  for (int idx = 0; idx < ps.size(); ++idx) {
    if (rat_is_integer(values[idx])) continue;
    Rat frac = values[idx] - Rat(rat_floor(values[idx]));
    Rat score = frac <= 1 - frac ? frac : 1 - frac;
    if (score > best_score) {
      best_score = score;
      pick = idx;
    }
  }
  // An integral point either has all values distinct (accepted upstream) or a
  // zero-gap pair whose dichotomy cannot already be on the path, since the LP
  // point satisfies every path constraint.
  if (pick < 0) throw std::logic_error("difference branching found no split");
  long fl = rat_to_long(rat_floor(values[pick]));
  DNode down = node, up = node;
  down.upper[pick] = static_cast<int>(fl);
  up.lower[pick] = static_cast<int>(fl) + 1;
  down.depth = up.depth = node.depth + 1;
  std::vector<DNode> kids;
  kids.push_back(std::move(down));
  kids.push_back(std::move(up));
  return kids;
}

}  // namespace

DNode root_node(const BoundsTable& b) {
  DNode root;
  root.lower = b.lower;
  root.upper = b.upper;
  root.bound = Rat(0);
  return root;
}

std::optional<std::pair<MarkPair, MarkPair>> difference_branch_select(
    const std::map<MarkPair, Rat>& point) {
  std::optional<std::pair<MarkPair, MarkPair>> best;
  Rat best_gap;
  for (auto a = point.begin(); a != point.end(); ++a) {
    for (auto b = std::next(a); b != point.end(); ++b) {
      if (a->first.first == b->first.first || a->first.second == b->first.second) continue;
      Rat gap = abs(a->second - b->second);
      if (gap > 1) continue;
      if (!best || gap < best_gap) {
        best = {a->first, b->first};
        best_gap = std::move(gap);
      }
    }
  }
  return best;
}

std::vector<DNode> left_branch_children(const DNode& node, const BoundsTable& b) {
  PairSpace ps(b.n);
  DNode base = node;
  if (base.lower.empty()) {
    base.lower = b.lower;
    base.upper = b.upper;
  }
  for (int k = 1; k < b.n; ++k) {
    int idx = ps.index(k, k + 1);
    if (base.lower[idx] == base.upper[idx]) continue;
    std::vector<DNode> kids;
    for (int v = base.lower[idx]; v <= base.upper[idx]; ++v) {
      DNode child = base;
      child.lower[idx] = child.upper[idx] = v;
      child.depth = base.depth + 1;
      kids.push_back(std::move(child));
    }
    return kids;
  }
  return {};
}

NodeRelaxation solve_node_relaxation(DNode& node, int n) {
  PairSpace ps(n);
  NodeRelaxation out;
  lp::LinearProgram prog = build_node_lp(node, n);
  const int round_cap = ps.size();
  for (int round = 0;; ++round) {
    lp::LPSolution sol = lp::solve_lp(prog);
    if (sol.status != lp::LPStatus::Optimal) {
      out.status = sol.status;
      return out;
    }
    out.bound = sol.objective;
    out.pair_values = sol.x;
    if (round == round_cap) break;
    auto cut = separate_subset_sum(out.pair_values);
    if (!cut) break;
    std::vector<std::pair<int, Rat>> terms;
    for (int idx : cut->pair_indices) terms.emplace_back(idx, Rat(1));
    prog.add_row(lp::Sense::GE, Rat(static_cast<long>(cut->rhs)), std::move(terms));
    node.cuts.push_back(std::move(*cut));
    ++out.cuts_added;
  }
  out.status = lp::LPStatus::Optimal;
  return out;
}

DResult solve_d_formulation(int n, int L, const BoundsTable& b, BranchStrategy strategy,
                            const Budget& budget) {
  if (n < 2) throw std::invalid_argument("distance formulation needs n >= 2");
  if (b.n != n) throw std::invalid_argument("bounds table order mismatch");
  auto t0 = Clock::now();
  DResult res;
  PairSpace ps(n);

  DNode root = root_node(b);
  bool crossed = b.infeasible;
  for (int idx = 0; idx < ps.size(); ++idx) {
    root.upper[idx] = std::min(root.upper[idx], L);
    root.lower[idx] = std::max(root.lower[idx], 1);
    if (root.lower[idx] > root.upper[idx]) crossed = true;
  }
  if (crossed) {
    res.status = DStatus::Infeasible;
    res.stats.total_time_s = res.stats.optimize_time_s = seconds_since(t0);
    return res;
  }

  std::priority_queue<DNode, std::vector<DNode>, WorseNode> open;
  root.id = 0;
  open.push(std::move(root));
  std::uint64_t next_id = 1;
  int incumbent = std::numeric_limits<int>::max();
  std::optional<Ruler> best;
  bool proven = false;
  bool expired = false;

  while (!open.empty()) {
    if (budget.node_limit && res.stats.nodes >= budget.node_limit) {
      expired = true;
      break;
    }
    if (budget.time_limit_s > 0.0 && seconds_since(t0) >= budget.time_limit_s) {
      expired = true;
      break;
    }
    DNode node = open.top();
    open.pop();
    // Best-first: once the queue minimum reaches the incumbent, every open
    // node is pruned at once and the incumbent is proven optimal.
    if (incumbent != std::numeric_limits<int>::max() && node.bound >= incumbent) {
      proven = true;
      break;
    }
    res.stats.nodes += 1;
    NodeRelaxation rel = solve_node_relaxation(node, n);
    res.stats.cuts.subset_sum += rel.cuts_added;
    if (rel.status == lp::LPStatus::Infeasible) continue;
    if (rel.status != lp::LPStatus::Optimal)
      throw std::logic_error("boxed node relaxation cannot be unbounded");
    node.bound = rel.bound;
    if (incumbent != std::numeric_limits<int>::max() && node.bound >= incumbent) continue;

    if (all_integral(rel.pair_values) && all_distinct(rel.pair_values)) {
      Ruler r = ruler_from_point(n, rel.pair_values);
      if (r.length() < incumbent) {
        incumbent = r.length();
        best = std::move(r);
      }
      continue;  // the point attains the node bound, so the node is settled
    }

    std::vector<DNode> kids = strategy == BranchStrategy::Left
                                  ? left_branch_children(node, b)
                                  : difference_children(node, rel.pair_values, ps);
    for (DNode& kid : kids) {
      kid.bound = node.bound;
      kid.id = next_id++;
      open.push(std::move(kid));
    }
  }

  if (expired && !proven) {
    res.status = DStatus::Unknown;
  } else if (incumbent != std::numeric_limits<int>::max()) {
    res.status = DStatus::Optimal;
  } else {
    res.status = DStatus::Infeasible;
  }
  if (best) {
    res.length = incumbent;
    res.ruler = std::move(best);
  }
  res.stats.total_time_s = res.stats.optimize_time_s = seconds_since(t0);
  return res;
}

}  // namespace golomb::dmilp
