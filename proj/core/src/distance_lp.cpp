#include "golomb/distance_lp.hpp"

#include <stdexcept>

#include "golomb/subset_sum.hpp"

namespace golomb {
namespace {

// Variables of the d-form are the consecutive gaps; any pair distance is the
// sum of the gaps it spans.
std::vector<std::pair<int, Rat>> gap_terms(int i, int j) {
  std::vector<std::pair<int, Rat>> terms;
  for (int k = i; k < j; ++k) terms.emplace_back(k - 1, Rat(1));
  return terms;
}

lp::LinearProgram build_d_lp(const BoundsTable& bounds) {
  PairSpace ps(bounds.n);
  lp::LinearProgram prog;
  for (int k = 1; k < bounds.n; ++k) {
    int idx = ps.index(k, k + 1);
    prog.add_variable(Rat(bounds.lower[idx]), Rat(bounds.upper[idx]),
                      "g" + std::to_string(k));
  }
  std::vector<Rat> obj(prog.num_vars(), Rat(1));
  prog.set_objective(lp::Direction::Minimize, obj);
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    if (j == i + 1) continue;
    prog.add_row(lp::Sense::GE, Rat(bounds.lower[idx]), gap_terms(i, j));
    prog.add_row(lp::Sense::LE, Rat(bounds.upper[idx]), gap_terms(i, j));
  }
  return prog;
}

std::vector<Rat> pair_values_from_gaps(int n, const std::vector<Rat>& gaps) {
  PairSpace ps(n);
  std::vector<Rat> values(ps.size());
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    Rat v(0);
    for (int k = i; k < j; ++k) v += gaps[k - 1];
    values[idx] = v;
  }
  return values;
}

}  // namespace

DistanceLpResult d_lp_bound(const BoundsTable& bounds) {
  DistanceLpResult res;
  if (bounds.infeasible) {
    res.status = lp::LPStatus::Infeasible;
    return res;
  }
  PairSpace ps(bounds.n);
  lp::LinearProgram prog = build_d_lp(bounds);
  int max_rounds = ps.size();
  for (int round = 0; round <= max_rounds; ++round) {
    lp::LPSolution sol = lp::solve_lp(prog);
    res.iterations += sol.iterations;
    if (sol.status != lp::LPStatus::Optimal) {
      res.status = sol.status;
      return res;
    }
    res.bound = sol.objective;
    res.pair_values = pair_values_from_gaps(bounds.n, sol.x);
    if (round == max_rounds) break;
    auto cut = separate_subset_sum(res.pair_values);
    if (!cut) break;
    std::vector<std::pair<int, Rat>> terms;
    for (int idx : cut->pair_indices) {
      auto [i, j] = ps.pair_of(idx);
      auto t = gap_terms(i, j);
      terms.insert(terms.end(), t.begin(), t.end());
    }
    prog.add_row(lp::Sense::GE, Rat(static_cast<long>(cut->rhs)), std::move(terms));
    ++res.cuts_added;
  }
  res.status = lp::LPStatus::Optimal;
  return res;
}

namespace {

struct DeModel {
  lp::LinearProgram prog;
  std::vector<int> pair_var;  // pair index -> distance column
  bool empty_window = false;
};

DeModel build_de_lp(const BoundsTable& bounds) {
  PairSpace ps(bounds.n);
  DeModel m;
  m.pair_var.resize(ps.size());
  for (int idx = 0; idx < ps.size(); ++idx) {
    if (bounds.lower[idx] > bounds.upper[idx]) m.empty_window = true;
  }
  if (m.empty_window || bounds.infeasible) {
    m.empty_window = true;
    return m;
  }
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    m.pair_var[idx] = m.prog.add_variable(
        Rat(bounds.lower[idx]), Rat(bounds.upper[idx]),
        "d_" + std::to_string(i) + "_" + std::to_string(j));
  }
  // One indicator column per admissible value of each pair.
  std::vector<std::vector<std::pair<int, Rat>>> value_users(bounds.length + 1);
  for (int idx = 0; idx < ps.size(); ++idx) {
    std::vector<std::pair<int, Rat>> assign_row, link_row;
    for (int v = bounds.lower[idx]; v <= bounds.upper[idx]; ++v) {
      int col = m.prog.add_variable(Rat(0), Rat(1));
      assign_row.emplace_back(col, Rat(1));
      link_row.emplace_back(col, Rat(v));
      if (v <= bounds.length) value_users[v].emplace_back(col, Rat(1));
    }
    m.prog.add_row(lp::Sense::EQ, Rat(1), std::move(assign_row));
    link_row.emplace_back(m.pair_var[idx], Rat(-1));
    m.prog.add_row(lp::Sense::EQ, Rat(0), std::move(link_row));
  }
  for (int v = 1; v <= bounds.length; ++v) {
    if (value_users[v].size() > 1)
      m.prog.add_row(lp::Sense::LE, Rat(1), std::move(value_users[v]));
  }
  // Each distance is the sum of the consecutive gaps it spans.
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    if (j == i + 1) continue;
    std::vector<std::pair<int, Rat>> terms;
    for (int k = i; k < j; ++k) terms.emplace_back(m.pair_var[ps.index(k, k + 1)], Rat(1));
    terms.emplace_back(m.pair_var[idx], Rat(-1));
    m.prog.add_row(lp::Sense::EQ, Rat(0), std::move(terms));
  }
  std::vector<Rat> obj(m.prog.num_vars(), Rat(0));
  for (int k = 1; k < bounds.n; ++k) obj[m.pair_var[ps.index(k, k + 1)]] = 1;
  m.prog.set_objective(lp::Direction::Minimize, std::move(obj));
  return m;
}

}  // namespace

DistanceLpResult de_lp_bound(const BoundsTable& bounds) {
  DistanceLpResult res;
  DeModel m = build_de_lp(bounds);
  if (m.empty_window) {
    res.status = lp::LPStatus::Infeasible;
    return res;
  }
  lp::LPSolution sol = lp::solve_lp(m.prog);
  res.iterations = sol.iterations;
  res.status = sol.status;
  if (sol.status != lp::LPStatus::Optimal) return res;
  res.bound = sol.objective;
  PairSpace ps(bounds.n);
  res.pair_values.resize(ps.size());
  for (int idx = 0; idx < ps.size(); ++idx) res.pair_values[idx] = sol.x[m.pair_var[idx]];
  return res;
}

DeLpProber::DeLpProber(const BoundsTable& bounds) {
  DeModel m = build_de_lp(bounds);
  if (m.empty_window) {
    infeasible_ = true;
    first_done_ = true;
    return;
  }
  pair_var_ = m.pair_var;
  num_vars_ = m.prog.num_vars();
  solver_.emplace(m.prog);
}

bool DeLpProber::infeasible() {
  if (!first_done_) {
    lp::LPSolution sol = solver_->solve();
    iterations_ += sol.iterations;
    infeasible_ = sol.status == lp::LPStatus::Infeasible;
    first_done_ = true;
  }
  return infeasible_;
}

std::optional<Rat> DeLpProber::probe(int pair_index, bool maximize) {
  if (infeasible()) return std::nullopt;
  std::vector<Rat> obj(num_vars_, Rat(0));
  obj[pair_var_.at(pair_index)] = 1;
  lp::LPSolution sol = solver_->resolve(
      maximize ? lp::Direction::Maximize : lp::Direction::Minimize, obj);
  iterations_ += sol.iterations;
  if (sol.status != lp::LPStatus::Optimal)
    throw std::logic_error("bounded probe reported unbounded");
  return sol.objective;
}

}  // namespace golomb
