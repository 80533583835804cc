#include "golomb/optima.hpp"

#include <stdexcept>

#include "golomb/oracle.hpp"

namespace golomb {

const OptimaTable& OptimaTable::standard() {
  static const OptimaTable table = [] {
    OptimaTable t;
    for (int m = 1; m <= 7; ++m)
      t.set(m, brute_force_optimal(m).length, OptimaSource::OracleComputed);
    constexpr int published[] = {34, 44, 55, 72, 85, 106, 127};  // orders 8..14
    for (int m = 8; m <= 14; ++m) t.set(m, published[m - 8], OptimaSource::Known);
    return t;
  }();
  return table;
}

OptimaTable OptimaTable::restricted_below(int n) const {
  if (n < 2) throw std::invalid_argument("restricted_below needs n >= 2");
  if (!has(n - 1)) throw std::out_of_range("optima table does not cover order n-1");
  OptimaTable t;
  for (const auto& [order, entry] : entries_) {
    if (order < n) t.entries_[order] = entry;
  }
  t.set(n, t.length(n - 1) + 1, OptimaSource::DerivedLowerBound);
  return t;
}

void OptimaTable::set(int order, int length, OptimaSource source) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (order == 1 && length != 0) throw std::invalid_argument("order 1 has length 0");
  entries_[order] = {length, source};
  // Lengths must be strictly increasing in the order.
  int prev = -1;
  for (const auto& [m, e] : entries_) {
    if (e.first <= prev) throw std::invalid_argument("optima lengths must increase");
    prev = e.first;
  }
}

bool OptimaTable::has(int order) const { return entries_.count(order) != 0; }

int OptimaTable::length(int order) const {
  auto it = entries_.find(order);
  if (it == entries_.end()) throw std::out_of_range("no optimum recorded for this order");
  return it->second.first;
}

OptimaSource OptimaTable::source(int order) const {
  auto it = entries_.find(order);
  if (it == entries_.end()) throw std::out_of_range("no optimum recorded for this order");
  return it->second.second;
}

int OptimaTable::max_order() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

int OptimaTable::max_marks_for_length(int len) const {
  int best = 0;
  for (const auto& [order, entry] : entries_) {
    if (entry.first <= len) best = order;
  }
  return best;
}

int optima_lookup(int order) { return OptimaTable::standard().length(order); }

}  // namespace golomb
