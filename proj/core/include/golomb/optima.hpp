#pragma once

#include <map>

namespace golomb {

// How a table entry was obtained.  DerivedLowerBound entries are valid lower
// bounds on the true optimum, not the optimum itself; every consumer of the
// table (initial bounds, cut windows, suffix counting) stays sound under that
// weaker guarantee.
enum class OptimaSource { Known, OracleComputed, DerivedLowerBound };

// Shortest known Golomb ruler length per order.
class OptimaTable {
 public:
  // Orders 1..14.  Entries up to 7 are recomputed by the reference solver the
  // first time the table is requested; 8..14 are the published optima.
  static const OptimaTable& standard();

  // Entries for orders < n, plus a synthesized order-n lower bound G_{n-1}+1
  // (any ruler with n marks is strictly longer than one with n-1).  This is
  // what certification consumes so that proving an optimum never assumes it.
  OptimaTable restricted_below(int n) const;

  void set(int order, int length, OptimaSource source);
  bool has(int order) const;
  int length(int order) const;          // throws std::out_of_range on a missing order
  OptimaSource source(int order) const; // likewise
  int max_order() const;

  // Largest m with G_m <= len among known orders (0 if none); the classic
  // mark-count bound for a segment of that many positions.
  int max_marks_for_length(int len) const;

  bool operator==(const OptimaTable&) const = default;

 private:
  std::map<int, std::pair<int, OptimaSource>> entries_;
};

// Convenience accessor over the standard table.
int optima_lookup(int order);

}  // namespace golomb
