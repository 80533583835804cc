#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "golomb/rational.hpp"

namespace golomb::lp {

// One-sided bounds; a default-constructed Bound is infinite.
struct Bound {
  bool finite = false;
  Rat value;

  static Bound none() { return {}; }
  static Bound at(Rat v) { return {true, std::move(v)}; }
  bool operator==(const Bound&) const = default;
};

enum class Sense { LE, GE, EQ };
enum class Direction { Minimize, Maximize };

struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, Rat>> terms;  // (column, coefficient), ascending column
    Sense sense = Sense::LE;
    Rat rhs;
  };

  Direction direction = Direction::Minimize;
  std::vector<Bound> lower, upper;
  std::vector<Rat> objective;
  std::vector<std::string> names;  // used by the text dump only
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(lower.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(Bound lb, Bound ub, std::string name = "");
  int add_variable(const Rat& lb, const Rat& ub, std::string name = "");
  void set_objective(Direction dir, std::vector<Rat> coeffs);
  // Terms with a repeated column are accumulated.
  void add_row(Sense sense, Rat rhs, std::vector<std::pair<int, Rat>> terms);
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Optimal;
  Rat objective;
  std::vector<Rat> x;  // structural variables only
  std::uint64_t iterations = 0;
};

// Bounded-variable two-phase primal simplex, exact over the rationals.
// Pivoting is most-negative-reduced-cost with smallest-index tie breaks and an
// automatic switch to the pure smallest-index rule while pivots stay
// degenerate, so runs are deterministic and cycling-free.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  // First call runs both phases; the basis is kept afterwards.
  LPSolution solve();

  // Re-optimizes from the current feasible basis after an objective swap.
  // Only valid after a solve() that was not Infeasible.
  LPSolution resolve(Direction dir, const std::vector<Rat>& objective);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience single-shot entry point.
LPSolution solve_lp(const LinearProgram& lp);

// Debug dump in a conventional linear-program text layout with exact "p/q"
// coefficients.
void write_lp_text(const LinearProgram& lp, std::ostream& os);

}  // namespace golomb::lp
