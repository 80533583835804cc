#include "golomb/lp.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace golomb::lp {

int LinearProgram::add_variable(Bound lb, Bound ub, std::string name) {
  if (lb.finite && ub.finite && lb.value > ub.value)
    throw std::invalid_argument("variable with empty bound interval");
  lower.push_back(std::move(lb));
  upper.push_back(std::move(ub));
  objective.emplace_back(0);
  names.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearProgram::add_variable(const Rat& lb, const Rat& ub, std::string name) {
  return add_variable(Bound::at(lb), Bound::at(ub), std::move(name));
}

void LinearProgram::set_objective(Direction dir, std::vector<Rat> coeffs) {
  if (static_cast<int>(coeffs.size()) != num_vars())
    throw std::invalid_argument("objective size mismatch");
  direction = dir;
  objective = std::move(coeffs);
}

void LinearProgram::add_row(Sense sense, Rat rhs, std::vector<std::pair<int, Rat>> terms) {
  std::map<int, Rat> acc;
  for (auto& [col, coef] : terms) {
    if (col < 0 || col >= num_vars()) throw std::invalid_argument("row references unknown column");
    acc[col] += coef;
  }
  Row row;
  row.sense = sense;
  row.rhs = std::move(rhs);
  for (auto& [col, coef] : acc)
    if (coef != 0) row.terms.emplace_back(col, coef);
  rows.push_back(std::move(row));
}

namespace {

enum class St : unsigned char { Basic, Lower, Upper, Free };
enum class CoreStatus { Optimal, Infeasible, Unbounded, Capped };

// Comparison policy per scalar.  The rational core classifies exactly; the
// float core (used only to guess an optimal basis) works against small
// tolerances and is never trusted without exact certification.
template <class Num> struct Ops;

template <> struct Ops<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& v) { return v; }
  static bool zero(const Rat& v) { return v == 0; }
  static bool neg(const Rat& v) { return v < 0; }
  static bool pos(const Rat& v) { return v > 0; }
  static bool pivot_ok(const Rat& v) { return v != 0; }
  static bool below(const Rat& v, const Rat& b) { return v < b; }
  static bool above(const Rat& v, const Rat& b) { return v > b; }
  static bool nonzero_sum(const Rat& v) { return v != 0; }
};

template <> struct Ops<double> {
  static constexpr bool exact = false;
  static double from_rat(const Rat& v) { return v.get_d(); }
  static bool zero(double v) { return std::fabs(v) < 1e-9; }
  static bool neg(double v) { return v < -1e-9; }
  static bool pos(double v) { return v > 1e-9; }
  static bool pivot_ok(double v) { return std::fabs(v) > 1e-8; }
  static bool below(double v, double b) { return v < b - 1e-7; }
  static bool above(double v, double b) { return v > b + 1e-7; }
  static bool nonzero_sum(double v) { return v > 1e-6; }
};

// Bounded-variable two-phase primal simplex on a dense row tableau kept as
// B^-1 A.  Columns: structural variables, then one slack per row, then any
// phase-1 artificials.  Row r reads  sum_j a_rj x_j + s_r = b_r  with
// s_r >= 0 for "<=", s_r <= 0 for ">=", s_r = 0 for "=".
template <class Num> struct Core {
  using T = Ops<Num>;
  struct Bnd {
    bool finite = false;
    Num value{};
  };

  int nrows = 0;
  int nstruct = 0;
  int ncols = 0;
  std::vector<std::vector<Num>> tab;
  std::vector<Num> xval;  // current value per column
  std::vector<Bnd> lo, up;
  std::vector<St> status;
  std::vector<int> basis;  // row -> basic column
  std::vector<Num> cost;   // internal objective (always minimized)
  std::vector<Num> zrow;   // reduced costs

  bool solved_once = false;
  bool infeasible = false;
  bool capped = false;
  int degen_run = 0;
  bool bland = false;
  std::uint64_t cap = 0;  // per-call pivot cap, 0 = unlimited
  std::uint64_t call_iters = 0;
  // Column nstruct+nrows+k covers row art_row[k]; art_sign[k] is its
  // coefficient in the row's original (pre-negation) orientation.
  std::vector<int> art_row;
  std::vector<signed char> art_sign;

  explicit Core(const LinearProgram& lp) {
    nrows = lp.num_rows();
    nstruct = lp.num_vars();
    ncols = nstruct + nrows;
    lo.resize(ncols);
    up.resize(ncols);
    for (int j = 0; j < nstruct; ++j) {
      if (lp.lower[j].finite) lo[j] = {true, T::from_rat(lp.lower[j].value)};
      if (lp.upper[j].finite) up[j] = {true, T::from_rat(lp.upper[j].value)};
    }
    for (int r = 0; r < nrows; ++r) {
      int s = nstruct + r;
      switch (lp.rows[r].sense) {
        case Sense::LE: lo[s] = {true, Num(0)}; break;
        case Sense::GE: up[s] = {true, Num(0)}; break;
        case Sense::EQ:
          lo[s] = {true, Num(0)};
          up[s] = {true, Num(0)};
          break;
      }
    }
    tab.assign(nrows, std::vector<Num>(ncols, Num(0)));
    for (int r = 0; r < nrows; ++r) {
      for (const auto& [col, coef] : lp.rows[r].terms) tab[r][col] = T::from_rat(coef);
      tab[r][nstruct + r] = 1;
    }
    xval.assign(ncols, Num(0));
    status.assign(ncols, St::Free);
    basis.assign(nrows, -1);
    for (int j = 0; j < nstruct; ++j) {
      if (lo[j].finite) {
        status[j] = St::Lower;
        xval[j] = lo[j].value;
      } else if (up[j].finite) {
        status[j] = St::Upper;
        xval[j] = up[j].value;
      } else {
        status[j] = St::Free;
      }
    }
    for (int r = 0; r < nrows; ++r) {
      int s = nstruct + r;
      basis[r] = s;
      status[s] = St::Basic;
      Num v = T::from_rat(lp.rows[r].rhs);
      for (const auto& [col, coef] : lp.rows[r].terms) {
        (void)coef;
        v -= tab[r][col] * xval[col];
      }
      xval[s] = v;
    }
  }

  bool fixed(int j) const { return lo[j].finite && up[j].finite && lo[j].value == up[j].value; }

  void compute_zrow() {
    zrow = cost;
    for (int r = 0; r < nrows; ++r) {
      const Num& cb = cost[basis[r]];
      if (cb == 0) continue;
      const auto& row = tab[r];
      for (int c = 0; c < ncols; ++c)
        if (row[c] != 0) zrow[c] -= cb * row[c];
    }
  }

  void pivot(int r, int q, bool leave_at_upper) {
    std::vector<int> nz;
    nz.reserve(64);
    {
      auto& prow = tab[r];
      Num piv = prow[q];
      assert(piv != 0);
      for (int c = 0; c < ncols; ++c) {
        if (prow[c] != 0) {
          prow[c] /= piv;
          nz.push_back(c);
        }
      }
    }
    const auto& prow = tab[r];
    for (int r2 = 0; r2 < nrows; ++r2) {
      if (r2 == r) continue;
      Num f = tab[r2][q];
      if (f == 0) continue;
      auto& row2 = tab[r2];
      for (int c : nz) row2[c] -= f * prow[c];
    }
    {
      Num f = zrow[q];
      if (f != 0)
        for (int c : nz) zrow[c] -= f * prow[c];
    }
    int leave = basis[r];
    status[leave] = leave_at_upper ? St::Upper : St::Lower;
    basis[r] = q;
    status[q] = St::Basic;
  }

  // Lexicographic row preference for ratio-test ties: compare the candidate
  // pivot rows scaled by their pivot entries, scanning the slack block first
  // (it holds B^-1, whose rows always differ).  Keeps degenerate runs short
  // and deterministic where a plain index tie-break can cycle.
  bool lex_better(int r1, int r2, int q) {
    Num a1 = tab[r1][q];
    if (a1 < 0) a1 = -a1;
    Num a2 = tab[r2][q];
    if (a2 < 0) a2 = -a2;
    for (int c = nstruct; c < ncols; ++c) {
      Num v1 = tab[r1][c] / a1;
      Num v2 = tab[r2][c] / a2;
      if (v1 != v2) return v1 < v2;
    }
    for (int c = 0; c < nstruct; ++c) {
      Num v1 = tab[r1][c] / a1;
      Num v2 = tab[r2][c] / a2;
      if (v1 != v2) return v1 < v2;
    }
    return r1 < r2;
  }

  void apply_step(int q, int sigma, const Num& t) {
    if (t == 0) return;
    Num move = t;
    if (sigma < 0) move = -move;
    for (int r = 0; r < nrows; ++r) {
      if (tab[r][q] != 0) xval[basis[r]] -= move * tab[r][q];
    }
    xval[q] += move;
  }

  void track_degenerate() {
    if (++degen_run > 1000) bland = true;  // last-resort cycling guard
  }
  void track_progress() {
    degen_run = 0;
    bland = false;
  }

  enum class Step { Optimal, Moved, Unbounded };

  Step iterate() {
    // Entering column.
    int q = -1;
    Num best_mag(0);
    for (int j = 0; j < ncols; ++j) {
      if (status[j] == St::Basic || fixed(j)) continue;
      const Num& z = zrow[j];
      bool improving = (status[j] == St::Lower && T::neg(z)) ||
                       (status[j] == St::Upper && T::pos(z)) ||
                       (status[j] == St::Free && !T::zero(z));
      if (!improving) continue;
      if (bland) {
        q = j;
        break;
      }
      Num mag = z;
      if (mag < 0) mag = -mag;
      if (q < 0 || mag > best_mag) {
        q = j;
        best_mag = mag;
      }
    }
    if (q < 0) return Step::Optimal;
    ++call_iters;

    int sigma = 1;
    if (status[q] == St::Upper)
      sigma = -1;
    else if (status[q] == St::Free)
      sigma = T::neg(zrow[q]) ? 1 : -1;

    // Ratio test over the basic variables.
    bool have_row = false;
    Num best_t(0);
    int best_row = -1;
    bool leave_at_upper = false;
    for (int r = 0; r < nrows; ++r) {
      const Num& a = tab[r][q];
      if (!T::pivot_ok(a)) continue;
      // Basic value changes at rate -sigma*a per unit of t.
      Num rate = a;
      if (sigma > 0) rate = -rate;
      int b = basis[r];
      Num lim(0);
      bool toward_upper;
      if (rate > 0) {
        if (!up[b].finite) continue;
        lim = (up[b].value - xval[b]) / rate;
        toward_upper = true;
      } else {
        if (!lo[b].finite) continue;
        Num den = -rate;
        lim = (xval[b] - lo[b].value) / den;
        toward_upper = false;
      }
      if constexpr (T::exact) {
        assert(lim >= 0);
      } else {
        if (lim < 0) lim = 0;
      }
      if (!have_row || lim < best_t || (lim == best_t && lex_better(r, best_row, q))) {
        have_row = true;
        best_t = lim;
        best_row = r;
        leave_at_upper = toward_upper;
      }
    }

    // The entering variable may hit its own opposite bound first.
    bool can_flip = status[q] != St::Free && lo[q].finite && up[q].finite;
    if (can_flip) {
      Num flip_t = up[q].value - lo[q].value;
      if (!have_row || flip_t <= best_t) {
        apply_step(q, sigma, flip_t);
        status[q] = status[q] == St::Lower ? St::Upper : St::Lower;
        if (T::zero(flip_t)) track_degenerate(); else track_progress();
        return Step::Moved;
      }
    }
    if (!have_row) return Step::Unbounded;

    apply_step(q, sigma, best_t);
    // Exactness: pin the leaving variable to its bound to keep values canonical.
    int leave = basis[best_row];
    xval[leave] = leave_at_upper ? up[leave].value : lo[leave].value;
    pivot(best_row, q, leave_at_upper);
    if (T::zero(best_t)) track_degenerate(); else track_progress();
    return Step::Moved;
  }

  // Returns false when unbounded or the pivot cap was hit.
  bool optimize(bool* unbounded) {
    *unbounded = false;
    for (;;) {
      if (cap && call_iters >= cap) {
        capped = true;
        return false;
      }
      Step s = iterate();
      if (s == Step::Optimal) return true;
      if (s == Step::Unbounded) {
        *unbounded = true;
        return false;
      }
    }
  }

  bool in_bounds(int j) const {
    if (lo[j].finite && T::below(xval[j], lo[j].value)) return false;
    if (up[j].finite && T::above(xval[j], up[j].value)) return false;
    return true;
  }

  // Clamp infeasible slack basics to their nearest bound and cover the
  // residual with artificial columns, then minimize the artificial sum.
  bool phase1() {
    std::vector<int> art_rows;
    for (int r = 0; r < nrows; ++r) {
      int b = basis[r];
      if (!in_bounds(b)) art_rows.push_back(r);
    }
    if (art_rows.empty()) return true;
    for (int r : art_rows) {
      int b = basis[r];
      bool below = lo[b].finite && T::below(xval[b], lo[b].value);
      Num clamped = below ? lo[b].value : up[b].value;
      Num violation = xval[b] - clamped;  // negative when below, positive when above
      // Scale the row so the artificial enters with +1 and the basic column
      // stays a unit vector (row activities live in xval, so flipping the
      // row's sign is a pure rescaling).
      if (below) {
        for (auto& cell : tab[r]) cell = -cell;
      }
      int a = ncols++;
      for (int r2 = 0; r2 < nrows; ++r2) tab[r2].emplace_back(0);
      tab[r][a] = 1;
      art_row.push_back(r);
      art_sign.push_back(below ? -1 : 1);
      lo.push_back({true, Num(0)});
      up.push_back({false, Num()});
      Num av = violation;
      if (below) av = -av;
      xval.push_back(av);
      status.push_back(St::Basic);
      // The slack leaves the basis at its clamped bound.
      status[b] = below ? St::Lower : St::Upper;
      xval[b] = clamped;
      basis[r] = a;
    }
    cost.assign(ncols, Num(0));
    for (int j = nstruct + nrows; j < ncols; ++j) cost[j] = 1;
    compute_zrow();
    bland = false;
    degen_run = 0;
    bool unbounded = false;
    optimize(&unbounded);
    if (capped) return false;
    if (unbounded) {
      // The phase-1 objective is bounded below by zero, so this can only be
      // numeric noise in the float core.
      if constexpr (T::exact) throw std::logic_error("phase-1 objective unbounded");
      capped = true;
      return false;
    }
    Num total(0);
    for (int j = nstruct + nrows; j < ncols; ++j) total += xval[j];
    if (T::nonzero_sum(total)) return false;
    // Freeze the artificials at zero for phase 2.
    for (int j = nstruct + nrows; j < ncols; ++j) {
      lo[j] = {true, Num(0)};
      up[j] = {true, Num(0)};
      xval[j] = 0;
    }
    // Degenerate artificials can remain basic at zero; swap each for a real
    // column with a zero-step pivot so the final basis is made of real
    // columns only (redundant rows keep theirs).
    for (int r = 0; r < nrows; ++r) {
      if (basis[r] < nstruct + nrows) continue;
      int q = -1;
      Num best(0);
      for (int j = 0; j < nstruct + nrows; ++j) {
        if (status[j] == St::Basic || fixed(j)) continue;
        Num mag = tab[r][j];
        if (mag < 0) mag = -mag;
        if (T::pivot_ok(tab[r][j]) && mag > best) {
          best = mag;
          q = j;
        }
      }
      if (q < 0) continue;
      pivot(r, q, false);  // zero step: the artificial sits exactly at zero
    }
    return true;
  }

  // struct_cost is the structural objective already flipped to minimize form.
  CoreStatus run(const std::vector<Num>& struct_cost) {
    call_iters = 0;
    capped = false;
    if (infeasible) return CoreStatus::Infeasible;
    if (!solved_once) {
      if (!phase1()) {
        if (capped) return CoreStatus::Capped;
        infeasible = true;
        return CoreStatus::Infeasible;
      }
      solved_once = true;
    }
    cost.assign(ncols, Num(0));
    for (int j = 0; j < nstruct; ++j) cost[j] = struct_cost[j];
    compute_zrow();
    bland = false;
    degen_run = 0;
    bool unbounded = false;
    optimize(&unbounded);
    if (capped) return CoreStatus::Capped;
    if (unbounded) return CoreStatus::Unbounded;
    return CoreStatus::Optimal;
  }
};

// Rational LU with full Markowitz pivoting; solves B x = b and B^T y = c from
// one factorization.  Basis matrices here are very sparse (a handful of
// nonzeros per column), and in exact arithmetic any nonzero pivot is valid, so
// the pivot order is chosen purely to avoid fill-in: filled entries are where
// the big rationals (and the gcd work) come from.
struct LuFactors {
  int m = 0;
  std::vector<std::vector<Rat>> lu;  // multipliers in eliminated columns, U elsewhere
  std::vector<int> pr, pc;           // elimination order: step k pivots at (pr[k], pc[k])

  // lu value at elimination coordinates (k, t).
  const Rat& at(int k, int t) const { return lu[pr[k]][pc[t]]; }

  bool factor(std::vector<std::vector<Rat>> a) {
    m = static_cast<int>(a.size());
    pr.assign(m, -1);
    pc.assign(m, -1);
    std::vector<char> rdone(m, 0), cdone(m, 0);
    std::vector<int> rcnt(m, 0), ccnt(m, 0);
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        if (rdone[i]) continue;
        int cnt = 0;
        for (int j = 0; j < m; ++j)
          if (!cdone[j] && a[i][j] != 0) ++cnt;
        rcnt[i] = cnt;
      }
      for (int j = 0; j < m; ++j) {
        if (cdone[j]) continue;
        int cnt = 0;
        for (int i = 0; i < m; ++i)
          if (!rdone[i] && a[i][j] != 0) ++cnt;
        ccnt[j] = cnt;
      }
      long long best = -1;
      int br = -1, bc = -1;
      for (int i = 0; i < m; ++i) {
        if (rdone[i]) continue;
        for (int j = 0; j < m; ++j) {
          if (cdone[j] || a[i][j] == 0) continue;
          long long score =
              static_cast<long long>(rcnt[i] - 1) * static_cast<long long>(ccnt[j] - 1);
          if (best < 0 || score < best) {
            best = score;
            br = i;
            bc = j;
          }
        }
      }
      if (br < 0) return false;  // singular
      pr[k] = br;
      pc[k] = bc;
      rdone[br] = 1;
      cdone[bc] = 1;
      const Rat& piv = a[br][bc];
      for (int i = 0; i < m; ++i) {
        if (rdone[i] || a[i][bc] == 0) continue;
        Rat f = a[i][bc] / piv;
        const auto& prow = a[br];
        auto& row = a[i];
        for (int j = 0; j < m; ++j)
          if (!cdone[j] && prow[j] != 0) row[j] -= f * prow[j];
        row[bc] = std::move(f);  // multiplier slot: column bc is retired
      }
    }
    lu = std::move(a);
    return true;
  }

  std::vector<Rat> solve(const std::vector<Rat>& b) const {
    std::vector<Rat> y(m, Rat(0));
    for (int k = 0; k < m; ++k) {
      Rat v = b[pr[k]];
      for (int t = 0; t < k; ++t)
        if (y[t] != 0 && at(k, t) != 0) v -= at(k, t) * y[t];
      y[k] = std::move(v);
    }
    for (int k = m - 1; k >= 0; --k) {
      Rat v = std::move(y[k]);
      for (int t = k + 1; t < m; ++t)
        if (y[t] != 0 && at(k, t) != 0) v -= at(k, t) * y[t];
      y[k] = v / at(k, k);
    }
    std::vector<Rat> x(m, Rat(0));
    for (int k = 0; k < m; ++k) x[pc[k]] = std::move(y[k]);
    return x;
  }

  std::vector<Rat> solve_transposed(const std::vector<Rat>& c) const {
    std::vector<Rat> v(m, Rat(0));
    for (int k = 0; k < m; ++k) {
      Rat s = c[pc[k]];
      for (int t = 0; t < k; ++t)
        if (v[t] != 0 && at(t, k) != 0) s -= at(t, k) * v[t];
      v[k] = s / at(k, k);
    }
    std::vector<Rat> u(m, Rat(0));
    for (int k = m - 1; k >= 0; --k) {
      Rat s = std::move(v[k]);
      for (int t = k + 1; t < m; ++t)
        if (u[t] != 0 && at(t, k) != 0) s -= at(t, k) * u[t];
      u[k] = std::move(s);
    }
    std::vector<Rat> y(m, Rat(0));
    for (int k = 0; k < m; ++k) y[pr[k]] = std::move(u[k]);
    return y;
  }
};

// Exactly price out a basis proposed by the float core: solve the basic
// system in rationals, check primal feasibility and reduced-cost signs, and
// return the exact optimum on success.  Any discrepancy rejects the basis and
// the caller falls back to exact pivoting, so this path can never produce a
// wrong answer, only a slower one.  Artificials pinned to redundant rows may
// stay basic; their column is +/-e_r and their value must certify to zero.
std::optional<LPSolution> certify_basis(const LinearProgram& lp, Direction dir,
                                        const std::vector<Rat>& obj, const std::vector<int>& basis,
                                        const std::vector<St>& st, const std::vector<int>& art_row,
                                        const std::vector<signed char>& art_sign) {
  const int m = lp.num_rows();
  const int ns = lp.num_vars();
  const int nreal = ns + m;
  const int ntotal = nreal + static_cast<int>(art_row.size());
  if (static_cast<int>(basis.size()) != m) return std::nullopt;
  if (static_cast<int>(st.size()) < nreal) return std::nullopt;

  std::vector<Bound> lo(nreal), up(nreal);
  for (int j = 0; j < ns; ++j) {
    lo[j] = lp.lower[j];
    up[j] = lp.upper[j];
  }
  for (int r = 0; r < m; ++r) {
    int s = ns + r;
    switch (lp.rows[r].sense) {
      case Sense::LE: lo[s] = Bound::at(Rat(0)); break;
      case Sense::GE: up[s] = Bound::at(Rat(0)); break;
      case Sense::EQ:
        lo[s] = Bound::at(Rat(0));
        up[s] = Bound::at(Rat(0));
        break;
    }
  }

  std::vector<int> pos(ntotal, -1);
  for (int k = 0; k < m; ++k) {
    int b = basis[k];
    if (b < 0 || b >= ntotal) return std::nullopt;
    if (pos[b] >= 0) return std::nullopt;
    pos[b] = k;
  }

  // Pin the nonbasic variables to their declared sides (nonbasic artificials
  // are fixed at zero and contribute nothing).
  std::vector<Rat> x(nreal, Rat(0));
  for (int j = 0; j < nreal; ++j) {
    if (pos[j] >= 0) continue;
    switch (st[j]) {
      case St::Lower:
        if (!lo[j].finite) return std::nullopt;
        x[j] = lo[j].value;
        break;
      case St::Upper:
        if (!up[j].finite) return std::nullopt;
        x[j] = up[j].value;
        break;
      case St::Free: break;
      case St::Basic: return std::nullopt;
    }
  }

  std::vector<Rat> rhs(m, Rat(0));
  for (int r = 0; r < m; ++r) {
    Rat v = lp.rows[r].rhs;
    for (const auto& [col, coef] : lp.rows[r].terms)
      if (pos[col] < 0 && x[col] != 0) v -= coef * x[col];
    int s = ns + r;
    if (pos[s] < 0 && x[s] != 0) v -= x[s];
    rhs[r] = std::move(v);
  }

  std::vector<std::vector<Rat>> B(m, std::vector<Rat>(m, Rat(0)));
  for (int r = 0; r < m; ++r) {
    for (const auto& [col, coef] : lp.rows[r].terms)
      if (pos[col] >= 0) B[r][pos[col]] = coef;
    int s = ns + r;
    if (pos[s] >= 0) B[r][pos[s]] = 1;
  }
  for (int k = 0; k < m; ++k) {
    int b = basis[k];
    if (b >= nreal) B[art_row[b - nreal]][k] = static_cast<int>(art_sign[b - nreal]);
  }

  LuFactors fac;
  if (!fac.factor(std::move(B))) return std::nullopt;
  std::vector<Rat> xb = fac.solve(rhs);
  for (int k = 0; k < m; ++k) {
    int j = basis[k];
    if (j >= nreal) {
      if (xb[k] != 0) return std::nullopt;  // artificial must stay at zero
      continue;
    }
    x[j] = std::move(xb[k]);
    if (lo[j].finite && x[j] < lo[j].value) return std::nullopt;
    if (up[j].finite && x[j] > up[j].value) return std::nullopt;
  }

  std::vector<Rat> cost(nreal, Rat(0));
  for (int j = 0; j < ns; ++j) cost[j] = dir == Direction::Minimize ? obj[j] : Rat(-obj[j]);
  std::vector<Rat> cb(m, Rat(0));
  for (int k = 0; k < m; ++k)
    if (basis[k] < nreal) cb[k] = cost[basis[k]];
  std::vector<Rat> y = fac.solve_transposed(cb);

  std::vector<std::vector<std::pair<int, Rat>>> cols(ns);
  for (int r = 0; r < m; ++r)
    for (const auto& [col, coef] : lp.rows[r].terms) cols[col].emplace_back(r, coef);
  for (int j = 0; j < nreal; ++j) {
    if (pos[j] >= 0) continue;
    if (lo[j].finite && up[j].finite && lo[j].value == up[j].value) continue;
    Rat z = cost[j];
    if (j < ns) {
      for (const auto& [r, coef] : cols[j])
        if (y[r] != 0) z -= y[r] * coef;
    } else {
      z -= y[j - ns];
    }
    switch (st[j]) {
      case St::Lower:
        if (z < 0) return std::nullopt;
        break;
      case St::Upper:
        if (z > 0) return std::nullopt;
        break;
      case St::Free:
        if (z != 0) return std::nullopt;
        break;
      case St::Basic: return std::nullopt;
    }
  }

  LPSolution sol;
  sol.status = LPStatus::Optimal;
  sol.x.assign(x.begin(), x.begin() + ns);
  Rat v(0);
  for (int j = 0; j < ns; ++j)
    if (obj[j] != 0) v += obj[j] * x[j];
  sol.objective = std::move(v);
  return sol;
}

// Exactly verify a float infeasibility claim from its final phase-1 basis: if
// the basis is feasible for the phase-1 program and optimal by reduced-cost
// signs, its artificial sum is the true minimum, and a positive sum proves the
// original program empty.  Returns false whenever the evidence does not add
// up, and the caller settles the question with exact pivoting.
bool certify_infeasible(const LinearProgram& lp, const std::vector<int>& basis,
                        const std::vector<St>& st, const std::vector<int>& art_row,
                        const std::vector<signed char>& art_sign) {
  const int m = lp.num_rows();
  const int ns = lp.num_vars();
  const int nreal = ns + m;
  const int nart = static_cast<int>(art_row.size());
  const int ntotal = nreal + nart;
  if (nart == 0) return false;
  if (static_cast<int>(basis.size()) != m) return false;
  if (static_cast<int>(st.size()) != ntotal) return false;

  std::vector<Bound> lo(nreal), up(nreal);
  for (int j = 0; j < ns; ++j) {
    lo[j] = lp.lower[j];
    up[j] = lp.upper[j];
  }
  for (int r = 0; r < m; ++r) {
    int s = ns + r;
    switch (lp.rows[r].sense) {
      case Sense::LE: lo[s] = Bound::at(Rat(0)); break;
      case Sense::GE: up[s] = Bound::at(Rat(0)); break;
      case Sense::EQ:
        lo[s] = Bound::at(Rat(0));
        up[s] = Bound::at(Rat(0));
        break;
    }
  }

  std::vector<int> pos(ntotal, -1);
  for (int k = 0; k < m; ++k) {
    int b = basis[k];
    if (b < 0 || b >= ntotal) return false;
    if (pos[b] >= 0) return false;
    pos[b] = k;
  }

  // Nonbasic artificials rest at their zero lower bound and drop out of the
  // right-hand side.
  std::vector<Rat> x(nreal, Rat(0));
  for (int j = 0; j < nreal; ++j) {
    if (pos[j] >= 0) continue;
    switch (st[j]) {
      case St::Lower:
        if (!lo[j].finite) return false;
        x[j] = lo[j].value;
        break;
      case St::Upper:
        if (!up[j].finite) return false;
        x[j] = up[j].value;
        break;
      case St::Free: break;
      case St::Basic: return false;
    }
  }
  for (int j = nreal; j < ntotal; ++j)
    if (pos[j] < 0 && st[j] != St::Lower) return false;

  std::vector<Rat> rhs(m, Rat(0));
  for (int r = 0; r < m; ++r) {
    Rat v = lp.rows[r].rhs;
    for (const auto& [col, coef] : lp.rows[r].terms)
      if (pos[col] < 0 && x[col] != 0) v -= coef * x[col];
    int s = ns + r;
    if (pos[s] < 0 && x[s] != 0) v -= x[s];
    rhs[r] = std::move(v);
  }

  std::vector<std::vector<Rat>> B(m, std::vector<Rat>(m, Rat(0)));
  for (int r = 0; r < m; ++r) {
    for (const auto& [col, coef] : lp.rows[r].terms)
      if (pos[col] >= 0) B[r][pos[col]] = coef;
    int s = ns + r;
    if (pos[s] >= 0) B[r][pos[s]] = 1;
  }
  for (int k = 0; k < m; ++k) {
    int b = basis[k];
    if (b >= nreal) B[art_row[b - nreal]][k] = static_cast<int>(art_sign[b - nreal]);
  }

  LuFactors fac;
  if (!fac.factor(std::move(B))) return false;
  std::vector<Rat> xb = fac.solve(rhs);
  Rat art_sum(0);
  for (int k = 0; k < m; ++k) {
    int j = basis[k];
    if (j >= nreal) {
      if (xb[k] < 0) return false;  // artificials live in [0, inf)
      art_sum += xb[k];
      continue;
    }
    if (lo[j].finite && xb[k] < lo[j].value) return false;
    if (up[j].finite && xb[k] > up[j].value) return false;
  }
  if (art_sum == 0) return false;  // a zero sum would mean feasible

  // Phase-1 costs: one per artificial, zero elsewhere.
  std::vector<Rat> cb(m, Rat(0));
  for (int k = 0; k < m; ++k)
    if (basis[k] >= nreal) cb[k] = 1;
  std::vector<Rat> y = fac.solve_transposed(cb);

  std::vector<std::vector<std::pair<int, Rat>>> cols(ns);
  for (int r = 0; r < m; ++r)
    for (const auto& [col, coef] : lp.rows[r].terms) cols[col].emplace_back(r, coef);
  for (int j = 0; j < ntotal; ++j) {
    if (pos[j] >= 0) continue;
    if (j < nreal && lo[j].finite && up[j].finite && lo[j].value == up[j].value) continue;
    Rat z(0);
    if (j < ns) {
      for (const auto& [r, coef] : cols[j])
        if (y[r] != 0) z -= y[r] * coef;
    } else if (j < nreal) {
      z -= y[j - ns];
    } else {
      z = 1 - static_cast<int>(art_sign[j - nreal]) * y[art_row[j - nreal]];
    }
    switch (st[j]) {
      case St::Lower:
        if (z < 0) return false;
        break;
      case St::Upper:
        if (z > 0) return false;
        break;
      case St::Free:
        if (z != 0) return false;
        break;
      case St::Basic: return false;
    }
  }
  return true;
}

}  // namespace

struct SimplexSolver::Impl {
  LinearProgram lp;  // pristine copy for exact certification and rebuilds
  std::unique_ptr<Core<double>> fast;
  std::unique_ptr<Core<Rat>> exact;
  bool bad_bounds = false;
  bool float_off = false;
  int rejects = 0;
  std::uint64_t iterations = 0;

  explicit Impl(LinearProgram prog) : lp(std::move(prog)) {
    // Empty bound intervals make the whole program infeasible up front.
    for (int j = 0; j < lp.num_vars(); ++j) {
      if (lp.lower[j].finite && lp.upper[j].finite && lp.lower[j].value > lp.upper[j].value)
        bad_bounds = true;
    }
  }

  LPSolution run(Direction dir, const std::vector<Rat>& obj) {
    LPSolution sol;
    sol.iterations = iterations;
    if (bad_bounds) {
      sol.status = LPStatus::Infeasible;
      return sol;
    }
    if (!float_off) {
      if (!fast) {
        fast = std::make_unique<Core<double>>(lp);
        fast->cap = 20000 + 40ull * static_cast<std::uint64_t>(fast->nrows + fast->ncols);
      }
      std::vector<double> c(lp.num_vars());
      for (int j = 0; j < lp.num_vars(); ++j) {
        double v = obj[j].get_d();
        c[j] = dir == Direction::Minimize ? v : -v;
      }
      CoreStatus st = fast->run(c);
      iterations += fast->call_iters;
      if (st == CoreStatus::Optimal) {
        if (auto ok = certify_basis(lp, dir, obj, fast->basis, fast->status, fast->art_row,
                                    fast->art_sign)) {
          ok->iterations = iterations;
          return *ok;
        }
        if (++rejects >= 3) float_off = true;
      } else if (st == CoreStatus::Infeasible &&
                 certify_infeasible(lp, fast->basis, fast->status, fast->art_row,
                                    fast->art_sign)) {
        sol.status = LPStatus::Infeasible;
        sol.iterations = iterations;
        return sol;
      } else {
        // Unproven infeasibility, unbounded claims and pivot-cap stalls are
        // never trusted from floats; settle everything exactly from here on.
        float_off = true;
      }
    }
    if (!exact) exact = std::make_unique<Core<Rat>>(lp);
    std::vector<Rat> c(lp.num_vars());
    for (int j = 0; j < lp.num_vars(); ++j)
      c[j] = dir == Direction::Minimize ? obj[j] : Rat(-obj[j]);
    CoreStatus st = exact->run(c);
    iterations += exact->call_iters;
    sol.iterations = iterations;
    switch (st) {
      case CoreStatus::Infeasible: sol.status = LPStatus::Infeasible; return sol;
      case CoreStatus::Unbounded: sol.status = LPStatus::Unbounded; return sol;
      case CoreStatus::Capped: throw std::logic_error("exact simplex hit a pivot cap");
      case CoreStatus::Optimal: break;
    }
    sol.status = LPStatus::Optimal;
    sol.x.assign(exact->xval.begin(), exact->xval.begin() + exact->nstruct);
    Rat v(0);
    for (int j = 0; j < exact->nstruct; ++j)
      if (obj[j] != 0) v += obj[j] * exact->xval[j];
    sol.objective = std::move(v);
    return sol;
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& lp) : impl_(std::make_unique<Impl>(lp)) {}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LPSolution SimplexSolver::solve() { return impl_->run(impl_->lp.direction, impl_->lp.objective); }

LPSolution SimplexSolver::resolve(Direction dir, const std::vector<Rat>& objective) {
  if (static_cast<int>(objective.size()) != impl_->lp.num_vars())
    throw std::invalid_argument("objective size mismatch");
  return impl_->run(dir, objective);
}

LPSolution solve_lp(const LinearProgram& lp) { return SimplexSolver(lp).solve(); }

namespace {

std::string col_name(const LinearProgram& lp, int j) {
  if (!lp.names[j].empty()) return lp.names[j];
  return "x" + std::to_string(j);
}

void write_terms(std::ostream& os, const LinearProgram& lp,
                 const std::vector<std::pair<int, Rat>>& terms) {
  bool first = true;
  for (const auto& [col, coef] : terms) {
    if (coef >= 0 && !first) os << " + ";
    if (coef < 0) os << (first ? "- " : " - ");
    Rat mag = coef < 0 ? Rat(-coef) : coef;
    if (mag != 1) os << rat_to_string(mag) << ' ';
    os << col_name(lp, col);
    first = false;
  }
  if (first) os << '0';
}

}  // namespace

void write_lp_text(const LinearProgram& lp, std::ostream& os) {
  os << (lp.direction == Direction::Minimize ? "Minimize" : "Maximize") << "\n obj: ";
  std::vector<std::pair<int, Rat>> obj_terms;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective[j] != 0) obj_terms.emplace_back(j, lp.objective[j]);
  write_terms(os, lp, obj_terms);
  os << "\nSubject To\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.rows[r];
    os << " r" << r << ": ";
    write_terms(os, lp, row.terms);
    switch (row.sense) {
      case Sense::LE: os << " <= "; break;
      case Sense::GE: os << " >= "; break;
      case Sense::EQ: os << " = "; break;
    }
    os << rat_to_string(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& l = lp.lower[j];
    const auto& u = lp.upper[j];
    os << ' ';
    if (!l.finite && !u.finite) {
      os << col_name(lp, j) << " free\n";
      continue;
    }
    if (l.finite)
      os << rat_to_string(l.value) << " <= ";
    else
      os << "-inf <= ";
    os << col_name(lp, j);
    if (u.finite)
      os << " <= " << rat_to_string(u.value);
    os << '\n';
  }
  os << "End\n";
}

}  // namespace golomb::lp
