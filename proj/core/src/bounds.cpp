#include "golomb/bounds.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "golomb/ruler.hpp"

namespace golomb {

long long BoundsTable::total_width() const {
  long long w = 0;
  for (size_t p = 0; p < lower.size(); ++p) w += upper[p] - lower[p];
  return w;
}

BoundsTable initial_bounds(int n, int L, const OptimaTable& optima) {
  if (n < 2) throw std::invalid_argument("initial_bounds needs n >= 2");
  if (L < 0) throw std::invalid_argument("initial_bounds needs L >= 0");
  PairSpace ps(n);
  BoundsTable t;
  t.n = n;
  t.length = L;
  t.lower.resize(ps.size());
  t.upper.resize(ps.size());
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    t.lower[idx] = optima.length(j - i + 1);
    t.upper[idx] = L - optima.length(i) - optima.length(n - j + 1);
    if (t.lower[idx] > t.upper[idx]) t.infeasible = true;
  }
  return t;
}

BoundsTable intersect(const BoundsTable& a, const BoundsTable& b) {
  if (a.n != b.n) throw std::invalid_argument("bounds tables over different orders");
  BoundsTable t = a;
  t.length = std::min(a.length, b.length);
  t.infeasible = a.infeasible || b.infeasible;
  for (size_t p = 0; p < t.lower.size(); ++p) {
    t.lower[p] = std::max(a.lower[p], b.lower[p]);
    t.upper[p] = std::min(a.upper[p], b.upper[p]);
    if (t.lower[p] > t.upper[p]) t.infeasible = true;
  }
  return t;
}

bool table_contains(const BoundsTable& table, std::span<const int> marks) {
  validate_marks(marks);
  if (static_cast<int>(marks.size()) != table.n) return false;
  PairSpace ps(table.n);
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    int d = marks[j - 1] - marks[i - 1];
    if (d < table.lower[idx] || d > table.upper[idx]) return false;
  }
  return true;
}

void write_bounds(const BoundsTable& table, std::ostream& os) {
  os << "# n " << table.n << " L " << table.length << '\n';
  if (table.infeasible) os << "# infeasible\n";
  PairSpace ps(table.n);
  for (int idx = 0; idx < ps.size(); ++idx) {
    auto [i, j] = ps.pair_of(idx);
    os << i << ' ' << j << ' ' << table.lower[idx] << ' ' << table.upper[idx] << '\n';
  }
}

BoundsTable read_bounds(std::istream& is) {
  BoundsTable t;
  bool have_header = false;
  std::string line;
  std::vector<bool> seen;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream in(line.substr(1));
      std::string key;
      while (in >> key) {
        if (key == "n")
          in >> t.n;
        else if (key == "L")
          in >> t.length;
        else if (key == "infeasible")
          t.infeasible = true;
      }
      if (t.n >= 2 && !have_header) {
        have_header = true;
        PairSpace ps(t.n);
        t.lower.assign(ps.size(), 0);
        t.upper.assign(ps.size(), 0);
        seen.assign(ps.size(), false);
      }
      continue;
    }
    if (!have_header) throw std::invalid_argument("bounds record before '# n .. L ..' header");
    std::istringstream in(line);
    int i, j, lo, hi;
    if (!(in >> i >> j >> lo >> hi)) throw std::invalid_argument("malformed bounds record: " + line);
    PairSpace ps(t.n);
    if (i < 1 || j <= i || j > t.n) throw std::invalid_argument("bounds record out of range: " + line);
    int idx = ps.index(i, j);
    if (seen[idx]) throw std::invalid_argument("duplicate bounds record: " + line);
    seen[idx] = true;
    t.lower[idx] = lo;
    t.upper[idx] = hi;
    if (lo > hi) t.infeasible = true;
  }
  if (!have_header) throw std::invalid_argument("missing bounds header");
  for (bool s : seen)
    if (!s) throw std::invalid_argument("incomplete bounds table");
  return t;
}

}  // namespace golomb
