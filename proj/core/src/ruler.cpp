#include "golomb/ruler.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace golomb {

long long DifferenceMultiset::total() const {
  long long t = 0;
  for (const auto& [d, c] : counts) t += c;
  return t;
}

int DifferenceMultiset::max_multiplicity() const {
  int m = 0;
  for (const auto& [d, c] : counts) m = std::max(m, c);
  return m;
}

void validate_marks(std::span<const int> marks) {
  if (marks.empty()) throw std::invalid_argument("ruler needs at least one mark");
  if (marks.front() != 0) throw std::invalid_argument("first mark must be 0");
  for (size_t k = 1; k < marks.size(); ++k) {
    if (marks[k] <= marks[k - 1])
      throw std::invalid_argument("marks must be strictly increasing");
  }
}

DifferenceMultiset pairwise_distances(std::span<const int> marks) {
  validate_marks(marks);
  DifferenceMultiset out;
  for (size_t i = 0; i < marks.size(); ++i)
    for (size_t j = i + 1; j < marks.size(); ++j) out.counts[marks[j] - marks[i]]++;
  return out;
}

bool verify_golomb(std::span<const int> marks) {
  validate_marks(marks);
  // A bit-per-distance table keeps this linear in the pair count.
  int len = marks.back();
  std::vector<bool> seen(static_cast<size_t>(len) + 1, false);
  for (size_t i = 0; i < marks.size(); ++i)
    for (size_t j = i + 1; j < marks.size(); ++j) {
      int d = marks[j] - marks[i];
      if (seen[d]) return false;
      seen[d] = true;
    }
  return true;
}

Ruler reflect(std::span<const int> marks) {
  validate_marks(marks);
  int len = marks.back();
  Ruler r;
  r.marks.reserve(marks.size());
  for (auto it = marks.rbegin(); it != marks.rend(); ++it) r.marks.push_back(len - *it);
  return r;
}

Ruler canonicalize(std::span<const int> marks) {
  Ruler mirror = reflect(marks);
  Ruler direct{std::vector<int>(marks.begin(), marks.end())};
  return std::min(direct, mirror);
}

std::vector<int> parse_ruler_line(const std::string& line) {
  std::istringstream in(line);
  std::vector<int> marks;
  long long v;
  while (in >> v) {
    if (v < 0) throw std::invalid_argument("negative mark in ruler line");
    marks.push_back(static_cast<int>(v));
  }
  if (!in.eof()) throw std::invalid_argument("malformed ruler line: " + line);
  validate_marks(marks);
  return marks;
}

std::string format_ruler(std::span<const int> marks) {
  std::ostringstream out;
  for (size_t k = 0; k < marks.size(); ++k) {
    if (k) out << ' ';
    out << marks[k];
  }
  return out.str();
}

}  // namespace golomb
