#pragma once

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace golomb {

// A ruler: strictly increasing marks with the first mark at 0.
struct Ruler {
  std::vector<int> marks;

  int order() const { return static_cast<int>(marks.size()); }
  int length() const { return marks.empty() ? 0 : marks.back(); }
  auto operator<=>(const Ruler&) const = default;
};

// Multiset of the n(n-1)/2 pairwise differences of a mark set.
struct DifferenceMultiset {
  std::map<int, int> counts;  // distance -> multiplicity

  long long total() const;
  int max_multiplicity() const;
  bool all_distinct() const { return max_multiplicity() <= 1; }
};

// Throws std::invalid_argument unless marks are strictly increasing and start at 0.
void validate_marks(std::span<const int> marks);

// True iff the marks form a Golomb ruler (all pairwise differences distinct).
bool verify_golomb(std::span<const int> marks);

DifferenceMultiset pairwise_distances(std::span<const int> marks);

// Mirror image: {length - m : m in marks}, re-sorted to start at 0.
Ruler reflect(std::span<const int> marks);

// Lexicographically smaller of the ruler and its mirror image.
Ruler canonicalize(std::span<const int> marks);

// Text form: one ruler per line, space-separated decimal marks.
std::vector<int> parse_ruler_line(const std::string& line);
std::string format_ruler(std::span<const int> marks);

}  // namespace golomb
