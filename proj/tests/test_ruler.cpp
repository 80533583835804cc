#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "golomb/optima.hpp"
#include "golomb/oracle.hpp"
#include "golomb/pairs.hpp"
#include "golomb/ruler.hpp"

using namespace golomb;

TEST_CASE("verify_golomb basic examples") {
  CHECK(verify_golomb(std::vector<int>{0}));
  CHECK(verify_golomb(std::vector<int>{0, 1}));
  CHECK(verify_golomb(std::vector<int>{0, 1, 3}));
  CHECK_FALSE(verify_golomb(std::vector<int>{0, 1, 2}));
  CHECK(verify_golomb(std::vector<int>{0, 2, 5, 6}));
  CHECK(verify_golomb(std::vector<int>{0, 1, 5, 12, 25, 27, 35, 41, 44}));
  CHECK_FALSE(verify_golomb(std::vector<int>{0, 1, 5, 12, 25, 27, 35, 40, 44}));
}

TEST_CASE("validate_marks rejects malformed input") {
  CHECK_THROWS_AS(verify_golomb(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(verify_golomb(std::vector<int>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(verify_golomb(std::vector<int>{0, 3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(verify_golomb(std::vector<int>{0, 5, 2}), std::invalid_argument);
}

TEST_CASE("pairwise_distances counts every difference") {
  auto d = pairwise_distances(std::vector<int>{0, 1, 3});
  CHECK(d.counts == std::map<int, int>{{1, 1}, {2, 1}, {3, 1}});
  CHECK(d.all_distinct());

  auto dup = pairwise_distances(std::vector<int>{0, 1, 2});
  CHECK(dup.counts.at(1) == 2);
  CHECK(dup.max_multiplicity() == 2);
  CHECK_FALSE(dup.all_distinct());

  auto nine = pairwise_distances(std::vector<int>{0, 1, 5, 12, 25, 27, 35, 41, 44});
  CHECK(nine.total() == 36);
  CHECK(nine.all_distinct());
}

TEST_CASE("reflect and canonicalize") {
  Ruler r = reflect(std::vector<int>{0, 1, 3});
  CHECK(r.marks == std::vector<int>{0, 2, 3});
  CHECK(reflect(r.marks).marks == std::vector<int>{0, 1, 3});

  CHECK(canonicalize(std::vector<int>{0, 2, 5, 6}).marks == std::vector<int>{0, 1, 4, 6});
  CHECK(canonicalize(std::vector<int>{0, 1, 4, 6}).marks == std::vector<int>{0, 1, 4, 6});

  // Canonical form never exceeds the input and is reflection-invariant.
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<int> s{0};
    std::uniform_int_distribution<int> pos(1, 40);
    while (s.size() < 6) s.insert(pos(rng));
    std::vector<int> marks(s.begin(), s.end());
    Ruler canon = canonicalize(marks);
    CHECK(canon.marks <= marks);
    CHECK(canonicalize(canon.marks) == canon);
    CHECK(canonicalize(reflect(marks).marks) == canon);
  }
}

TEST_CASE("verification matches the multiset characterization") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 1000; ++trial) {
    std::set<int> s{0};
    std::uniform_int_distribution<int> count(2, 7);
    std::uniform_int_distribution<int> pos(1, 30);
    int n = count(rng);
    while (static_cast<int>(s.size()) < n) s.insert(pos(rng));
    std::vector<int> marks(s.begin(), s.end());
    CHECK(verify_golomb(marks) == pairwise_distances(marks).all_distinct());
  }
}

TEST_CASE("ruler text round trip") {
  std::vector<int> marks = parse_ruler_line("0 1 5 12 25 27 35 41 44");
  CHECK(marks == std::vector<int>{0, 1, 5, 12, 25, 27, 35, 41, 44});
  CHECK(format_ruler(marks) == "0 1 5 12 25 27 35 41 44");
  CHECK_THROWS_AS(parse_ruler_line("0 1 x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ruler_line("1 2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ruler_line(""), std::invalid_argument);
}

TEST_CASE("pair indexing is a bijection") {
  for (int n : {2, 5, 9}) {
    PairSpace ps(n);
    int idx = 0;
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        CHECK(ps.index(i, j) == idx);
        CHECK(ps.pair_of(idx) == std::pair<int, int>{i, j});
        ++idx;
      }
    CHECK(idx == ps.size());
  }
}

// Expected lengths below were produced by brute_force_optimal itself and then
// frozen; the published value for order 8 cross-checks the solver.
TEST_CASE("reference solver on small orders") {
  constexpr int expected[] = {0, 1, 3, 6, 11, 17, 25};
  for (int n = 1; n <= 7; ++n) {
    OracleResult r = brute_force_optimal(n);
    CHECK(r.status == OracleStatus::Proved);
    CHECK(r.length == expected[n - 1]);
    CHECK(r.ruler.order() == n);
    CHECK(r.ruler.length() == r.length);
    CHECK(verify_golomb(r.ruler.marks));
  }
  CHECK(brute_force_optimal(4).ruler.marks == std::vector<int>{0, 1, 4, 6});
}

TEST_CASE("reference solver order 8 matches the published optimum") {
  OracleResult r = brute_force_optimal(8);
  CHECK(r.status == OracleStatus::Proved);
  CHECK(r.length == 34);
  CHECK(verify_golomb(r.ruler.marks));
}

TEST_CASE("reference solver respects budgets") {
  Budget b;
  b.node_limit = 5;
  OracleResult r = brute_force_optimal(7, b);
  CHECK(r.status == OracleStatus::BudgetExceeded);
  CHECK(verify_golomb(r.ruler.marks));  // incumbent still a valid ruler
  CHECK(r.ruler.order() == 7);
}

TEST_CASE("exhaustive enumeration at the optimal length") {
  auto rulers = enumerate_rulers_of_length(4, 6);
  REQUIRE(rulers.size() == 2);
  CHECK(rulers[0].marks == std::vector<int>{0, 1, 4, 6});
  CHECK(rulers[1].marks == std::vector<int>{0, 2, 5, 6});
  for (const auto& r : rulers) CHECK(verify_golomb(r.marks));

  // No 4-mark ruler is shorter than the optimum.
  CHECK(enumerate_rulers_of_length(4, 5).empty());

  // Order 5: both orientations of every optimal ruler appear.
  auto five = enumerate_rulers_of_length(5, 11);
  CHECK(five.size() == 4);
  for (const auto& r : five) {
    CHECK(verify_golomb(r.marks));
    auto mirrored = reflect(r.marks);
    CHECK(std::find(five.begin(), five.end(), mirrored) != five.end());
  }
}

TEST_CASE("optima table contents and lookup") {
  const OptimaTable& t = OptimaTable::standard();
  CHECK(t.max_order() == 14);
  constexpr int lengths[] = {0, 1, 3, 6, 11, 17, 25, 34, 44, 55, 72, 85, 106, 127};
  for (int m = 1; m <= 14; ++m) {
    CHECK(t.length(m) == lengths[m - 1]);
    CHECK(optima_lookup(m) == lengths[m - 1]);
    CHECK(t.source(m) == (m <= 7 ? OptimaSource::OracleComputed : OptimaSource::Known));
  }
  CHECK_THROWS_AS(optima_lookup(15), std::out_of_range);
  CHECK_THROWS_AS(optima_lookup(0), std::out_of_range);
}

TEST_CASE("restricted table carries a derived lower bound for the target order") {
  OptimaTable t = OptimaTable::standard().restricted_below(9);
  CHECK(t.max_order() == 9);
  CHECK(t.length(8) == 34);
  CHECK(t.length(9) == 35);
  CHECK(t.source(9) == OptimaSource::DerivedLowerBound);
  CHECK(t.source(8) == OptimaSource::Known);
}

TEST_CASE("mark count bound per segment length") {
  const OptimaTable& t = OptimaTable::standard();
  CHECK(t.max_marks_for_length(0) == 1);
  CHECK(t.max_marks_for_length(1) == 2);
  CHECK(t.max_marks_for_length(2) == 2);
  CHECK(t.max_marks_for_length(10) == 4);
  CHECK(t.max_marks_for_length(11) == 5);
  CHECK(t.max_marks_for_length(43) == 8);
  CHECK(t.max_marks_for_length(44) == 9);
  CHECK(t.max_marks_for_length(1000) == 14);
}
