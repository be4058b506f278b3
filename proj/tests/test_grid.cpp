#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <optional>
#include <vector>

#include "baldiag/grid.hpp"
#include "baldiag/rng.hpp"

using namespace baldiag;

namespace {

// Improperness straight from the definition: try every cross.
std::optional<Cross> brute_improper(const CellSet& s) {
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      bool all = true;
      for (const Cell& c : s.cells)
        if ((c.row == i) == (c.col == j)) {
          all = false;
          break;
        }
      if (all) return Cross{i, j};
    }
  return std::nullopt;
}

bool subset_exists_brute(const CellSet& s, int k) {
  const int m = s.size();
  if (k > m) return false;
  if (k == 0) return false;  // empty set is improper by convention
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<Cell> pick;
    for (int i : idx) pick.push_back(s.cells[static_cast<std::size_t>(i)]);
    if (!brute_improper(CellSet(s.n, pick))) return true;
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - k + pos) --pos;
    if (pos < 0) return false;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
}

CellSet random_set(int n, int count, Rng& rng) {
  std::vector<Cell> cells;
  for (int idx : rng.sample(n * n, count)) cells.push_back({idx / n, idx % n});
  return CellSet(n, cells);
}

BicoloredGrid grid_with_blue(int n, const std::vector<Cell>& blue) {
  BicoloredGrid g(n);
  for (const Cell& c : blue) g.set(c.row, c.col, Color::Blue);
  return g;
}

DiagonalPartition shifted_partition(int n) {
  DiagonalPartition p;
  p.n = n;
  for (int d = 0; d < n; ++d) {
    Diagonal diag;
    for (int r = 0; r < n; ++r) diag.cells.push_back({r, (r + d) % n});
    p.diagonals.push_back(diag);
  }
  return p;
}

}  // namespace

TEST_CASE("is_improper: pinned examples") {
  CHECK(is_improper(CellSet(7, {{0, 1}, {0, 2}, {1, 0}})) == Cross{0, 0});
  CHECK(!is_improper(CellSet(7, {{0, 0}, {0, 1}, {1, 0}})));
  CHECK(is_improper(CellSet(7, {})) == Cross{0, 0});
}

TEST_CASE("is_improper: agrees with the by-definition scan and is lex-minimal") {
  Rng rng(20240811);
  for (int trial = 0; trial < 400; ++trial) {
    int n = 2 + rng.below_int(6);
    int count = rng.below_int(n * n + 1);
    CellSet s = random_set(n, count, rng);
    auto fast = is_improper(s);
    auto brute = brute_improper(s);
    REQUIRE(fast.has_value() == brute.has_value());
    if (fast) CHECK(*fast == *brute);  // both scan in lexicographic order
  }
}

TEST_CASE("is_improper: monotone under subsets with the same witness") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + rng.below_int(5);
    CellSet s = random_set(n, 1 + rng.below_int(2 * n), rng);
    auto cross = is_improper(s);
    if (!cross) continue;
    // drop a random cell; the same cross must still contain the subset
    std::vector<Cell> fewer = s.cells;
    fewer.erase(fewer.begin() + static_cast<long>(rng.below(fewer.size())));
    for (const Cell& c : fewer) CHECK(cross->covers(c));
  }
}

TEST_CASE("sets of 2n-1 cells are always proper") {
  Rng rng(99);
  for (int n = 4; n <= 8; ++n)
    for (int trial = 0; trial < 60; ++trial) {
      CellSet s = random_set(n, 2 * n - 1, rng);
      CHECK(!is_improper(s));
    }
  // the cross itself is the extremal improper set of size 2n-2
  for (int n = 4; n <= 8; ++n) CHECK(is_improper(CellSet(n, Cross{0, 0}.cells(n))) == Cross{0, 0});
}

TEST_CASE("tiny sets: 1- and 2-cell sets are improper for n >= 3") {
  for (int n = 3; n <= 6; ++n) {
    CHECK(is_improper(CellSet(n, {{1, 1}})));
    CHECK(is_improper(CellSet(n, {{0, 0}, {1, 1}})));
    CHECK(is_improper(CellSet(n, {{2, 0}, {2, 2}})));
  }
  // order 2 exceptions: a full row or column of two cells is proper
  CHECK(!is_improper(CellSet(2, {{0, 0}, {0, 1}})));
  CHECK(!is_improper(CellSet(2, {{0, 1}, {1, 1}})));
  CHECK(is_improper(CellSet(2, {{0, 0}, {1, 1}})));
}

TEST_CASE("find_proper_subset: pinned examples") {
  std::vector<Cell> all;
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) all.push_back({r, c});
  auto whole = find_proper_subset(CellSet(7, all), 7);
  REQUIRE(whole);
  CHECK(whole->size() == 7);
  CHECK(!is_improper(*whole));

  CHECK(!find_proper_subset(CellSet(7, Cross{0, 0}.cells(7)), 7));

  CellSet four(7, {{0, 0}, {0, 1}, {1, 0}, {5, 5}});
  auto got = find_proper_subset(four, 4);
  REQUIRE(got);
  CHECK(*got == four);

  CHECK_THROWS_AS(find_proper_subset(four, 5), std::invalid_argument);
}

TEST_CASE("find_proper_subset: a full line is proper but has no smaller proper subset") {
  for (int n : {5, 7}) {
    std::vector<Cell> row;
    for (int c = 0; c < n; ++c) row.push_back({2, c});
    CellSet line(n, row);
    REQUIRE(!is_improper(line));
    auto whole = find_proper_subset(line, n);
    REQUIRE(whole);
    CHECK(*whole == line);
    for (int k = 1; k < n; ++k) CHECK(!find_proper_subset(line, k));
  }
}

TEST_CASE("find_proper_subset: existence matches exhaustive enumeration") {
  Rng rng(1234);
  for (int trial = 0; trial < 250; ++trial) {
    int n = 2 + rng.below_int(4);  // n in 2..5
    int count = rng.below_int(std::min(n * n, 10) + 1);
    CellSet s = random_set(n, count, rng);
    for (int k = 0; k <= s.size(); ++k) {
      auto got = find_proper_subset(s, k);
      bool expected = subset_exists_brute(s, k);
      REQUIRE(got.has_value() == expected);
      if (got) {
        CHECK(got->size() == k);
        CHECK(!is_improper(*got));
        for (const Cell& c : got->cells) CHECK(s.contains(c));
      }
    }
  }
}

TEST_CASE("check_feasibility: pinned examples") {
  const int n = 7;
  // two full rows of blue
  std::vector<Cell> two_rows;
  for (int c = 0; c < n; ++c) {
    two_rows.push_back({0, c});
    two_rows.push_back({1, c});
  }
  CHECK(check_feasibility(grid_with_blue(n, two_rows)).feasible());

  // the 2n-2 cross pattern
  auto w = check_feasibility(grid_with_blue(n, Cross{0, 0}.cells(n)));
  auto* improper = std::get_if<FeasibilityWitness::ImproperColorClass>(&w.value);
  REQUIRE(improper);
  CHECK(improper->color == Color::Blue);
  CHECK(improper->cross == Cross{0, 0});

  // six arbitrary blue cells
  auto few = check_feasibility(grid_with_blue(n, {{0, 0}, {1, 2}, {2, 4}, {3, 6}, {4, 1}, {5, 3}}));
  auto* toofew = std::get_if<FeasibilityWitness::TooFewCells>(&few.value);
  REQUIRE(toofew);
  CHECK(toofew->color == Color::Blue);
  CHECK(toofew->count == 6);
}

TEST_CASE("check_feasibility: witness subsets really are proper n-subsets of the classes") {
  Rng rng(4321);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + rng.below_int(6);
    CellSet blue = random_set(n, rng.below_int(n * n + 1), rng);
    BicoloredGrid g = grid_with_blue(n, blue.cells);
    auto w = check_feasibility(g);
    if (const auto* f = std::get_if<FeasibilityWitness::Feasible>(&w.value)) {
      CHECK(f->blue_subset.size() == n);
      CHECK(f->red_subset.size() == n);
      CHECK(!brute_improper(f->blue_subset));
      CHECK(!brute_improper(f->red_subset));
      for (const Cell& c : f->blue_subset.cells) CHECK(g.at(c.row, c.col) == Color::Blue);
      for (const Cell& c : f->red_subset.cells) CHECK(g.at(c.row, c.col) == Color::Red);
    } else if (const auto* t = std::get_if<FeasibilityWitness::TooFewCells>(&w.value)) {
      CHECK(cells_of(g, t->color).size() == t->count);
      CHECK(t->count < n);
    } else {
      const auto& im = std::get<FeasibilityWitness::ImproperColorClass>(w.value);
      for (const Cell& c : cells_of(g, im.color).cells) CHECK(im.cross.covers(c));
    }
  }
}

TEST_CASE("verify_partition: pinned examples") {
  const int n = 7;
  std::vector<Cell> two_rows;
  for (int c = 0; c < n; ++c) {
    two_rows.push_back({0, c});
    two_rows.push_back({1, c});
  }
  BicoloredGrid g = grid_with_blue(n, two_rows);
  DiagonalPartition p = shifted_partition(n);
  CHECK(verify_partition(g, p).ok());

  BicoloredGrid all_blue(n, Color::Blue);
  PartitionReport rep = verify_partition(all_blue, p);
  int missing_red = 0;
  for (const auto& issue : rep.issues)
    if (issue.kind == PartitionIssue::Kind::Unbalanced && issue.missing_color == Color::Red)
      ++missing_red;
  CHECK(missing_red == n);

  DiagonalPartition dup = p;
  dup.diagonals[1] = dup.diagonals[0];
  PartitionReport rep2 = verify_partition(g, dup);
  bool overlap = false;
  for (const auto& issue : rep2.issues)
    overlap = overlap || issue.kind == PartitionIssue::Kind::Overlap;
  CHECK(overlap);
  CHECK(!rep2.ok());
}

TEST_CASE("verify_partition: agrees with a by-definition re-check under random mutations") {
  Rng rng(5150);
  const int n = 6;
  for (int trial = 0; trial < 200; ++trial) {
    BicoloredGrid g(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (rng.coin(0.5)) g.set(r, c, Color::Blue);
    DiagonalPartition p = shifted_partition(n);
    // randomly corrupt the partition about half the time
    if (rng.coin(0.5)) {
      auto& cells = p.diagonals[rng.below(p.diagonals.size())].cells;
      cells[rng.below(cells.size())] = {rng.below_int(n), rng.below_int(n)};
    }
    // independent re-check by definition
    bool good = static_cast<int>(p.diagonals.size()) == n;
    std::vector<int> seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (const Diagonal& d : p.diagonals) {
      good = good && is_valid_diagonal(n, d);
      bool blue = false, red = false;
      for (const Cell& c : d.cells) {
        if (c.row >= 0 && c.row < n && c.col >= 0 && c.col < n) ++seen[g.index(c.row, c.col)];
        (g.at(std::clamp(c.row, 0, n - 1), std::clamp(c.col, 0, n - 1)) == Color::Blue ? blue : red) = true;
      }
      good = good && blue && red;
    }
    for (int v : seen) good = good && v == 1;
    CHECK(verify_partition(g, p).ok() == good);
  }
}

TEST_CASE("balanced matching adapter: round-trip and edge colors") {
  const int n = 7;
  Rng rng(31337);
  BicoloredGrid g(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (rng.coin(0.4)) g.set(r, c, Color::Blue);
  DiagonalPartition p = shifted_partition(n);

  BalancedMatchingCover cover = to_balanced_matchings(g, p);
  CHECK(from_edge_coloring(n, cover.edge_color) == g);
  REQUIRE(static_cast<int>(cover.matchings.size()) == n);
  for (const auto& matching : cover.matchings) {
    CHECK(static_cast<int>(matching.size()) == n);
    std::vector<char> left(static_cast<std::size_t>(n), 0), right(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : matching) {
      CHECK(!left[static_cast<std::size_t>(u)]);
      CHECK(!right[static_cast<std::size_t>(v)]);
      left[static_cast<std::size_t>(u)] = right[static_cast<std::size_t>(v)] = 1;
    }
  }

  // all edges color 1 -> all-blue grid
  std::vector<int> ones(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 1);
  BicoloredGrid blue = from_edge_coloring(n, ones);
  CHECK(blue.count(Color::Blue) == n * n);

  // a balanced partition maps to matchings that carry both edge colors
  std::vector<Cell> two_rows;
  for (int c = 0; c < n; ++c) {
    two_rows.push_back({0, c});
    two_rows.push_back({1, c});
  }
  BicoloredGrid balanced_grid = grid_with_blue(n, two_rows);
  REQUIRE(verify_partition(balanced_grid, p).ok());
  BalancedMatchingCover bal = to_balanced_matchings(balanced_grid, p);
  for (const auto& matching : bal.matchings) {
    bool c1 = false, c2 = false;
    for (auto [u, v] : matching) {
      int f = bal.edge_color[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)];
      (f == 1 ? c1 : c2) = true;
    }
    CHECK(c1);
    CHECK(c2);
  }
}
