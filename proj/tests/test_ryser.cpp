#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "baldiag/latin.hpp"
#include "baldiag/rng.hpp"
#include "baldiag/ryser.hpp"

using namespace baldiag;

namespace {

// random fully filled r×s corner block (rows/columns duplicate-free)
std::optional<CornerBlock> try_random_block(int n, int r, int s, Rng& rng) {
  CornerBlock b{n, r, s, std::vector<int>(static_cast<std::size_t>(r) * static_cast<std::size_t>(s), 0)};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < s; ++j) {
      std::vector<int> allowed;
      for (int sym = 1; sym <= n; ++sym) {
        bool clash = false;
        for (int jj = 0; jj < j && !clash; ++jj) clash = b.at(i, jj) == sym;
        for (int ii = 0; ii < i && !clash; ++ii) clash = b.at(ii, j) == sym;
        if (!clash) allowed.push_back(sym);
      }
      if (allowed.empty()) return std::nullopt;
      b.block[static_cast<std::size_t>(i) * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)] =
          allowed[rng.below(allowed.size())];
    }
  return b;
}

CornerBlock random_block(int n, int r, int s, Rng& rng) {
  for (;;)
    if (auto b = try_random_block(n, r, s, rng)) return *b;
}

PartialLatinSquare block_as_pls(const CornerBlock& b) {
  PartialLatinSquare p(b.n);
  for (int i = 0; i < b.r; ++i)
    for (int j = 0; j < b.s; ++j) p.set(i, j, b.at(i, j));
  return p;
}

bool extends_block(const LatinSquare& ls, const CornerBlock& b) {
  for (int i = 0; i < b.r; ++i)
    for (int j = 0; j < b.s; ++j)
      if (ls.at(i, j) != b.at(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("check_ryser_condition: pinned examples") {
  CornerBlock ok{4, 2, 3, {1, 2, 3, 2, 3, 4}};
  CHECK(check_ryser_condition(ok).empty());
  auto counts = ok.symbol_counts();
  CHECK(counts == std::vector<int>{0, 1, 2, 2, 1});

  CornerBlock bad{4, 2, 3, {1, 2, 3, 2, 3, 1}};
  CHECK(check_ryser_condition(bad) == std::vector<int>{4});

  // threshold <= 0 is always fine
  CornerBlock small{9, 2, 3, {1, 2, 3, 2, 3, 1}};
  CHECK(check_ryser_condition(small).empty());

  CornerBlock malformed{4, 2, 2, {1, 2, 2, 1}};
  CHECK_THROWS_AS(check_ryser_condition(CornerBlock{4, 2, 2, {1, 2, 1, 2}}), std::invalid_argument);
  CHECK(check_ryser_condition(malformed).empty());
}

TEST_CASE("extend_block_to_latin_rectangle: pinned example is deterministic") {
  CornerBlock b{4, 2, 3, {1, 2, 3, 2, 3, 4}};
  LatinRectangle rect = extend_block_to_latin_rectangle(b);
  CHECK(rect.entries == std::vector<int>{1, 2, 3, 4, 2, 3, 4, 1});
  CHECK(extend_block_to_latin_rectangle(b).entries == rect.entries);

  // full-width block comes back unchanged
  CornerBlock full{4, 2, 4, {1, 2, 3, 4, 2, 3, 4, 1}};
  CHECK(extend_block_to_latin_rectangle(full).entries == full.block);

  CornerBlock bad{4, 2, 3, {1, 2, 3, 2, 3, 1}};
  CHECK_THROWS_AS(extend_block_to_latin_rectangle(bad), std::invalid_argument);
}

TEST_CASE("extend_block_to_latin_rectangle: rows become permutations (random blocks)") {
  Rng rng(64);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 3 + rng.below_int(8);
    int r = 1 + rng.below_int(n - 1);
    int s = 1 + rng.below_int(n - 1);
    CornerBlock b = random_block(n, r, s, rng);
    if (!check_ryser_condition(b).empty()) continue;
    LatinRectangle rect = extend_block_to_latin_rectangle(b);
    validate_latin_rectangle(rect);  // throws on failure
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < s; ++j) CHECK(rect.at(i, j) == b.at(i, j));
  }
}

TEST_CASE("extend_rectangle_to_square: pinned examples") {
  LatinRectangle one{1, 5, {1, 2, 3, 4, 5}};
  LatinSquare sq = extend_rectangle_to_square(one);
  CHECK(is_latin_square(sq));
  for (int c = 0; c < 5; ++c) CHECK(sq.at(0, c) == c + 1);

  // n-1 rows leave a forced final row
  LatinRectangle almost{3, 4, {1, 2, 3, 4, 2, 1, 4, 3, 3, 4, 1, 2}};
  LatinSquare forced = extend_rectangle_to_square(almost);
  CHECK(forced.at(3, 0) == 4);
  CHECK(forced.at(3, 1) == 3);
  CHECK(forced.at(3, 2) == 2);
  CHECK(forced.at(3, 3) == 1);

  LatinRectangle two{2, 4, {1, 2, 3, 4, 2, 3, 4, 1}};
  CHECK(is_latin_square(extend_rectangle_to_square(two)));

  CHECK_THROWS_AS(extend_rectangle_to_square(LatinRectangle{1, 3, {1, 1, 2}}), std::invalid_argument);
}

TEST_CASE("complete_corner: pinned examples") {
  CornerBlock b{4, 2, 3, {1, 2, 3, 2, 3, 4}};
  LatinSquare sq = complete_corner(b);
  CHECK(is_latin_square(sq));
  CHECK(extends_block(sq, b));

  // degenerate 1x1 block
  for (int x = 1; x <= 3; ++x) {
    CornerBlock tiny{3, 1, 1, {x}};
    LatinSquare t = complete_corner(tiny);
    CHECK(is_latin_square(t));
    CHECK(t.at(0, 0) == x);
  }

  CHECK_THROWS_AS(complete_corner(CornerBlock{4, 2, 3, {1, 2, 3, 2, 3, 1}}), std::invalid_argument);
}

TEST_CASE("complete_corner: randomized acceptance run, deterministic") {
  Rng rng(20240813);
  int completed = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 3 + rng.below_int(8);  // 3..10
    int r = 1 + rng.below_int(n - 1);
    int s = 1 + rng.below_int(n - 1);
    CornerBlock b = random_block(n, r, s, rng);
    if (!check_ryser_condition(b).empty()) continue;
    LatinSquare sq = complete_corner(b);
    CHECK(is_latin_square(sq));
    CHECK(extends_block(sq, b));
    CHECK(complete_corner(b).entries == sq.entries);
    ++completed;
  }
  CHECK(completed > 100);
}

TEST_CASE("Ryser condition is exact at small orders (cross-check with the exact solver)") {
  Rng rng(11);
  int ok_blocks = 0, bad_blocks = 0;
  for (int trial = 0; trial < 600; ++trial) {
    int n = 4 + rng.below_int(2);  // 4..5
    // bias a third of the sample toward large blocks, where the counting
    // threshold actually bites
    int r = trial % 3 == 0 ? n - 1 - rng.below_int(2) : 1 + rng.below_int(n - 1);
    int s = trial % 3 == 0 ? n - 1 - rng.below_int(2) : 1 + rng.below_int(n - 1);
    CornerBlock b = random_block(n, r, s, rng);
    bool ok = check_ryser_condition(b).empty();
    CompletionResult res = complete(block_as_pls(b));
    REQUIRE(res.status != CompletionResult::Status::BudgetExceeded);
    CHECK(ok == res.completed());
    (ok ? ok_blocks : bad_blocks)++;
  }
  CHECK(ok_blocks > 50);
  CHECK(bad_blocks > 50);
}
