#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "baldiag/grid.hpp"
#include "baldiag/oracle.hpp"

using namespace baldiag;

namespace {

BicoloredGrid from_rows(const std::vector<std::string>& rows) {
  BicoloredGrid g(static_cast<int>(rows.size()));
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == 'B')
        g.set(r, c, Color::Blue);
  return g;
}

}  // namespace

TEST_CASE("oracle_decompose: pinned examples") {
  // column-constant coloring at order 2: every diagonal hits both columns
  OracleVerdict two = oracle_decompose(from_rows({"BR", "BR"}));
  REQUIRE(two.found());
  CHECK(verify_partition(from_rows({"BR", "BR"}), *two.partition).ok());

  // the main-diagonal coloring at order 2 has no balanced partition
  CHECK(!oracle_decompose(from_rows({"BR", "RB"})).found());

  // cross pattern at order 4: the diagonal through the center is all red
  BicoloredGrid cross = random_grid(4, RandomSpec::cross_counterexample(), 0);
  CHECK(!oracle_decompose(cross).found());

  // two blue rows at order 4
  OracleVerdict rows = oracle_decompose(from_rows({"BBBB", "BBBB", "RRRR", "RRRR"}));
  REQUIRE(rows.found());
  CHECK(verify_partition(from_rows({"BBBB", "BBBB", "RRRR", "RRRR"}), *rows.partition).ok());

  CHECK_THROWS_AS(oracle_decompose(BicoloredGrid(8)), std::invalid_argument);
}

TEST_CASE("oracle_decompose: pruning never changes the verdict (n <= 3 exhaustive)") {
  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t total = 1ull << (n * n);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      BicoloredGrid g = grid_from_mask(n, mask);
      bool pruned = oracle_decompose(g, n, true).found();
      bool unpruned = oracle_decompose(g, n, false).found();
      REQUIRE(pruned == unpruned);
    }
  }
}

TEST_CASE("oracle_decompose: found partitions always verify (n = 4 sample)") {
  for (std::uint64_t mask = 0; mask < (1u << 16); mask += 97) {
    BicoloredGrid g = grid_from_mask(4, mask);
    OracleVerdict v = oracle_decompose(g);
    if (v.found()) CHECK(verify_partition(g, *v.partition).ok());
  }
}

TEST_CASE("exhaustive_necessity_sweep: orders 2 and 3 are clean") {
  SweepReport two = exhaustive_necessity_sweep(2);
  CHECK(two.total == 16);
  CHECK(two.counterexamples.empty());

  SweepReport three = exhaustive_necessity_sweep(3);
  CHECK(three.total == 512);
  CHECK(three.counterexamples.empty());

  CHECK_THROWS_AS(exhaustive_necessity_sweep(5), std::invalid_argument);
}

TEST_CASE("exhaustive_necessity_sweep: record stream has one line per coloring") {
  std::ostringstream records;
  SweepReport two = exhaustive_necessity_sweep(2, &records);
  std::istringstream in(records.str());
  std::string line;
  std::uint64_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == two.total);
}

TEST_CASE("grid_from_mask round-trips") {
  for (std::uint64_t mask : {0ull, 1ull, 0xbeefull, 0xffffull})
    CHECK(mask_from_grid(grid_from_mask(4, mask)) == mask);
}

TEST_CASE("random_grid: determinism and spec shapes") {
  // identical seeds, identical grids
  for (auto spec : {RandomSpec::uniform(0.4), RandomSpec::exact_blue(13),
                    RandomSpec::condition_satisfying(), RandomSpec::cross_counterexample(),
                    RandomSpec::min_each_color(13)}) {
    CHECK(random_grid(7, spec, 123) == random_grid(7, spec, 123));
  }

  // cross shape: 2n-2 blue cells, infeasible by construction
  BicoloredGrid cross = random_grid(7, RandomSpec::cross_counterexample(), 5);
  CHECK(cross.count(Color::Blue) == 12);
  auto w = check_feasibility(cross);
  CHECK(std::holds_alternative<FeasibilityWitness::ImproperColorClass>(w.value));

  // exact blue count
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    BicoloredGrid g = random_grid(7, RandomSpec::exact_blue(13), seed);
    CHECK(g.count(Color::Blue) == 13);
    CHECK(check_feasibility(g).feasible());  // 2n-1 cells of each color
  }

  // forced minimum per color
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    BicoloredGrid g = random_grid(7, RandomSpec::min_each_color(13), seed);
    CHECK(g.count(Color::Blue) >= 13);
    CHECK(g.count(Color::Red) >= 13);
    CHECK(check_feasibility(g).feasible());
  }

  // condition-satisfying always passes the check
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    CHECK(check_feasibility(random_grid(7, RandomSpec::condition_satisfying(), seed)).feasible());

  CHECK_THROWS_AS(random_grid(3, RandomSpec::exact_blue(10), 0), std::invalid_argument);
  CHECK_THROWS_AS(random_grid(3, RandomSpec::min_each_color(5), 0), std::invalid_argument);
  CHECK_THROWS_AS(random_grid(1, RandomSpec::condition_satisfying(), 0), std::invalid_argument);
}
