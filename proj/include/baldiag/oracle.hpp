#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "baldiag/grid.hpp"
#include "baldiag/latin.hpp"
#include "baldiag/rng.hpp"

namespace baldiag {

struct OracleVerdict {
  std::optional<DiagonalPartition> partition;
  bool found() const { return partition.has_value(); }
};

namespace detail {

// Row-by-row Latin-square construction: symbol = diagonal label. The first
// row is fixed to 1..n (labels are interchangeable), and a symbol class
// that can no longer pick up a missing color in the remaining rows is cut.
struct OracleSearch {
  const BicoloredGrid& grid;
  int n;
  bool prune;
  std::vector<int> square;              // row-major labels, 0 = empty
  std::vector<std::uint32_t> col_used;  // per column, bit s-1 = symbol s used
  std::vector<std::uint32_t> sym_cols;  // per symbol, columns already used
  std::vector<char> has_blue, has_red;
  std::vector<std::uint32_t> blue_in_row, red_in_row;  // column bitmasks

  OracleSearch(const BicoloredGrid& g, bool use_pruning)
      : grid(g),
        n(g.n),
        prune(use_pruning),
        square(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n), 0),
        col_used(static_cast<std::size_t>(g.n), 0),
        sym_cols(static_cast<std::size_t>(g.n + 1), 0),
        has_blue(static_cast<std::size_t>(g.n + 1), 0),
        has_red(static_cast<std::size_t>(g.n + 1), 0),
        blue_in_row(static_cast<std::size_t>(g.n), 0),
        red_in_row(static_cast<std::size_t>(g.n), 0) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (g.at(r, c) == Color::Blue)
          blue_in_row[static_cast<std::size_t>(r)] |= 1u << c;
        else
          red_in_row[static_cast<std::size_t>(r)] |= 1u << c;
      }
  }

  void place(int r, int c, int s) {
    square[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] = s;
    col_used[static_cast<std::size_t>(c)] |= 1u << (s - 1);
    sym_cols[static_cast<std::size_t>(s)] |= 1u << c;
  }
  void remove(int r, int c, int s) {
    square[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] = 0;
    col_used[static_cast<std::size_t>(c)] &= ~(1u << (s - 1));
    sym_cols[static_cast<std::size_t>(s)] &= ~(1u << c);
  }

  bool colors_reachable(int next_row) const {
    for (int s = 1; s <= n; ++s) {
      std::uint32_t free_cols = ~sym_cols[static_cast<std::size_t>(s)];
      if (!has_blue[static_cast<std::size_t>(s)]) {
        bool ok = false;
        for (int r = next_row; r < n && !ok; ++r)
          ok = (blue_in_row[static_cast<std::size_t>(r)] & free_cols) != 0;
        if (!ok) return false;
      }
      if (!has_red[static_cast<std::size_t>(s)]) {
        bool ok = false;
        for (int r = next_row; r < n && !ok; ++r)
          ok = (red_in_row[static_cast<std::size_t>(r)] & free_cols) != 0;
        if (!ok) return false;
      }
    }
    return true;
  }

  bool fill_cell(int r, int c, std::uint32_t row_used) {
    if (c == n) {
      if (prune && !colors_reachable(r + 1)) return false;
      return fill_row(r + 1);
    }
    std::uint32_t avail = ~(row_used | col_used[static_cast<std::size_t>(c)]) &
                          ((n == 32 ? 0xffffffffu : (1u << n) - 1));
    while (avail) {
      int s = std::countr_zero(avail) + 1;
      avail &= avail - 1;
      bool was_blue = has_blue[static_cast<std::size_t>(s)];
      bool was_red = has_red[static_cast<std::size_t>(s)];
      place(r, c, s);
      if (grid.at(r, c) == Color::Blue)
        has_blue[static_cast<std::size_t>(s)] = 1;
      else
        has_red[static_cast<std::size_t>(s)] = 1;
      if (fill_cell(r, c + 1, row_used | (1u << (s - 1)))) return true;
      remove(r, c, s);
      has_blue[static_cast<std::size_t>(s)] = was_blue;
      has_red[static_cast<std::size_t>(s)] = was_red;
    }
    return false;
  }

  bool fill_row(int r) {
    if (r == n) {
      for (int s = 1; s <= n; ++s)
        if (!has_blue[static_cast<std::size_t>(s)] || !has_red[static_cast<std::size_t>(s)]) return false;
      return true;
    }
    return fill_cell(r, 0, 0);
  }

  bool run() {
    for (int c = 0; c < n; ++c) {
      int s = c + 1;
      place(0, c, s);
      if (grid.at(0, c) == Color::Blue)
        has_blue[static_cast<std::size_t>(s)] = 1;
      else
        has_red[static_cast<std::size_t>(s)] = 1;
    }
    if (prune && !colors_reachable(1)) return false;
    return fill_row(1);
  }
};

}  // namespace detail

// Exhaustive ground truth: NoneExists is a proof, not a timeout. The
// default limit keeps accidental large runs out; raise it deliberately.
inline OracleVerdict oracle_decompose(const BicoloredGrid& grid, int n_limit = 7,
                                      bool use_pruning = true) {
  if (grid.n > n_limit)
    throw std::invalid_argument("oracle_decompose: order exceeds the cost-guard limit");
  if (grid.n > 31) throw std::invalid_argument("oracle_decompose: order too large");
  detail::OracleSearch search(grid, use_pruning);
  OracleVerdict verdict;
  if (search.run()) {
    LatinSquare ls{grid.n, std::move(search.square)};
    verdict.partition = partition_from_symbol_diagonals(grid.n, symbol_diagonals(ls));
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Sweeps over all colorings of a small grid
// ---------------------------------------------------------------------------

inline BicoloredGrid grid_from_mask(int n, std::uint64_t mask) {
  if (n * n > 64) throw std::invalid_argument("grid_from_mask: order too large");
  BicoloredGrid g(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (mask >> (r * n + c) & 1) g.set(r, c, Color::Blue);
  return g;
}

inline std::uint64_t mask_from_grid(const BicoloredGrid& g) {
  if (g.n * g.n > 64) throw std::invalid_argument("mask_from_grid: order too large");
  std::uint64_t mask = 0;
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c)
      if (g.at(r, c) == Color::Blue) mask |= 1ull << (r * g.n + c);
  return mask;
}

struct SweepReport {
  int n = 0;
  std::uint64_t total = 0;
  std::uint64_t decomposable = 0;
  std::uint64_t feasible = 0;
  // oracle found a partition but the condition fails — Theorem-necessity
  // counterexamples, expected empty at every order
  std::vector<std::uint64_t> counterexamples;
  // condition holds but no partition exists — possible below order 7,
  // collected as the sufficiency frontier
  std::vector<std::uint64_t> frontier;
};

// Checks "decomposable implies condition" over every 2-coloring of the n×n
// grid. Optionally emits one record per coloring:
//   <mask-hex> <found|none> <certificate>
inline SweepReport exhaustive_necessity_sweep(int n, std::ostream* records = nullptr) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("exhaustive_necessity_sweep: supported for n in 1..4");
  SweepReport report;
  report.n = n;
  const std::uint64_t total = 1ull << (n * n);
  report.total = total;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    BicoloredGrid g = grid_from_mask(n, mask);
    FeasibilityWitness w = check_feasibility(g);
    OracleVerdict v = oracle_decompose(g, n);
    if (v.found()) ++report.decomposable;
    if (w.feasible()) ++report.feasible;
    if (v.found() && !w.feasible()) report.counterexamples.push_back(mask);
    if (!v.found() && w.feasible()) report.frontier.push_back(mask);
    if (records) {
      *records << std::hex << mask << std::dec << ' ' << (v.found() ? "found" : "none") << ' '
               << describe(w) << '\n';
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Seeded instance generation
// ---------------------------------------------------------------------------

struct RandomSpec {
  enum class Kind {
    Uniform,            // each cell blue with probability p
    ExactBlue,          // exactly `count` blue cells, positions random
    ConditionSatisfying,  // uniform(1/2), resampled until feasible
    CrossCounterexample,  // blue = Cross(0,0), the 2n-2 pattern
    MinEachColor,       // `count` cells forced blue, `count` forced red, rest random
  };
  Kind kind = Kind::Uniform;
  double p = 0.5;
  int count = 0;

  static RandomSpec uniform(double prob) { return {Kind::Uniform, prob, 0}; }
  static RandomSpec exact_blue(int m) { return {Kind::ExactBlue, 0.5, m}; }
  static RandomSpec condition_satisfying() { return {Kind::ConditionSatisfying, 0.5, 0}; }
  static RandomSpec cross_counterexample() { return {Kind::CrossCounterexample, 0.5, 0}; }
  static RandomSpec min_each_color(int m) { return {Kind::MinEachColor, 0.5, m}; }
};

inline BicoloredGrid random_grid(int n, const RandomSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const int cells = n * n;
  switch (spec.kind) {
    case RandomSpec::Kind::Uniform: {
      if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("random_grid: p outside [0,1]");
      BicoloredGrid g(n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (rng.coin(spec.p)) g.set(r, c, Color::Blue);
      return g;
    }
    case RandomSpec::Kind::ExactBlue: {
      if (spec.count < 0 || spec.count > cells)
        throw std::invalid_argument("random_grid: blue count out of range");
      BicoloredGrid g(n);
      for (int idx : rng.sample(cells, spec.count)) g.set(idx / n, idx % n, Color::Blue);
      return g;
    }
    case RandomSpec::Kind::ConditionSatisfying: {
      for (int attempt = 0; attempt < 100000; ++attempt) {
        BicoloredGrid g(n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c)
            if (rng.coin(0.5)) g.set(r, c, Color::Blue);
        if (check_feasibility(g).feasible()) return g;
      }
      throw std::invalid_argument("random_grid: no feasible coloring found at this order");
    }
    case RandomSpec::Kind::CrossCounterexample: {
      BicoloredGrid g(n);
      if (n >= 2)
        for (const Cell& c : Cross{0, 0}.cells(n)) g.set(c.row, c.col, Color::Blue);
      return g;
    }
    case RandomSpec::Kind::MinEachColor: {
      if (spec.count < 0 || 2 * spec.count > cells)
        throw std::invalid_argument("random_grid: forced counts exceed the grid");
      BicoloredGrid g(n);
      std::vector<int> order = rng.sample(cells, cells);
      for (int i = 0; i < spec.count; ++i) {
        int b = order[static_cast<std::size_t>(i)];
        g.set(b / n, b % n, Color::Blue);
      }
      // cells order[count..2count) stay red by construction
      for (int i = 2 * spec.count; i < cells; ++i) {
        int idx = order[static_cast<std::size_t>(i)];
        if (rng.coin(0.5)) g.set(idx / n, idx % n, Color::Blue);
      }
      return g;
    }
  }
  throw std::invalid_argument("random_grid: unknown spec");
}

}  // namespace baldiag
