#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "baldiag/latin.hpp"
#include "baldiag/matching.hpp"

namespace baldiag {

// A fully filled r×s block sitting in the top-left corner of an (intended)
// order-n Latin square. Completable iff every symbol occurs at least
// r+s-n times in the block.
struct CornerBlock {
  int n = 0;
  int r = 0;
  int s = 0;
  std::vector<int> block;  // r*s row-major, symbols 1..n

  int at(int i, int j) const {
    return block[static_cast<std::size_t>(i) * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)];
  }

  std::vector<int> symbol_counts() const {
    std::vector<int> counts(static_cast<std::size_t>(n + 1), 0);
    for (int v : block) ++counts[static_cast<std::size_t>(v)];
    return counts;
  }
};

inline void validate_corner_block(const CornerBlock& b) {
  if (b.n <= 0 || b.r <= 0 || b.s <= 0 || b.r > b.n || b.s > b.n)
    throw std::invalid_argument("corner block: bad dimensions");
  if (static_cast<int>(b.block.size()) != b.r * b.s)
    throw std::invalid_argument("corner block: wrong cell count");
  for (int v : b.block)
    if (v < 1 || v > b.n) throw std::invalid_argument("corner block: symbol out of range");
  for (int i = 0; i < b.r; ++i) {
    std::vector<char> seen(static_cast<std::size_t>(b.n + 1), 0);
    for (int j = 0; j < b.s; ++j) {
      if (seen[static_cast<std::size_t>(b.at(i, j))])
        throw std::invalid_argument("corner block: duplicate in a row");
      seen[static_cast<std::size_t>(b.at(i, j))] = 1;
    }
  }
  for (int j = 0; j < b.s; ++j) {
    std::vector<char> seen(static_cast<std::size_t>(b.n + 1), 0);
    for (int i = 0; i < b.r; ++i) {
      if (seen[static_cast<std::size_t>(b.at(i, j))])
        throw std::invalid_argument("corner block: duplicate in a column");
      seen[static_cast<std::size_t>(b.at(i, j))] = 1;
    }
  }
}

// Symbols whose occurrence count falls below r+s-n; empty means completable.
inline std::vector<int> check_ryser_condition(const CornerBlock& b) {
  validate_corner_block(b);
  const int threshold = b.r + b.s - b.n;
  std::vector<int> violating;
  if (threshold <= 0) return violating;
  auto counts = b.symbol_counts();
  for (int sym = 1; sym <= b.n; ++sym)
    if (counts[static_cast<std::size_t>(sym)] < threshold) violating.push_back(sym);
  return violating;
}

struct LatinRectangle {
  int rows = 0;
  int n = 0;
  std::vector<int> entries;  // rows*n row-major, symbols 1..n

  int at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
};

inline void validate_latin_rectangle(const LatinRectangle& rect) {
  if (rect.rows <= 0 || rect.rows > rect.n || rect.n <= 0)
    throw std::invalid_argument("latin rectangle: bad dimensions");
  if (static_cast<int>(rect.entries.size()) != rect.rows * rect.n)
    throw std::invalid_argument("latin rectangle: wrong cell count");
  for (int i = 0; i < rect.rows; ++i) {
    std::vector<char> seen(static_cast<std::size_t>(rect.n + 1), 0);
    for (int j = 0; j < rect.n; ++j) {
      int v = rect.at(i, j);
      if (v < 1 || v > rect.n || seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("latin rectangle: row is not a permutation");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }
  for (int j = 0; j < rect.n; ++j) {
    std::vector<char> seen(static_cast<std::size_t>(rect.n + 1), 0);
    for (int i = 0; i < rect.rows; ++i) {
      int v = rect.at(i, j);
      if (seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("latin rectangle: duplicate in a column");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }
}

// Fills columns s..n-1 of the block so each row becomes a permutation of
// 1..n and columns stay duplicate-free. The multigraph on rows × symbols
// with one edge per missing (row, symbol) incidence has maximum degree
// n-s exactly when the Ryser condition holds; a proper (n-s)-edge-coloring
// assigns each missing symbol to one new column.
inline LatinRectangle extend_block_to_latin_rectangle(const CornerBlock& b) {
  if (!check_ryser_condition(b).empty())
    throw std::invalid_argument("extend_block_to_latin_rectangle: Ryser condition violated");
  LatinRectangle rect{b.r, b.n, std::vector<int>(static_cast<std::size_t>(b.r) * static_cast<std::size_t>(b.n), 0)};
  for (int i = 0; i < b.r; ++i)
    for (int j = 0; j < b.s; ++j)
      rect.entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(b.n) + static_cast<std::size_t>(j)] =
          b.at(i, j);
  if (b.s == b.n) return rect;

  BipartiteMultigraph g(b.r, b.n);
  for (int i = 0; i < b.r; ++i) {
    std::vector<char> present(static_cast<std::size_t>(b.n + 1), 0);
    for (int j = 0; j < b.s; ++j) present[static_cast<std::size_t>(b.at(i, j))] = 1;
    for (int sym = 1; sym <= b.n; ++sym)
      if (!present[static_cast<std::size_t>(sym)]) g.add_edge(i, sym - 1);
  }
  std::vector<int> colors = edge_color_bipartite(g, b.n - b.s);
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    int row = g.edges[id].u;
    int sym = g.edges[id].v + 1;
    int col = b.s + colors[id];
    rect.entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(b.n) + static_cast<std::size_t>(col)] = sym;
  }
  validate_latin_rectangle(rect);
  return rect;
}

// Adds rows r..n-1 one at a time. Each new row is an SDR of the
// per-column missing-symbol sets; that family is (n-r)-regular, so Hall's
// condition holds and the SDR always exists.
inline LatinSquare extend_rectangle_to_square(const LatinRectangle& rect) {
  validate_latin_rectangle(rect);
  const int n = rect.n;
  std::vector<std::vector<char>> col_has(static_cast<std::size_t>(n),
                                         std::vector<char>(static_cast<std::size_t>(n + 1), 0));
  std::vector<int> entries = rect.entries;
  entries.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < rect.rows; ++i)
    for (int j = 0; j < n; ++j) col_has[static_cast<std::size_t>(j)][static_cast<std::size_t>(rect.at(i, j))] = 1;

  for (int row = rect.rows; row < n; ++row) {
    std::vector<std::vector<int>> missing(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      for (int sym = 1; sym <= n; ++sym)
        if (!col_has[static_cast<std::size_t>(j)][static_cast<std::size_t>(sym)])
          missing[static_cast<std::size_t>(j)].push_back(sym - 1);
    SdrResult sdr = find_sdr(missing);
    if (!sdr.representatives)
      throw std::logic_error("extend_rectangle_to_square: SDR vanished on a regular family");
    for (int j = 0; j < n; ++j) {
      int sym = (*sdr.representatives)[static_cast<std::size_t>(j)] + 1;
      entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = sym;
      col_has[static_cast<std::size_t>(j)][static_cast<std::size_t>(sym)] = 1;
    }
  }
  LatinSquare ls{n, std::move(entries)};
  if (!is_latin_square(ls)) throw std::logic_error("extend_rectangle_to_square: result is not Latin");
  return ls;
}

// The full constructive route: no search and no failure path once the
// counting condition holds.
inline LatinSquare complete_corner(const CornerBlock& b) {
  if (!check_ryser_condition(b).empty())
    throw std::invalid_argument("complete_corner: Ryser condition violated");
  return extend_rectangle_to_square(extend_block_to_latin_rectangle(b));
}

}  // namespace baldiag
