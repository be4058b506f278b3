#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "baldiag/grid.hpp"

namespace baldiag {

// n×n array partially filled with symbols 1..n (0 = empty), no symbol twice
// in a row or column. `size` in the combinatorial sense is the number of
// filled cells.
struct PartialLatinSquare {
  int n = 0;
  std::vector<int> entries;  // row-major, 0 = empty

  PartialLatinSquare() = default;
  explicit PartialLatinSquare(int order)
      : n(order), entries(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), 0) {
    if (order <= 0) throw std::invalid_argument("order must be positive");
    if (order > 60) throw std::invalid_argument("order too large for the bitmask solver");
  }

  int at(int r, int c) const { return entries[index(r, c)]; }
  void set(int r, int c, int s) { entries[index(r, c)] = s; }
  int size() const {
    return static_cast<int>(entries.size()) -
           static_cast<int>(std::count(entries.begin(), entries.end(), 0));
  }

  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c);
  }

  friend bool operator==(const PartialLatinSquare&, const PartialLatinSquare&) = default;
};

struct LatinSquare {
  int n = 0;
  std::vector<int> entries;  // row-major, all 1..n

  int at(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
  }

  friend bool operator==(const LatinSquare&, const LatinSquare&) = default;
};

struct SymbolDiagonal {
  int symbol = 0;
  std::vector<Cell> cells;
};

struct LatinViolation {
  enum class Kind { RowDuplicate, ColDuplicate, BadSymbol };
  Kind kind{};
  int index = 0;   // row or column of the duplicate
  int symbol = 0;
};

// Reports the first violation found by a row-major scan (row duplicate
// checked before column duplicate at each cell), or nullopt when valid.
inline std::optional<LatinViolation> validate(const PartialLatinSquare& pls) {
  const int n = pls.n;
  std::vector<char> row_seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1), 0);
  std::vector<char> col_seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1), 0);
  auto slot = [n](int line, int s) {
    return static_cast<std::size_t>(line) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(s);
  };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int s = pls.at(r, c);
      if (s == 0) continue;
      if (s < 0 || s > n) return LatinViolation{LatinViolation::Kind::BadSymbol, r, s};
      if (row_seen[slot(r, s)]) return LatinViolation{LatinViolation::Kind::RowDuplicate, r, s};
      if (col_seen[slot(c, s)]) return LatinViolation{LatinViolation::Kind::ColDuplicate, c, s};
      row_seen[slot(r, s)] = 1;
      col_seen[slot(c, s)] = 1;
    }
  }
  return std::nullopt;
}

inline bool is_latin_square(const LatinSquare& ls) {
  PartialLatinSquare p(ls.n);
  p.entries = ls.entries;
  return p.size() == ls.n * ls.n && !validate(p);
}

// ---------------------------------------------------------------------------
// Exact completion
// ---------------------------------------------------------------------------

struct CompletionResult {
  enum class Status { Completed, ProvenInfeasible, BudgetExceeded };
  Status status{};
  std::optional<LatinSquare> square;
  std::uint64_t nodes = 0;

  bool completed() const { return status == Status::Completed; }
};

namespace detail {

struct Completer {
  int n;
  std::vector<int> grid;
  std::vector<std::uint64_t> row_used, col_used;
  std::uint64_t full;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  explicit Completer(const PartialLatinSquare& pls, std::uint64_t node_budget)
      : n(pls.n),
        grid(pls.entries),
        row_used(static_cast<std::size_t>(pls.n), 0),
        col_used(static_cast<std::size_t>(pls.n), 0),
        full(pls.n == 64 ? ~0ull : (1ull << pls.n) - 1),
        budget(node_budget) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        int s = at(r, c);
        if (s) {
          row_used[static_cast<std::size_t>(r)] |= bit(s);
          col_used[static_cast<std::size_t>(c)] |= bit(s);
        }
      }
  }

  static std::uint64_t bit(int symbol) { return 1ull << (symbol - 1); }
  int at(int r, int c) const {
    return grid[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
  }
  void put(int r, int c, int s) {
    grid[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] = s;
  }

  // Most-constrained empty cell, row-major tie-break. Returns false when the
  // square is full; a cell with no candidates is returned immediately.
  bool pick_cell(int& pr, int& pc, std::uint64_t& pavail) {
    int best_count = n + 1;
    bool found = false;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (at(r, c)) continue;
        std::uint64_t avail =
            full & ~(row_used[static_cast<std::size_t>(r)] | col_used[static_cast<std::size_t>(c)]);
        int cnt = std::popcount(avail);
        if (cnt < best_count) {
          best_count = cnt;
          pr = r;
          pc = c;
          pavail = avail;
          found = true;
          if (cnt == 0) return true;
        }
      }
    return found;
  }

  bool solve() {
    if (++nodes > budget) {
      out_of_budget = true;
      return false;
    }
    int r = 0, c = 0;
    std::uint64_t avail = 0;
    if (!pick_cell(r, c, avail)) return true;  // full
    while (avail) {
      int s = std::countr_zero(avail) + 1;
      avail &= avail - 1;
      put(r, c, s);
      row_used[static_cast<std::size_t>(r)] |= bit(s);
      col_used[static_cast<std::size_t>(c)] |= bit(s);
      if (solve()) return true;
      row_used[static_cast<std::size_t>(r)] &= ~bit(s);
      col_used[static_cast<std::size_t>(c)] &= ~bit(s);
      put(r, c, 0);
      if (out_of_budget) return false;
    }
    return false;
  }
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

// Backtracking search over the empty cells: most-constrained cell first,
// symbols tried in ascending order, so results are reproducible.
// ProvenInfeasible is an exhaustive-search verdict, not a heuristic one.
inline CompletionResult complete(const PartialLatinSquare& pls,
                                 std::uint64_t node_budget = kDefaultNodeBudget) {
  if (auto v = validate(pls)) {
    (void)v;
    throw std::invalid_argument("complete: input is not a valid partial Latin square");
  }
  detail::Completer solver(pls, node_budget);
  bool solved = solver.solve();
  CompletionResult out;
  out.nodes = solver.nodes;
  if (solved) {
    out.status = CompletionResult::Status::Completed;
    out.square = LatinSquare{pls.n, std::move(solver.grid)};
  } else if (solver.out_of_budget) {
    out.status = CompletionResult::Status::BudgetExceeded;
  } else {
    out.status = CompletionResult::Status::ProvenInfeasible;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbol diagonals and embeddings
// ---------------------------------------------------------------------------

inline std::vector<SymbolDiagonal> symbol_diagonals(const LatinSquare& ls) {
  if (!is_latin_square(ls)) throw std::invalid_argument("symbol_diagonals: not a Latin square");
  std::vector<SymbolDiagonal> out(static_cast<std::size_t>(ls.n));
  for (int s = 1; s <= ls.n; ++s) out[static_cast<std::size_t>(s - 1)].symbol = s;
  for (int r = 0; r < ls.n; ++r)
    for (int c = 0; c < ls.n; ++c)
      out[static_cast<std::size_t>(ls.at(r, c) - 1)].cells.push_back({r, c});
  return out;
}

inline DiagonalPartition partition_from_symbol_diagonals(int n, const std::vector<SymbolDiagonal>& sds) {
  DiagonalPartition p;
  p.n = n;
  for (const SymbolDiagonal& sd : sds) p.diagonals.push_back({sd.cells});
  return p;
}

// Assigns symbols 1..n to the given n cells in lexicographic cell order.
// Distinct symbols never clash, so the result is always valid.
inline PartialLatinSquare embed_distinct_symbols(const CellSet& cells) {
  if (cells.size() != cells.n)
    throw std::invalid_argument("embed_distinct_symbols: need exactly n cells");
  PartialLatinSquare pls(cells.n);
  int s = 1;
  for (const Cell& c : cells.cells) pls.set(c.row, c.col, s++);
  return pls;
}

// ---------------------------------------------------------------------------
// The two non-completable size-n patterns
// ---------------------------------------------------------------------------

enum class ExceptionalForm { A, B };

namespace detail {

struct LineMasks {
  std::vector<std::uint64_t> row_symbols;  // symbols present per row
  std::vector<std::uint64_t> col_symbols;
};

inline LineMasks line_masks(const PartialLatinSquare& pls) {
  LineMasks m;
  m.row_symbols.assign(static_cast<std::size_t>(pls.n), 0);
  m.col_symbols.assign(static_cast<std::size_t>(pls.n), 0);
  for (int r = 0; r < pls.n; ++r)
    for (int c = 0; c < pls.n; ++c)
      if (int s = pls.at(r, c)) {
        m.row_symbols[static_cast<std::size_t>(r)] |= 1ull << (s - 1);
        m.col_symbols[static_cast<std::size_t>(c)] |= 1ull << (s - 1);
      }
  return m;
}

// Some symbol absent from a row (resp. column) is already shut out of every
// cell of that line.
inline bool has_blocked_line(const PartialLatinSquare& pls, bool by_rows) {
  const int n = pls.n;
  LineMasks m = line_masks(pls);
  const auto& own = by_rows ? m.row_symbols : m.col_symbols;
  const auto& other = by_rows ? m.col_symbols : m.row_symbols;
  for (int line = 0; line < n; ++line) {
    for (int s = 1; s <= n; ++s) {
      if (own[static_cast<std::size_t>(line)] >> (s - 1) & 1) continue;
      bool blocked = true;
      for (int k = 0; k < n && blocked; ++k) {
        int filled = by_rows ? pls.at(line, k) : pls.at(k, line);
        blocked = filled != 0 || (other[static_cast<std::size_t>(k)] >> (s - 1) & 1);
      }
      if (blocked) return true;
    }
  }
  return false;
}

// Some empty cell already sees all n symbols in its row and column.
inline bool has_blocked_cell(const PartialLatinSquare& pls) {
  const int n = pls.n;
  LineMasks m = line_masks(pls);
  const std::uint64_t full = pls.n == 64 ? ~0ull : (1ull << pls.n) - 1;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!pls.at(r, c) &&
          (m.row_symbols[static_cast<std::size_t>(r)] | m.col_symbols[static_cast<std::size_t>(c)]) == full)
        return true;
  return false;
}

}  // namespace detail

// Detects the non-completable size-n patterns, up to row/column permutation,
// transpose and symbol renaming. Exactly two shapes exist:
//
//   A: a symbol placed b >= 1 times as a partial diagonal, plus n-b cells of
//      one line it avoids, together covering every crossing line — the
//      symbol can no longer enter that line;
//   B: n distinct symbols inside one row-column pair, leaving their empty
//      crossing cell with no admissible symbol.
//
// The two overlap when b = 1; the tag follows the symbol multiset (a repeat
// forces shape A, all-distinct means shape B). Both tests are blocking
// predicates, so a hit is a direct proof of non-completability; the converse
// (every non-completable size-n square is caught) is checked against the
// exhaustive solver in the tests.
inline std::optional<ExceptionalForm> is_exceptional_form(const PartialLatinSquare& pls) {
  if (pls.size() != pls.n)
    throw std::invalid_argument("is_exceptional_form: size must equal the order");
  if (validate(pls)) throw std::invalid_argument("is_exceptional_form: invalid partial square");
  bool blocked = detail::has_blocked_line(pls, true) || detail::has_blocked_line(pls, false) ||
                 detail::has_blocked_cell(pls);
  if (!blocked) return std::nullopt;
  std::vector<int> count(static_cast<std::size_t>(pls.n + 1), 0);
  for (int v : pls.entries)
    if (v) ++count[static_cast<std::size_t>(v)];
  for (int s = 1; s <= pls.n; ++s)
    if (count[static_cast<std::size_t>(s)] >= 2) return ExceptionalForm::A;
  return ExceptionalForm::B;
}

}  // namespace baldiag
