#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace baldiag {

enum class Color : std::uint8_t { Blue, Red };

inline Color opposite(Color c) { return c == Color::Blue ? Color::Red : Color::Blue; }
inline char color_char(Color c) { return c == Color::Blue ? 'B' : 'R'; }
inline const char* color_name(Color c) { return c == Color::Blue ? "Blue" : "Red"; }

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// The witness of improperness: every cell of the set lies in row i or in
// column j but not in both, i.e. inside (row i ∪ column j) \ {(i,j)}.
struct Cross {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Cross&, const Cross&) = default;

  bool covers(Cell c) const { return (c.row == i) != (c.col == j); }

  std::vector<Cell> cells(int n) const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(2 * n - 2));
    for (int c = 0; c < n; ++c)
      if (c != j) out.push_back({i, c});
    for (int r = 0; r < n; ++r)
      if (r != i) out.push_back({r, j});
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct BicoloredGrid {
  int n = 0;
  std::vector<Color> colors;  // row-major n*n

  BicoloredGrid() = default;
  explicit BicoloredGrid(int order, Color fill = Color::Red)
      : n(order), colors(check_order(order), fill) {}

  Color at(int r, int c) const { return colors[index(r, c)]; }
  void set(int r, int c, Color col) { colors[index(r, c)] = col; }

  int count(Color c) const {
    return static_cast<int>(std::count(colors.begin(), colors.end(), c));
  }

  BicoloredGrid with_swapped_colors() const {
    BicoloredGrid out = *this;
    for (Color& c : out.colors) c = opposite(c);
    return out;
  }

  friend bool operator==(const BicoloredGrid&, const BicoloredGrid&) = default;

  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c);
  }

 private:
  static std::size_t check_order(int order) {
    if (order <= 0) throw std::invalid_argument("grid order must be positive");
    return static_cast<std::size_t>(order) * static_cast<std::size_t>(order);
  }
};

// A finite set of cells inside an n×n grid, kept sorted and duplicate-free.
struct CellSet {
  int n = 0;
  std::vector<Cell> cells;

  CellSet() = default;
  CellSet(int order, std::vector<Cell> cs) : n(order), cells(std::move(cs)) {
    if (order <= 0) throw std::invalid_argument("cell set order must be positive");
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (const Cell& c : cells)
      if (c.row < 0 || c.row >= n || c.col < 0 || c.col >= n)
        throw std::invalid_argument("cell outside grid");
  }

  int size() const { return static_cast<int>(cells.size()); }
  bool contains(Cell c) const { return std::binary_search(cells.begin(), cells.end(), c); }

  friend bool operator==(const CellSet&, const CellSet&) = default;
};

inline CellSet cells_of(const BicoloredGrid& g, Color color) {
  std::vector<Cell> out;
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c)
      if (g.at(r, c) == color) out.push_back({r, c});
  return CellSet(g.n, std::move(out));
}

struct Diagonal {
  std::vector<Cell> cells;  // one cell per row and per column
  friend bool operator==(const Diagonal&, const Diagonal&) = default;
};

inline bool is_valid_diagonal(int n, const Diagonal& d) {
  if (static_cast<int>(d.cells.size()) != n) return false;
  std::vector<char> row_seen(static_cast<std::size_t>(n), 0), col_seen(static_cast<std::size_t>(n), 0);
  for (const Cell& c : d.cells) {
    if (c.row < 0 || c.row >= n || c.col < 0 || c.col >= n) return false;
    if (row_seen[static_cast<std::size_t>(c.row)] || col_seen[static_cast<std::size_t>(c.col)]) return false;
    row_seen[static_cast<std::size_t>(c.row)] = col_seen[static_cast<std::size_t>(c.col)] = 1;
  }
  return true;
}

struct DiagonalPartition {
  int n = 0;
  std::vector<Diagonal> diagonals;
  friend bool operator==(const DiagonalPartition&, const DiagonalPartition&) = default;
};

// ---------------------------------------------------------------------------
// Properness analysis
// ---------------------------------------------------------------------------

// Returns the lexicographically smallest cross containing the set, or
// nullopt when the set is proper. The empty set counts as improper
// (contained in any cross), which keeps monotonicity clean: subsets of an
// improper set are improper with the same witness.
inline std::optional<Cross> is_improper(const CellSet& set) {
  const int n = set.n;
  for (int i = 0; i < n; ++i) {
    // Cells outside row i must share a single column j; cells in row i must
    // then avoid column j, which fails exactly when (i,j) is in the set.
    int forced_j = -1;
    bool consistent = true;
    for (const Cell& c : set.cells) {
      if (c.row == i) continue;
      if (forced_j == -1) {
        forced_j = c.col;
      } else if (forced_j != c.col) {
        consistent = false;
        break;
      }
    }
    if (!consistent) continue;
    if (forced_j >= 0) {
      if (!set.contains({i, forced_j})) return Cross{i, forced_j};
      continue;
    }
    // Everything sits in row i; any column without a cell of the set works.
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (const Cell& c : set.cells) used[static_cast<std::size_t>(c.col)] = 1;
    for (int j = 0; j < n; ++j)
      if (!used[static_cast<std::size_t>(j)]) return Cross{i, j};
  }
  return std::nullopt;
}

namespace detail {

inline bool in_one_line(const CellSet& set) {
  if (set.cells.empty()) return true;
  bool same_row = true, same_col = true;
  for (const Cell& c : set.cells) {
    same_row = same_row && c.row == set.cells.front().row;
    same_col = same_col && c.col == set.cells.front().col;
  }
  return same_row || same_col;
}

inline bool escapes(Cross k, Cell c) { return !k.covers(c); }

// First proper k-subset in lexicographic order, by direct enumeration.
// Only used for k <= 3, where the search is cubic at worst.
inline std::optional<CellSet> small_proper_subset(const CellSet& set, int k) {
  const int m = set.size();
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<Cell> pick;
    pick.reserve(static_cast<std::size_t>(k));
    for (int i : idx) pick.push_back(set.cells[static_cast<std::size_t>(i)]);
    CellSet candidate(set.n, std::move(pick));
    if (!is_improper(candidate)) return candidate;
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - k + pos) --pos;
    if (pos < 0) return std::nullopt;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
}

}  // namespace detail

// Finds a proper subset of exactly k cells, or nullopt when none exists.
//
// Properness is upward-closed, so it suffices to find a small proper core
// and pad it with arbitrary cells. For a proper set that is not contained
// in a single line, any two cells x, y in general position work as a seed:
// exactly two crosses cover both, and since the whole set is proper each of
// them is escaped by some cell, giving a proper core of at most 4 cells.
// The one exception is a set confined to a single row or column — it is
// proper only when it is the full line, and then its only proper subset is
// itself. k <= 3 is decided by direct enumeration (e.g. the minimum proper
// subset may have size 4, or 2 at order 2).
inline std::optional<CellSet> find_proper_subset(const CellSet& set, int k) {
  if (k < 0 || k > set.size()) throw std::invalid_argument("find_proper_subset: bad subset size");
  if (k == 0) return std::nullopt;  // the empty set is improper by convention
  if (is_improper(set)) return std::nullopt;
  if (detail::in_one_line(set)) {
    // A proper set inside one line is the entire line (n cells).
    if (k == set.size()) return set;
    return std::nullopt;
  }
  if (k <= 3) return detail::small_proper_subset(set, k);

  const auto& cs = set.cells;
  const int m = set.size();
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      Cell x = cs[static_cast<std::size_t>(a)], y = cs[static_cast<std::size_t>(b)];
      if (x.row == y.row || x.col == y.col) continue;
      const Cross k1{x.row, y.col}, k2{y.row, x.col};
      Cell z1{}, z2{};
      bool f1 = false, f2 = false;
      for (const Cell& c : cs) {
        if (!f1 && detail::escapes(k1, c)) { z1 = c; f1 = true; }
        if (!f2 && detail::escapes(k2, c)) { z2 = c; f2 = true; }
        if (f1 && f2) break;
      }
      if (!f1 || !f2) continue;  // cannot happen for a proper set; stay safe
      std::vector<Cell> core{x, y, z1, z2};
      std::sort(core.begin(), core.end());
      core.erase(std::unique(core.begin(), core.end()), core.end());
      for (const Cell& c : cs) {
        if (static_cast<int>(core.size()) >= k) break;
        if (std::find(core.begin(), core.end(), c) == core.end()) core.push_back(c);
      }
      return CellSet(set.n, std::move(core));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

struct FeasibilityWitness {
  struct Feasible {
    CellSet blue_subset;  // proper n-subset of the blue class
    CellSet red_subset;
  };
  struct TooFewCells {
    Color color;
    int count;
  };
  struct ImproperColorClass {
    Color color;
    Cross cross;
  };

  std::variant<Feasible, TooFewCells, ImproperColorClass> value;

  bool feasible() const { return std::holds_alternative<Feasible>(value); }
};

inline std::string describe(const FeasibilityWitness& w) {
  if (const auto* f = std::get_if<FeasibilityWitness::Feasible>(&w.value)) {
    (void)f;
    return "Feasible";
  }
  if (const auto* t = std::get_if<FeasibilityWitness::TooFewCells>(&w.value)) {
    return std::string("TooFewCells(") + color_name(t->color) + ", " + std::to_string(t->count) + ")";
  }
  const auto& im = std::get<FeasibilityWitness::ImproperColorClass>(w.value);
  return std::string("ImproperColorClass(") + color_name(im.color) + ", Cross(" +
         std::to_string(im.cross.i) + "," + std::to_string(im.cross.j) + "))";
}

// The partition condition: each color class must hold at least n cells and
// be proper. Blue is certified first; a witness subset pair is produced in
// the feasible case.
inline FeasibilityWitness check_feasibility(const BicoloredGrid& g) {
  for (Color color : {Color::Blue, Color::Red}) {
    CellSet cls = cells_of(g, color);
    if (cls.size() < g.n)
      return {FeasibilityWitness::TooFewCells{color, cls.size()}};
    if (auto cross = is_improper(cls))
      return {FeasibilityWitness::ImproperColorClass{color, *cross}};
  }
  auto blue = find_proper_subset(cells_of(g, Color::Blue), g.n);
  auto red = find_proper_subset(cells_of(g, Color::Red), g.n);
  if (!blue || !red)
    throw std::logic_error("proper class of size >= n without a proper n-subset");
  return {FeasibilityWitness::Feasible{std::move(*blue), std::move(*red)}};
}

// ---------------------------------------------------------------------------
// Partition verification
// ---------------------------------------------------------------------------

struct PartitionIssue {
  enum class Kind {
    DiagonalCount,  // number of diagonals != n
    BadCell,        // out-of-range cell
    NotADiagonal,   // wrong size or repeated row/column inside one diagonal
    Overlap,        // cell claimed by two diagonals
    Missing,        // cell covered by no diagonal
    Unbalanced,     // diagonal misses a color
  };
  Kind kind{};
  int diagonal = -1;
  int other_diagonal = -1;
  Cell cell{};
  Color missing_color = Color::Blue;
};

struct PartitionReport {
  std::vector<PartitionIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline std::string describe(const PartitionIssue& v) {
  using Kind = PartitionIssue::Kind;
  switch (v.kind) {
    case Kind::DiagonalCount:
      return "wrong number of diagonals";
    case Kind::BadCell:
      return "diagonal " + std::to_string(v.diagonal) + " has out-of-range cell (" +
             std::to_string(v.cell.row) + "," + std::to_string(v.cell.col) + ")";
    case Kind::NotADiagonal:
      return "entry " + std::to_string(v.diagonal) + " is not a diagonal";
    case Kind::Overlap:
      return "cell (" + std::to_string(v.cell.row) + "," + std::to_string(v.cell.col) +
             ") appears in diagonals " + std::to_string(v.other_diagonal) + " and " +
             std::to_string(v.diagonal);
    case Kind::Missing:
      return "cell (" + std::to_string(v.cell.row) + "," + std::to_string(v.cell.col) +
             ") is not covered";
    case Kind::Unbalanced:
      return "diagonal " + std::to_string(v.diagonal) + " missing " + color_name(v.missing_color);
  }
  return "unknown issue";
}

inline PartitionReport verify_partition(const BicoloredGrid& g, const DiagonalPartition& p) {
  PartitionReport report;
  const int n = g.n;
  if (p.n != n || static_cast<int>(p.diagonals.size()) != n)
    report.issues.push_back({PartitionIssue::Kind::DiagonalCount});

  std::vector<int> owner(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  for (int d = 0; d < static_cast<int>(p.diagonals.size()); ++d) {
    const Diagonal& diag = p.diagonals[static_cast<std::size_t>(d)];
    bool in_range = true;
    for (const Cell& c : diag.cells) {
      if (c.row < 0 || c.row >= n || c.col < 0 || c.col >= n) {
        report.issues.push_back({PartitionIssue::Kind::BadCell, d, -1, c});
        in_range = false;
      }
    }
    if (!in_range) continue;
    if (!is_valid_diagonal(n, diag))
      report.issues.push_back({PartitionIssue::Kind::NotADiagonal, d});
    bool has_blue = false, has_red = false;
    for (const Cell& c : diag.cells) {
      int& slot = owner[g.index(c.row, c.col)];
      if (slot >= 0 && slot != d)
        report.issues.push_back({PartitionIssue::Kind::Overlap, d, slot, c});
      else
        slot = d;
      (g.at(c.row, c.col) == Color::Blue ? has_blue : has_red) = true;
    }
    if (!has_blue)
      report.issues.push_back({PartitionIssue::Kind::Unbalanced, d, -1, {}, Color::Blue});
    if (!has_red)
      report.issues.push_back({PartitionIssue::Kind::Unbalanced, d, -1, {}, Color::Red});
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (owner[g.index(r, c)] < 0)
        report.issues.push_back({PartitionIssue::Kind::Missing, -1, -1, {r, c}});
  return report;
}

// ---------------------------------------------------------------------------
// K_{n,n} adapter: cells are edges, diagonals are perfect matchings, the two
// colors become edge colors 1 and 2.
// ---------------------------------------------------------------------------

struct BalancedMatchingCover {
  int n = 0;
  std::vector<int> edge_color;  // n*n row-major, 1 = Blue, 2 = Red
  std::vector<std::vector<std::pair<int, int>>> matchings;
};

inline BalancedMatchingCover to_balanced_matchings(const BicoloredGrid& g, const DiagonalPartition& p) {
  if (p.n != g.n || static_cast<int>(p.diagonals.size()) != g.n)
    throw std::invalid_argument("to_balanced_matchings: not a partition of the grid");
  BalancedMatchingCover out;
  out.n = g.n;
  out.edge_color.resize(g.colors.size());
  for (std::size_t i = 0; i < g.colors.size(); ++i)
    out.edge_color[i] = g.colors[i] == Color::Blue ? 1 : 2;
  for (const Diagonal& d : p.diagonals) {
    if (!is_valid_diagonal(g.n, d))
      throw std::invalid_argument("to_balanced_matchings: entry is not a diagonal");
    std::vector<std::pair<int, int>> matching;
    matching.reserve(d.cells.size());
    for (const Cell& c : d.cells) matching.emplace_back(c.row, c.col);
    out.matchings.push_back(std::move(matching));
  }
  return out;
}

inline BicoloredGrid from_edge_coloring(int n, const std::vector<int>& edge_color) {
  if (static_cast<int>(edge_color.size()) != n * n)
    throw std::invalid_argument("from_edge_coloring: need n*n edge colors");
  BicoloredGrid g(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int f = edge_color[g.index(r, c)];
      if (f != 1 && f != 2) throw std::invalid_argument("from_edge_coloring: colors must be 1 or 2");
      g.set(r, c, f == 1 ? Color::Blue : Color::Red);
    }
  return g;
}

}  // namespace baldiag
