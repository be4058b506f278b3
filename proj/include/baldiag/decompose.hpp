#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "baldiag/grid.hpp"
#include "baldiag/latin.hpp"
#include "baldiag/matching.hpp"
#include "baldiag/oracle.hpp"
#include "baldiag/rng.hpp"
#include "baldiag/ryser.hpp"

namespace baldiag {

// Sub-rectangle spanned by arbitrary (not necessarily contiguous) row and
// column subsets. Kept sorted.
struct Rect {
  std::vector<int> rows;
  std::vector<int> cols;

  int row_count() const { return static_cast<int>(rows.size()); }
  int col_count() const { return static_cast<int>(cols.size()); }
  int cell_count() const { return row_count() * col_count(); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline int count_color_in_rect(const BicoloredGrid& g, const Rect& r, Color color) {
  int total = 0;
  for (int row : r.rows)
    for (int col : r.cols)
      if (g.at(row, col) == color) ++total;
  return total;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

enum class PipelineStage {
  Start,
  Feasibility,
  SmallOrderOracle,
  FirstCover,
  PairSearch,
  ExternalCell,
  CycleGraphStage,
  Subgraph,
  BlueRect,
  WindowWalk,
  Fill,
  CornerCompletion,
  Done,
};

struct WalkStats {
  int steps = 0;
  int restarts = 0;
  bool direct_search = false;
  std::optional<Rect> blue_window;  // last window with >= n blue of the winning pair
  std::optional<Rect> red_window;   // its successor with >= n red
};

struct PipelineTrace {
  int n = 0;
  std::uint64_t seed = 0;
  bool colors_swapped = false;
  bool early_done = false;
  PipelineStage stage = PipelineStage::Start;
  std::optional<Diagonal> first_diagonal;   // all-blue diagonal of the first cover
  std::optional<Diagonal> second_diagonal;  // all-blue symbol diagonal after re-embedding
  std::optional<Cell> shared_cell;
  std::vector<int> window_columns;
  std::optional<Cell> external_cell;
  std::vector<int> cycle_sizes;             // edge count per cycle component
  std::vector<Cell> subgraph_edges;
  int subgraph_vertex_count = 0;
  std::optional<Rect> seed_rect;
  WalkStats walk;
  std::optional<Rect> balanced_rect;
  std::vector<int> filled_block;            // p×q row-major, symbols 1..n
  std::vector<Cell> symbol_blue_cells;      // cell of symbol k+1 in the blue pick
  std::vector<Cell> symbol_red_cells;
  std::string note;
};

// Internal invariant broken mid-pipeline; carries the trace for bug reports.
struct PipelineError : std::runtime_error {
  PipelineTrace trace;
  explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

// Precondition failure of cover_with_color, carrying the color certificate.
struct CoverError : std::invalid_argument {
  FeasibilityWitness witness;
  explicit CoverError(FeasibilityWitness w)
      : std::invalid_argument(describe(w)), witness(std::move(w)) {}
};

// ---------------------------------------------------------------------------
// Covering partitions
// ---------------------------------------------------------------------------

// Index of the first diagonal whose cells all carry `color`, or -1.
inline int first_monochromatic(const BicoloredGrid& g, const DiagonalPartition& p, Color color) {
  for (int i = 0; i < static_cast<int>(p.diagonals.size()); ++i) {
    bool mono = true;
    for (const Cell& c : p.diagonals[static_cast<std::size_t>(i)].cells)
      if (g.at(c.row, c.col) != color) {
        mono = false;
        break;
      }
    if (mono) return i;
  }
  return -1;
}

namespace detail {

inline DiagonalPartition complete_embedding(const CellSet& cells, const char* stage_name) {
  PartialLatinSquare pls = embed_distinct_symbols(cells);
  CompletionResult res = complete(pls);
  if (res.status == CompletionResult::Status::BudgetExceeded)
    throw PipelineError(std::string(stage_name) + ": node budget exceeded on a completable embedding");
  if (!res.completed())
    throw PipelineError(std::string(stage_name) + ": embedding unexpectedly not completable");
  return partition_from_symbol_diagonals(cells.n, symbol_diagonals(*res.square));
}

}  // namespace detail

// Partition of the grid into diagonals, each containing a cell of `color`.
// Embeds distinct symbols on a proper n-subset of the color class and
// completes; every symbol diagonal then meets the embedded set.
inline DiagonalPartition cover_with_color(const BicoloredGrid& grid, Color color) {
  CellSet cls = cells_of(grid, color);
  if (cls.size() < grid.n)
    throw CoverError({FeasibilityWitness::TooFewCells{color, cls.size()}});
  if (auto cross = is_improper(cls))
    throw CoverError({FeasibilityWitness::ImproperColorClass{color, *cross}});
  auto subset = find_proper_subset(cls, grid.n);
  if (!subset) throw PipelineError("cover_with_color: proper class without a proper n-subset");
  return detail::complete_embedding(*subset, "cover_with_color");
}

struct DiagonalPair {
  Diagonal first;   // carries distinct symbols in the construction
  Diagonal second;  // constant-symbol diagonal
  Cell shared;      // the single common cell
};

// First step of the construction: either the cover already balances every
// diagonal (done), or it contains a fully blue diagonal T. Re-embedding
// distinct symbols on T and completing yields a second partition whose
// diagonals each meet T; if one of those is fully blue as well, the two
// diagonals intersect in exactly one cell because one carries distinct
// symbols and the other a constant symbol.
//
// Precondition: the blue class is feasible and weakly smaller than red.
inline std::variant<DiagonalPartition, DiagonalPair> find_blue_pair(const BicoloredGrid& grid) {
  DiagonalPartition cover = cover_with_color(grid, Color::Blue);
  int t1_index = first_monochromatic(grid, cover, Color::Blue);
  if (t1_index < 0) return cover;  // every diagonal has blue and red

  Diagonal t1 = cover.diagonals[static_cast<std::size_t>(t1_index)];
  CellSet t1_cells(grid.n, t1.cells);
  DiagonalPartition second = detail::complete_embedding(t1_cells, "find_blue_pair");
  int t2_index = first_monochromatic(grid, second, Color::Blue);
  if (t2_index < 0) return second;

  Diagonal t2 = second.diagonals[static_cast<std::size_t>(t2_index)];
  std::vector<Cell> common;
  CellSet t2_cells(grid.n, t2.cells);
  for (const Cell& c : t1.cells)
    if (t2_cells.contains(c)) common.push_back(c);
  if (common.size() != 1)
    throw PipelineError("find_blue_pair: diagonals share " + std::to_string(common.size()) +
                        " cells instead of one");
  return DiagonalPair{std::move(t1), std::move(t2), common.front()};
}

// The ceil(n/2) columns used to cut a fresh n-cell window out of the two
// diagonals: column j carries one cell of their union, all others two, so
// excluding j for even n (including it for odd n) gives exactly n cells.
inline std::vector<int> choose_window_columns(int n, int j) {
  const int want = (n + 1) / 2;
  std::vector<int> cols;
  if (n % 2 == 1) cols.push_back(j);
  for (int c = 0; c < n && static_cast<int>(cols.size()) < want; ++c) {
    if (c == j) continue;
    cols.push_back(c);
  }
  std::sort(cols.begin(), cols.end());
  return cols;
}

// Second step: finds a blue cell outside both diagonals that avoids the
// shared cell's row and column, or finishes early with a balanced
// partition. Requires n >= 7 for the counting argument to leave at least
// one candidate.
inline std::variant<DiagonalPartition, Cell> find_external_blue_cell(const BicoloredGrid& grid,
                                                                     const DiagonalPair& pair) {
  const int n = grid.n;
  const int i = pair.shared.row;
  const int j = pair.shared.col;
  std::vector<int> cols = choose_window_columns(n, j);
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  for (int c : cols) chosen[static_cast<std::size_t>(c)] = 1;

  std::vector<Cell> union_cells = pair.first.cells;
  union_cells.insert(union_cells.end(), pair.second.cells.begin(), pair.second.cells.end());
  CellSet union_set(n, union_cells);

  std::vector<Cell> window;
  for (const Cell& c : union_set.cells)
    if (chosen[static_cast<std::size_t>(c.col)]) window.push_back(c);
  if (static_cast<int>(window.size()) != n)
    throw PipelineError("find_external_blue_cell: window has " + std::to_string(window.size()) +
                        " cells instead of n");

  DiagonalPartition part = detail::complete_embedding(CellSet(n, window), "find_external_blue_cell");
  int t3_index = first_monochromatic(grid, part, Color::Blue);
  if (t3_index < 0) return part;

  const Diagonal& t3 = part.diagonals[static_cast<std::size_t>(t3_index)];
  std::vector<Cell> candidates;
  for (const Cell& c : t3.cells) {
    if (!chosen[static_cast<std::size_t>(c.col)]) continue;
    if (c.row == i || c.col == j) continue;
    if (union_set.contains(c)) continue;
    candidates.push_back(c);
  }
  if (candidates.empty())
    throw PipelineError("find_external_blue_cell: no candidate outside the diagonals (needs n >= 7)");
  return *std::min_element(candidates.begin(), candidates.end());
}

// ---------------------------------------------------------------------------
// Cycle graph of the two diagonals
// ---------------------------------------------------------------------------

// Rows and columns as the two sides of K_{n,n}; the edges are the cells of
// (T1 ∪ T2) \ {shared}. Every vertex has degree 0 or 2 and the components
// are simple even cycles of length >= 4.
struct CycleGraph {
  struct Cycle {
    std::vector<int> vertices;    // closed walk, edge k joins vertices k, k+1 (mod size)
    std::vector<Cell> edge_cells;
  };
  int n = 0;
  std::vector<Cell> edges;
  std::vector<Cycle> cycles;

  int row_vertex(int r) const { return r; }
  int col_vertex(int c) const { return n + c; }
};

inline CycleGraph build_cycle_graph(int n, const DiagonalPair& pair) {
  std::vector<Cell> all = pair.first.cells;
  all.insert(all.end(), pair.second.cells.begin(), pair.second.cells.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (static_cast<int>(all.size()) != 2 * n - 1)
    throw std::invalid_argument("build_cycle_graph: diagonals must share exactly one cell");
  std::erase(all, pair.shared);

  CycleGraph g;
  g.n = n;
  g.edges = all;
  std::vector<std::vector<std::pair<int, Cell>>> adj(static_cast<std::size_t>(2 * n));
  for (const Cell& c : all) {
    adj[static_cast<std::size_t>(c.row)].push_back({n + c.col, c});
    adj[static_cast<std::size_t>(n + c.col)].push_back({c.row, c});
  }
  for (int v = 0; v < 2 * n; ++v) {
    auto& lst = adj[static_cast<std::size_t>(v)];
    std::sort(lst.begin(), lst.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t deg = lst.size();
    bool isolated_expected = v == pair.shared.row || v == n + pair.shared.col;
    if (deg != (isolated_expected ? 0u : 2u))
      throw PipelineError("build_cycle_graph: vertex degree " + std::to_string(deg) +
                          " breaks the two-diagonal structure");
  }

  std::vector<char> visited(static_cast<std::size_t>(2 * n), 0);
  for (int v = 0; v < 2 * n; ++v) {
    if (visited[static_cast<std::size_t>(v)] || adj[static_cast<std::size_t>(v)].empty()) continue;
    CycleGraph::Cycle cyc;
    int prev = -1;
    int cur = v;
    do {
      visited[static_cast<std::size_t>(cur)] = 1;
      cyc.vertices.push_back(cur);
      const auto& lst = adj[static_cast<std::size_t>(cur)];
      // start toward the smaller neighbor, then keep moving forward; the
      // graph is simple so the two neighbors are distinct
      std::pair<int, Cell> step = (prev >= 0 && lst[0].first == prev) ? lst[1] : lst[0];
      cyc.edge_cells.push_back(step.second);
      prev = cur;
      cur = step.first;
    } while (cur != v);
    if (cyc.vertices.size() < 4 || cyc.vertices.size() % 2 != 0)
      throw PipelineError("build_cycle_graph: component is not an even cycle of length >= 4");
    g.cycles.push_back(std::move(cyc));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Cycles-plus-path subgraph through two vertices
// ---------------------------------------------------------------------------

// A union of whole cycles plus at most one path, with exactly n-1 edges and
// n-1 or n vertices, containing both endpoints of the external cell's edge.
struct CyclePathSubgraph {
  std::vector<int> cycle_indices;
  std::vector<Cell> path_edges;
  std::vector<int> path_vertices;  // may be a single vertex (zero-edge path)
  std::vector<Cell> edges;
  std::vector<int> vertices;
};

namespace detail {

// Path of `edge_count` edges inside a cycle, starting at position `start`
// and walking forward.
inline void cycle_window(const CycleGraph::Cycle& cyc, int start, int edge_count,
                         std::vector<int>& path_vertices, std::vector<Cell>& path_edges) {
  const int m = static_cast<int>(cyc.vertices.size());
  path_vertices.push_back(cyc.vertices[static_cast<std::size_t>(start)]);
  for (int k = 0; k < edge_count; ++k) {
    int pos = (start + k) % m;
    path_edges.push_back(cyc.edge_cells[static_cast<std::size_t>(pos)]);
    path_vertices.push_back(cyc.vertices[static_cast<std::size_t>((pos + 1) % m)]);
  }
}

inline int position_in_cycle(const CycleGraph::Cycle& cyc, int vertex) {
  for (std::size_t k = 0; k < cyc.vertices.size(); ++k)
    if (cyc.vertices[k] == vertex) return static_cast<int>(k);
  return -1;
}

}  // namespace detail

inline CyclePathSubgraph find_cycle_path_subgraph(const CycleGraph& g, int u, int v) {
  const int n = g.n;
  const int target = n - 1;
  int cu = -1, cv = -1;
  for (std::size_t k = 0; k < g.cycles.size(); ++k) {
    if (detail::position_in_cycle(g.cycles[k], u) >= 0) cu = static_cast<int>(k);
    if (detail::position_in_cycle(g.cycles[k], v) >= 0) cv = static_cast<int>(k);
  }
  if (cu < 0 || cv < 0)
    throw std::invalid_argument("find_cycle_path_subgraph: endpoint is isolated");

  CyclePathSubgraph h;
  auto add_filler = [&](int budget) {
    // whole cycles in index order; a partial one becomes the single path
    for (std::size_t k = 0; k < g.cycles.size() && budget > 0; ++k) {
      if (std::find(h.cycle_indices.begin(), h.cycle_indices.end(), static_cast<int>(k)) !=
          h.cycle_indices.end())
        continue;
      int size = static_cast<int>(g.cycles[k].vertices.size());
      if (size <= budget) {
        h.cycle_indices.push_back(static_cast<int>(k));
        budget -= size;
      } else {
        detail::cycle_window(g.cycles[k], 0, budget, h.path_vertices, h.path_edges);
        budget = 0;
      }
    }
    if (budget != 0) throw PipelineError("find_cycle_path_subgraph: filler ran out of edges");
  };

  if (cu == cv) {
    const auto& cyc = g.cycles[static_cast<std::size_t>(cu)];
    const int m = static_cast<int>(cyc.vertices.size());
    if (m <= target) {
      h.cycle_indices.push_back(cu);
      add_filler(target - m);
    } else {
      // path of exactly n-1 edges containing both endpoints (m > n-1, so the
      // shorter arc between them has at most n-1 edges and extending forward
      // stays simple)
      int pu = detail::position_in_cycle(cyc, u);
      int pv = detail::position_in_cycle(cyc, v);
      int fwd = ((pv - pu) % m + m) % m;
      int bwd = m - fwd;
      int start = fwd <= bwd ? pu : pv;
      detail::cycle_window(cyc, start, target, h.path_vertices, h.path_edges);
    }
  } else {
    int small = cu, big = cv;
    int big_anchor = v;
    if (static_cast<int>(g.cycles[static_cast<std::size_t>(small)].vertices.size()) > target) {
      std::swap(small, big);
      big_anchor = u;
    }
    const int msmall = static_cast<int>(g.cycles[static_cast<std::size_t>(small)].vertices.size());
    const int mbig = static_cast<int>(g.cycles[static_cast<std::size_t>(big)].vertices.size());
    if (msmall > target)
      throw PipelineError("find_cycle_path_subgraph: both cycles exceed n-1 edges");
    if (msmall + mbig > target) {
      h.cycle_indices.push_back(small);
      const auto& cyc = g.cycles[static_cast<std::size_t>(big)];
      int t = target - msmall;
      if (t == 0) {
        h.path_vertices.push_back(big_anchor);  // zero-edge path
      } else {
        detail::cycle_window(cyc, detail::position_in_cycle(cyc, big_anchor), t,
                             h.path_vertices, h.path_edges);
      }
    } else {
      h.cycle_indices.push_back(small);
      h.cycle_indices.push_back(big);
      add_filler(target - msmall - mbig);
    }
  }

  std::sort(h.cycle_indices.begin(), h.cycle_indices.end());
  for (int k : h.cycle_indices) {
    const auto& cyc = g.cycles[static_cast<std::size_t>(k)];
    h.edges.insert(h.edges.end(), cyc.edge_cells.begin(), cyc.edge_cells.end());
    h.vertices.insert(h.vertices.end(), cyc.vertices.begin(), cyc.vertices.end());
  }
  h.edges.insert(h.edges.end(), h.path_edges.begin(), h.path_edges.end());
  h.vertices.insert(h.vertices.end(), h.path_vertices.begin(), h.path_vertices.end());
  std::sort(h.edges.begin(), h.edges.end());
  h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
  std::sort(h.vertices.begin(), h.vertices.end());
  h.vertices.erase(std::unique(h.vertices.begin(), h.vertices.end()), h.vertices.end());

  const int vcount = static_cast<int>(h.vertices.size());
  if (static_cast<int>(h.edges.size()) != target || vcount < target || vcount > target + 1 ||
      !std::binary_search(h.vertices.begin(), h.vertices.end(), u) ||
      !std::binary_search(h.vertices.begin(), h.vertices.end(), v))
    throw PipelineError("find_cycle_path_subgraph: shape invariant broken");
  return h;
}

// ---------------------------------------------------------------------------
// Rectangle machinery
// ---------------------------------------------------------------------------

// The rows and columns spanned by the subgraph plus the external cell give
// an s×t rectangle with s+t in {n-1, n} and |s-t| <= 1 holding at least n
// blue cells; a fresh row or column restores s+t = n when needed.
inline Rect build_blue_rect(const BicoloredGrid& grid, const CyclePathSubgraph& h, Cell external) {
  const int n = grid.n;
  Rect r;
  for (int v : h.vertices) {
    if (v < n)
      r.rows.push_back(v);
    else
      r.cols.push_back(v - n);
  }
  if (!std::binary_search(h.vertices.begin(), h.vertices.end(), external.row) ||
      !std::binary_search(h.vertices.begin(), h.vertices.end(), n + external.col))
    throw std::invalid_argument("build_blue_rect: external cell endpoints not in the subgraph");

  int s = r.row_count(), t = r.col_count();
  if (s + t == n - 1) {
    bool add_row = s <= t;  // restore |s-t| <= 1, rows preferred on a tie
    auto& side = add_row ? r.rows : r.cols;
    for (int idx = 0; idx < n; ++idx)
      if (!std::binary_search(side.begin(), side.end(), idx)) {
        side.insert(std::lower_bound(side.begin(), side.end(), idx), idx);
        break;
      }
    s = r.row_count();
    t = r.col_count();
  }
  if (s + t != n || std::abs(s - t) > 1)
    throw PipelineError("build_blue_rect: rectangle arithmetic broken (" + std::to_string(s) +
                        "x" + std::to_string(t) + ")");
  if (count_color_in_rect(grid, r, Color::Blue) < n)
    throw PipelineError("build_blue_rect: fewer than n blue cells in the rectangle");
  return r;
}

namespace detail {

struct WindowCounts {
  std::vector<int> red_by_row;  // red cells of each row restricted to the window columns
  std::vector<int> red_by_col;  // red cells of each column restricted to the window rows
};

inline WindowCounts window_counts(const BicoloredGrid& g, const Rect& w) {
  WindowCounts wc;
  wc.red_by_row.assign(static_cast<std::size_t>(g.n), 0);
  wc.red_by_col.assign(static_cast<std::size_t>(g.n), 0);
  for (int r = 0; r < g.n; ++r)
    for (int c : w.cols)
      if (g.at(r, c) == Color::Red) ++wc.red_by_row[static_cast<std::size_t>(r)];
  for (int c = 0; c < g.n; ++c)
    for (int r : w.rows)
      if (g.at(r, c) == Color::Red) ++wc.red_by_col[static_cast<std::size_t>(c)];
  return wc;
}

struct WindowMove {
  bool row_move = true;
  int out = 0;
  int in = 0;
  int delta = 0;
};

inline std::vector<WindowMove> improving_moves(const BicoloredGrid& g, const Rect& w,
                                               bool cols_first) {
  WindowCounts wc = window_counts(g, w);
  std::vector<WindowMove> moves;
  auto scan_rows = [&] {
    for (int out : w.rows)
      for (int in = 0; in < g.n; ++in) {
        if (std::binary_search(w.rows.begin(), w.rows.end(), in)) continue;
        int delta = wc.red_by_row[static_cast<std::size_t>(in)] -
                    wc.red_by_row[static_cast<std::size_t>(out)];
        if (delta > 0) moves.push_back({true, out, in, delta});
      }
  };
  auto scan_cols = [&] {
    for (int out : w.cols)
      for (int in = 0; in < g.n; ++in) {
        if (std::binary_search(w.cols.begin(), w.cols.end(), in)) continue;
        int delta = wc.red_by_col[static_cast<std::size_t>(in)] -
                    wc.red_by_col[static_cast<std::size_t>(out)];
        if (delta > 0) moves.push_back({false, out, in, delta});
      }
  };
  if (cols_first) {
    scan_cols();
    scan_rows();
  } else {
    scan_rows();
    scan_cols();
  }
  return moves;
}

inline Rect apply_move(const Rect& w, const WindowMove& m) {
  Rect out = w;
  auto& side = m.row_move ? out.rows : out.cols;
  std::erase(side, m.out);
  side.insert(std::lower_bound(side.begin(), side.end(), m.in), m.in);
  return out;
}

inline Rect union_rects(const Rect& a, const Rect& b) {
  Rect out;
  std::set_union(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(),
                 std::back_inserter(out.rows));
  std::set_union(a.cols.begin(), a.cols.end(), b.cols.begin(), b.cols.end(),
                 std::back_inserter(out.cols));
  return out;
}

// Both counts already reach n: grow the window by one fresh row or column
// so the side sum becomes n+1.
inline Rect augment_fresh(const Rect& w, int n) {
  Rect out = w;
  bool add_row = w.row_count() <= w.col_count();
  auto& side = add_row ? out.rows : out.cols;
  for (int idx = 0; idx < n; ++idx)
    if (!std::binary_search(side.begin(), side.end(), idx)) {
      side.insert(std::lower_bound(side.begin(), side.end(), idx), idx);
      return out;
    }
  throw PipelineError("slide_to_balanced_rect: no fresh line to add");
}

// One greedy walk. Deterministic when rng is null (steepest move, first in
// enumeration order on ties); otherwise a uniform choice among improving
// moves. Returns the balanced rectangle or nullopt when this walk fails.
inline std::optional<Rect> walk_once(const BicoloredGrid& g, Rect cur, int n, bool cols_first,
                                     Rng* rng, WalkStats& stats) {
  std::optional<Rect> prev;
  const int cap = 4 * n * n + 8;
  for (int step = 0; step <= cap; ++step) {
    const int size = cur.cell_count();
    const int red = count_color_in_rect(g, cur, Color::Red);
    const int blue = size - red;
    if (red >= n) {
      if (prev) {
        int prev_blue = prev->cell_count() - count_color_in_rect(g, *prev, Color::Red);
        if (prev_blue >= n) {
          stats.blue_window = *prev;
          stats.red_window = cur;
          return union_rects(*prev, cur);
        }
      }
      if (blue >= n) {
        stats.blue_window = cur;
        stats.red_window = cur;
        return augment_fresh(cur, n);
      }
      return std::nullopt;  // crossed into red territory without a blue-rich edge
    }
    std::vector<WindowMove> moves = improving_moves(g, cur, cols_first);
    if (moves.empty()) return std::nullopt;  // stalled on a plateau
    const WindowMove* pick = nullptr;
    if (rng) {
      pick = &moves[static_cast<std::size_t>(rng->below(moves.size()))];
    } else {
      pick = &moves.front();
      for (const WindowMove& m : moves)
        if (m.delta > pick->delta) pick = &m;
    }
    prev = cur;
    cur = apply_move(cur, *pick);
    ++stats.steps;
  }
  return std::nullopt;
}

}  // namespace detail

// Slides an s×t window from the blue-rich seed rectangle toward red-rich
// territory, exchanging one row or one column per step, and returns the
// union of the adjacent pair straddling the blue/red boundary: a p×q
// rectangle with p+q = n+1, |p-q| <= 2 and at least n cells of each color.
//
// Exact ties can let the walk step across the boundary without a valid
// adjacent pair (possible at n = 7, where a window can hold 6 cells of each
// color); the fallback ladder is: opposite enumeration order, seeded
// randomized walks, then direct randomized search for any valid rectangle.
inline Rect slide_to_balanced_rect(const BicoloredGrid& grid, const Rect& seed,
                                   std::uint64_t rng_seed = 0, WalkStats* stats_out = nullptr) {
  const int n = grid.n;
  if (count_color_in_rect(grid, seed, Color::Blue) < n)
    throw std::invalid_argument("slide_to_balanced_rect: seed rectangle lacks n blue cells");
  WalkStats stats;
  auto finish = [&](const Rect& r) {
    const int blue = count_color_in_rect(grid, r, Color::Blue);
    const int red = count_color_in_rect(grid, r, Color::Red);
    const int p = r.row_count(), q = r.col_count();
    if (p + q != n + 1 || std::abs(p - q) > 2 || blue < n || red < n)
      throw PipelineError("slide_to_balanced_rect: balanced rectangle conditions broken");
    if (stats_out) *stats_out = stats;
    return r;
  };

  for (bool cols_first : {false, true}) {
    if (auto r = detail::walk_once(grid, seed, n, cols_first, nullptr, stats)) return finish(*r);
  }
  Rng rng(rng_seed ^ 0x9e3779b97f4a7c15ull);
  for (int restart = 0; restart < 64; ++restart) {
    ++stats.restarts;
    if (auto r = detail::walk_once(grid, seed, n, false, &rng, stats)) return finish(*r);
  }
  // last resort: sample rectangles of the target shape directly
  stats.direct_search = true;
  std::vector<int> valid_p;
  for (int p = 1; p <= n; ++p) {
    int q = n + 1 - p;
    if (q >= 1 && q <= n && std::abs(p - q) <= 2) valid_p.push_back(p);
  }
  for (int attempt = 0; attempt < 50000; ++attempt) {
    int p = valid_p[static_cast<std::size_t>(rng.below(valid_p.size()))];
    int q = n + 1 - p;
    Rect r;
    r.rows = rng.sample(n, p);
    r.cols = rng.sample(n, q);
    std::sort(r.rows.begin(), r.rows.end());
    std::sort(r.cols.begin(), r.cols.end());
    if (count_color_in_rect(grid, r, Color::Blue) >= n &&
        count_color_in_rect(grid, r, Color::Red) >= n)
      return finish(r);
  }
  throw PipelineError("slide_to_balanced_rect: all fallbacks exhausted");
}

// ---------------------------------------------------------------------------
// Balanced fill of the rectangle
// ---------------------------------------------------------------------------

struct BalancedFill {
  Rect rect;
  std::vector<int> block;          // p×q row-major, symbols 1..n, fully filled
  std::vector<Cell> blue_cells;    // blue_cells[k] holds symbol k+1 (grid coordinates)
  std::vector<Cell> red_cells;
};

// Picks n blue and n red cells of the rectangle, pairs them so partners
// never share a row or column (the pairing graph satisfies Hall's
// condition), writes symbol k into pair k, then fills the rest greedily:
// every cell of the rectangle has (p-1)+(q-1) = n-1 neighbors in it, so a
// symbol is always available.
inline BalancedFill balanced_fill(const BicoloredGrid& grid, const Rect& rect) {
  const int n = grid.n;
  const int p = rect.row_count(), q = rect.col_count();
  std::vector<Cell> blue, red;
  for (int r : rect.rows)
    for (int c : rect.cols) {
      auto& bucket = grid.at(r, c) == Color::Blue ? blue : red;
      if (static_cast<int>(bucket.size()) < n) bucket.push_back({r, c});
    }
  if (static_cast<int>(blue.size()) < n || static_cast<int>(red.size()) < n)
    throw std::invalid_argument("balanced_fill: rectangle lacks n cells of each color");

  BipartiteGraph g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (blue[static_cast<std::size_t>(a)].row != red[static_cast<std::size_t>(b)].row &&
          blue[static_cast<std::size_t>(a)].col != red[static_cast<std::size_t>(b)].col)
        g.add_edge(a, b);
  Matching m = max_matching(g);
  if (m.size() != n)
    throw PipelineError("balanced_fill: pairing matching is not perfect");

  BalancedFill out;
  out.rect = rect;
  out.block.assign(static_cast<std::size_t>(p) * static_cast<std::size_t>(q), 0);
  out.blue_cells.resize(static_cast<std::size_t>(n));
  out.red_cells.resize(static_cast<std::size_t>(n));
  auto row_pos = [&](int r) {
    return static_cast<int>(std::lower_bound(rect.rows.begin(), rect.rows.end(), r) -
                            rect.rows.begin());
  };
  auto col_pos = [&](int c) {
    return static_cast<int>(std::lower_bound(rect.cols.begin(), rect.cols.end(), c) -
                            rect.cols.begin());
  };
  auto put = [&](Cell cell, int symbol) {
    out.block[static_cast<std::size_t>(row_pos(cell.row)) * static_cast<std::size_t>(q) +
              static_cast<std::size_t>(col_pos(cell.col))] = symbol;
  };
  for (const auto& [a, b] : m.pairs) {
    put(blue[static_cast<std::size_t>(a)], a + 1);
    put(red[static_cast<std::size_t>(b)], a + 1);
    out.blue_cells[static_cast<std::size_t>(a)] = blue[static_cast<std::size_t>(a)];
    out.red_cells[static_cast<std::size_t>(a)] = red[static_cast<std::size_t>(b)];
  }

  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      std::size_t idx = static_cast<std::size_t>(a) * static_cast<std::size_t>(q) +
                        static_cast<std::size_t>(b);
      if (out.block[idx]) continue;
      std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
      for (int bb = 0; bb < q; ++bb)
        used[static_cast<std::size_t>(
            out.block[static_cast<std::size_t>(a) * static_cast<std::size_t>(q) +
                      static_cast<std::size_t>(bb)])] = 1;
      for (int aa = 0; aa < p; ++aa)
        used[static_cast<std::size_t>(
            out.block[static_cast<std::size_t>(aa) * static_cast<std::size_t>(q) +
                      static_cast<std::size_t>(b)])] = 1;
      int symbol = 0;
      for (int s = 1; s <= n; ++s)
        if (!used[static_cast<std::size_t>(s)]) {
          symbol = s;
          break;
        }
      if (!symbol) throw PipelineError("balanced_fill: greedy fill exhausted the symbols");
      out.block[idx] = symbol;
    }

  std::vector<int> counts(static_cast<std::size_t>(n + 1), 0);
  for (int s : out.block) ++counts[static_cast<std::size_t>(s)];
  for (int s = 1; s <= n; ++s)
    if (counts[static_cast<std::size_t>(s)] < 2)
      throw PipelineError("balanced_fill: symbol appears fewer than twice");
  return out;
}

// ---------------------------------------------------------------------------
// The full decomposition
// ---------------------------------------------------------------------------

// Returned when the order is below 7, the condition holds, and the
// exhaustive search still finds nothing (the theorem is silent there).
struct NoDecomposition {};

using DecomposeResult = std::variant<DiagonalPartition, FeasibilityWitness, NoDecomposition>;

inline bool decomposed(const DecomposeResult& r) {
  return std::holds_alternative<DiagonalPartition>(r);
}

namespace detail {

inline void require_valid(const BicoloredGrid& grid, const DiagonalPartition& p,
                          const char* where) {
  PartitionReport rep = verify_partition(grid, p);
  if (!rep.ok())
    throw PipelineError(std::string(where) + ": produced partition fails verification (" +
                        describe(rep.issues.front()) + ")");
}

}  // namespace detail

// Decides and constructs: a balanced-diagonal partition, an infeasibility
// certificate, or (below order 7 only) a proof that no partition exists.
// Orders below 7 go to the exhaustive oracle; otherwise the color roles are
// swapped so blue is the weakly smaller class and the constructive pipeline
// runs. Deterministic for fixed (grid, seed).
inline DecomposeResult decompose(const BicoloredGrid& grid, std::uint64_t seed = 0,
                                 PipelineTrace* trace_out = nullptr) {
  PipelineTrace trace;
  trace.n = grid.n;
  trace.seed = seed;
  auto deliver = [&](DecomposeResult r) {
    if (trace_out) *trace_out = trace;
    return r;
  };

  try {
    trace.stage = PipelineStage::Feasibility;
    FeasibilityWitness witness = check_feasibility(grid);
    if (!witness.feasible()) return deliver(witness);

    if (grid.n < 7) {
      trace.stage = PipelineStage::SmallOrderOracle;
      OracleVerdict verdict = oracle_decompose(grid, grid.n);
      if (!verdict.found()) return deliver(NoDecomposition{});
      detail::require_valid(grid, *verdict.partition, "oracle");
      trace.stage = PipelineStage::Done;
      return deliver(*verdict.partition);
    }

    BicoloredGrid work = grid;
    if (grid.count(Color::Blue) > grid.count(Color::Red)) {
      work = grid.with_swapped_colors();
      trace.colors_swapped = true;
    }
    const int n = work.n;

    trace.stage = PipelineStage::PairSearch;
    auto pair_or_done = find_blue_pair(work);
    if (auto* part = std::get_if<DiagonalPartition>(&pair_or_done)) {
      trace.early_done = true;
      trace.stage = PipelineStage::Done;
      detail::require_valid(grid, *part, "decompose(early)");
      return deliver(std::move(*part));
    }
    DiagonalPair pair = std::get<DiagonalPair>(std::move(pair_or_done));
    trace.first_diagonal = pair.first;
    trace.second_diagonal = pair.second;
    trace.shared_cell = pair.shared;
    for (const Diagonal* d : {&pair.first, &pair.second}) {
      if (!is_valid_diagonal(n, *d))
        throw PipelineError("decompose: pair member is not a diagonal");
      for (const Cell& c : d->cells)
        if (work.at(c.row, c.col) != Color::Blue)
          throw PipelineError("decompose: pair member leaves the blue class");
    }

    trace.stage = PipelineStage::ExternalCell;
    trace.window_columns = choose_window_columns(n, pair.shared.col);
    auto cell_or_done = find_external_blue_cell(work, pair);
    if (auto* part = std::get_if<DiagonalPartition>(&cell_or_done)) {
      trace.early_done = true;
      trace.stage = PipelineStage::Done;
      detail::require_valid(grid, *part, "decompose(early)");
      return deliver(std::move(*part));
    }
    Cell external = std::get<Cell>(cell_or_done);
    trace.external_cell = external;
    {
      CellSet union_set(n, [&] {
        std::vector<Cell> cs = pair.first.cells;
        cs.insert(cs.end(), pair.second.cells.begin(), pair.second.cells.end());
        return cs;
      }());
      if (external.row == pair.shared.row || external.col == pair.shared.col ||
          union_set.contains(external) || work.at(external.row, external.col) != Color::Blue)
        throw PipelineError("decompose: external cell violates its contract");
    }

    trace.stage = PipelineStage::CycleGraphStage;
    CycleGraph cg = build_cycle_graph(n, pair);
    for (const auto& cyc : cg.cycles) trace.cycle_sizes.push_back(static_cast<int>(cyc.vertices.size()));

    trace.stage = PipelineStage::Subgraph;
    CyclePathSubgraph h =
        find_cycle_path_subgraph(cg, cg.row_vertex(external.row), cg.col_vertex(external.col));
    trace.subgraph_edges = h.edges;
    trace.subgraph_vertex_count = static_cast<int>(h.vertices.size());

    trace.stage = PipelineStage::BlueRect;
    Rect seed_rect = build_blue_rect(work, h, external);
    trace.seed_rect = seed_rect;

    trace.stage = PipelineStage::WindowWalk;
    Rect balanced = slide_to_balanced_rect(work, seed_rect, seed, &trace.walk);
    trace.balanced_rect = balanced;

    trace.stage = PipelineStage::Fill;
    BalancedFill fill = balanced_fill(work, balanced);
    trace.filled_block = fill.block;
    trace.symbol_blue_cells = fill.blue_cells;
    trace.symbol_red_cells = fill.red_cells;

    trace.stage = PipelineStage::CornerCompletion;
    const int p = balanced.row_count(), q = balanced.col_count();
    CornerBlock corner{n, p, q, fill.block};
    if (!check_ryser_condition(corner).empty())
      throw PipelineError("decompose: corner block fails the counting condition");
    LatinSquare corner_square = complete_corner(corner);

    // permute back: rectangle rows/cols were moved (in sorted order) to the
    // top-left corner
    std::vector<int> row_pos(static_cast<std::size_t>(n), -1), col_pos(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int r : balanced.rows) row_pos[static_cast<std::size_t>(r)] = next++;
    for (int r = 0; r < n; ++r)
      if (row_pos[static_cast<std::size_t>(r)] < 0) row_pos[static_cast<std::size_t>(r)] = next++;
    next = 0;
    for (int c : balanced.cols) col_pos[static_cast<std::size_t>(c)] = next++;
    for (int c = 0; c < n; ++c)
      if (col_pos[static_cast<std::size_t>(c)] < 0) col_pos[static_cast<std::size_t>(c)] = next++;

    LatinSquare full{n, std::vector<int>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))};
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        full.entries[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
                     static_cast<std::size_t>(c)] =
            corner_square.at(row_pos[static_cast<std::size_t>(r)], col_pos[static_cast<std::size_t>(c)]);

    DiagonalPartition result = partition_from_symbol_diagonals(n, symbol_diagonals(full));
    trace.stage = PipelineStage::Done;
    detail::require_valid(grid, result, "decompose");
    return deliver(std::move(result));
  } catch (PipelineError& e) {
    trace.note = e.what();
    e.trace = trace;
    if (trace_out) *trace_out = trace;
    throw;
  }
}

}  // namespace baldiag
