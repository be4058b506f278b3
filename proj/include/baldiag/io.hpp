#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "baldiag/decompose.hpp"
#include "baldiag/grid.hpp"
#include "baldiag/latin.hpp"

namespace baldiag {

struct ParseError : std::runtime_error {
  int line = 0;  // 1-based; 0 when unknown
  int col = 0;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " (line " + std::to_string(l) + ", column " + std::to_string(c) + ")"),
        line(l),
        col(c) {}
};

namespace detail {

inline std::string read_line(std::istream& in, int line_no, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("missing ") + what, line_no, 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline int parse_order(const std::string& line, int line_no) {
  std::size_t pos = 0;
  int n = 0;
  try {
    n = std::stoi(line, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected the grid order", line_no, 1);
  }
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos != line.size()) throw ParseError("trailing characters after the order", line_no, static_cast<int>(pos) + 1);
  if (n <= 0) throw ParseError("order must be positive", line_no, 1);
  return n;
}

}  // namespace detail

// Grid format: the order n on the first line, then n lines of n characters
// from {B, R}.
inline BicoloredGrid read_grid(std::istream& in) {
  std::string header = detail::read_line(in, 1, "grid order");
  int n = detail::parse_order(header, 1);
  BicoloredGrid g(n);
  for (int r = 0; r < n; ++r) {
    std::string line = detail::read_line(in, r + 2, "grid row");
    if (static_cast<int>(line.size()) != n)
      throw ParseError("row has " + std::to_string(line.size()) + " cells, expected " + std::to_string(n),
                       r + 2, static_cast<int>(line.size()) + 1);
    for (int c = 0; c < n; ++c) {
      if (line[static_cast<std::size_t>(c)] == 'B')
        g.set(r, c, Color::Blue);
      else if (line[static_cast<std::size_t>(c)] == 'R')
        g.set(r, c, Color::Red);
      else
        throw ParseError(std::string("invalid cell character '") + line[static_cast<std::size_t>(c)] + "'",
                         r + 2, c + 1);
    }
  }
  return g;
}

inline void write_grid(std::ostream& out, const BicoloredGrid& g) {
  out << g.n << '\n';
  for (int r = 0; r < g.n; ++r) {
    for (int c = 0; c < g.n; ++c) out << color_char(g.at(r, c));
    out << '\n';
  }
}

inline BicoloredGrid read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_grid(in);
}

// Partial Latin square format: the order n, then n lines of n
// space-separated tokens, "." for empty or a symbol 1..n.
inline PartialLatinSquare read_pls(std::istream& in) {
  std::string header = detail::read_line(in, 1, "square order");
  int n = detail::parse_order(header, 1);
  PartialLatinSquare pls(n);
  for (int r = 0; r < n; ++r) {
    std::string line = detail::read_line(in, r + 2, "square row");
    std::istringstream tokens(line);
    for (int c = 0; c < n; ++c) {
      std::string tok;
      if (!(tokens >> tok)) throw ParseError("row has too few entries", r + 2, static_cast<int>(line.size()) + 1);
      if (tok == ".") continue;
      int s = 0;
      try {
        std::size_t used = 0;
        s = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("invalid entry '" + tok + "'", r + 2, c + 1);
      }
      if (s < 1 || s > n) throw ParseError("symbol " + std::to_string(s) + " out of range", r + 2, c + 1);
      pls.set(r, c, s);
    }
    std::string extra;
    if (tokens >> extra) throw ParseError("row has too many entries", r + 2, static_cast<int>(line.size()) + 1);
  }
  return pls;
}

inline void write_pls(std::ostream& out, const PartialLatinSquare& pls) {
  out << pls.n << '\n';
  for (int r = 0; r < pls.n; ++r) {
    for (int c = 0; c < pls.n; ++c) {
      if (c) out << ' ';
      if (int s = pls.at(r, c))
        out << s;
      else
        out << '.';
    }
    out << '\n';
  }
}

// Partition format: a JSON array of n arrays of [row, col] pairs.
inline std::string partition_to_json(const DiagonalPartition& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Diagonal& d : p.diagonals) {
    nlohmann::json diag = nlohmann::json::array();
    for (const Cell& c : d.cells) diag.push_back({c.row, c.col});
    arr.push_back(std::move(diag));
  }
  return arr.dump();
}

inline DiagonalPartition partition_from_json(const std::string& text, int n) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // map the byte offset back to a position
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("invalid JSON", line, col);
  }
  if (!parsed.is_array()) throw ParseError("partition must be an array of diagonals", 0, 0);
  DiagonalPartition p;
  p.n = n;
  for (const auto& diag : parsed) {
    if (!diag.is_array()) throw ParseError("diagonal must be an array of [row, col] pairs", 0, 0);
    Diagonal d;
    for (const auto& cell : diag) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() ||
          !cell[1].is_number_integer())
        throw ParseError("cell must be a [row, col] pair", 0, 0);
      d.cells.push_back({cell[0].get<int>(), cell[1].get<int>()});
    }
    p.diagonals.push_back(std::move(d));
  }
  return p;
}

inline std::string partition_file_to_string(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Trace serialization (for --trace and diagnostic dumps)
// ---------------------------------------------------------------------------

inline const char* stage_name(PipelineStage s) {
  switch (s) {
    case PipelineStage::Start: return "start";
    case PipelineStage::Feasibility: return "feasibility";
    case PipelineStage::SmallOrderOracle: return "small-order-oracle";
    case PipelineStage::FirstCover: return "first-cover";
    case PipelineStage::PairSearch: return "pair-search";
    case PipelineStage::ExternalCell: return "external-cell";
    case PipelineStage::CycleGraphStage: return "cycle-graph";
    case PipelineStage::Subgraph: return "subgraph";
    case PipelineStage::BlueRect: return "blue-rect";
    case PipelineStage::WindowWalk: return "window-walk";
    case PipelineStage::Fill: return "fill";
    case PipelineStage::CornerCompletion: return "corner-completion";
    case PipelineStage::Done: return "done";
  }
  return "unknown";
}

namespace detail {

inline nlohmann::json cells_to_json(const std::vector<Cell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Cell& c : cells) arr.push_back({c.row, c.col});
  return arr;
}

inline nlohmann::json rect_to_json(const Rect& r) {
  return {{"rows", r.rows}, {"cols", r.cols}};
}

}  // namespace detail

inline nlohmann::json trace_to_json(const PipelineTrace& t) {
  nlohmann::json j;
  j["n"] = t.n;
  j["seed"] = t.seed;
  j["stage"] = stage_name(t.stage);
  j["colors_swapped"] = t.colors_swapped;
  j["early_done"] = t.early_done;
  if (t.first_diagonal) j["first_diagonal"] = detail::cells_to_json(t.first_diagonal->cells);
  if (t.second_diagonal) j["second_diagonal"] = detail::cells_to_json(t.second_diagonal->cells);
  if (t.shared_cell) j["shared_cell"] = {t.shared_cell->row, t.shared_cell->col};
  if (!t.window_columns.empty()) j["window_columns"] = t.window_columns;
  if (t.external_cell) j["external_cell"] = {t.external_cell->row, t.external_cell->col};
  if (!t.cycle_sizes.empty()) j["cycle_sizes"] = t.cycle_sizes;
  if (!t.subgraph_edges.empty()) {
    j["subgraph_edges"] = detail::cells_to_json(t.subgraph_edges);
    j["subgraph_vertex_count"] = t.subgraph_vertex_count;
  }
  if (t.seed_rect) j["seed_rect"] = detail::rect_to_json(*t.seed_rect);
  if (t.balanced_rect) {
    j["balanced_rect"] = detail::rect_to_json(*t.balanced_rect);
    j["walk"] = {{"steps", t.walk.steps},
                 {"restarts", t.walk.restarts},
                 {"direct_search", t.walk.direct_search}};
  }
  if (!t.filled_block.empty()) j["filled_block"] = t.filled_block;
  if (!t.symbol_blue_cells.empty()) {
    j["symbol_blue_cells"] = detail::cells_to_json(t.symbol_blue_cells);
    j["symbol_red_cells"] = detail::cells_to_json(t.symbol_red_cells);
  }
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

}  // namespace baldiag
