#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace baldiag {

struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::vector<int>> adj;  // per left vertex

  BipartiteGraph() = default;
  BipartiteGraph(int l, int r) : left(l), right(r), adj(static_cast<std::size_t>(l)) {}

  void add_edge(int u, int v) {
    if (u < 0 || u >= left || v < 0 || v >= right)
      throw std::invalid_argument("bipartite edge out of range");
    adj[static_cast<std::size_t>(u)].push_back(v);
  }
};

struct Matching {
  std::vector<std::pair<int, int>> pairs;
  int size() const { return static_cast<int>(pairs.size()); }
};

namespace detail {

inline bool try_augment(const BipartiteGraph& g, int u, std::vector<char>& visited,
                        std::vector<int>& match_left, std::vector<int>& match_right) {
  for (int v : g.adj[static_cast<std::size_t>(u)]) {
    if (visited[static_cast<std::size_t>(v)]) continue;
    visited[static_cast<std::size_t>(v)] = 1;
    if (match_right[static_cast<std::size_t>(v)] < 0 ||
        try_augment(g, match_right[static_cast<std::size_t>(v)], visited, match_left, match_right)) {
      match_left[static_cast<std::size_t>(u)] = v;
      match_right[static_cast<std::size_t>(v)] = u;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Maximum-cardinality matching by augmenting paths. Left vertices are
// processed in ascending order and adjacency lists in the given order, so
// the result is deterministic for a fixed graph. Instance sizes here stay
// tiny, so the simple O(V*E) routine is the right tool.
inline Matching max_matching(const BipartiteGraph& g) {
  std::vector<int> match_left(static_cast<std::size_t>(g.left), -1);
  std::vector<int> match_right(static_cast<std::size_t>(g.right), -1);
  for (int u = 0; u < g.left; ++u) {
    std::vector<char> visited(static_cast<std::size_t>(g.right), 0);
    detail::try_augment(g, u, visited, match_left, match_right);
  }
  Matching m;
  for (int u = 0; u < g.left; ++u)
    if (match_left[static_cast<std::size_t>(u)] >= 0)
      m.pairs.emplace_back(u, match_left[static_cast<std::size_t>(u)]);
  return m;
}

// System of distinct representatives for a family of integer sets. When no
// SDR exists the Hall violator (indices of a family with too small a union)
// is reported instead.
struct SdrResult {
  std::optional<std::vector<int>> representatives;
  std::vector<int> violator;
};

inline SdrResult find_sdr(const std::vector<std::vector<int>>& sets) {
  int ground = 0;
  for (const auto& s : sets)
    for (int e : s) {
      if (e < 0) throw std::invalid_argument("find_sdr: elements must be non-negative");
      ground = std::max(ground, e + 1);
    }
  const int k = static_cast<int>(sets.size());
  BipartiteGraph g(k, ground);
  for (int i = 0; i < k; ++i)
    for (int e : sets[static_cast<std::size_t>(i)]) g.add_edge(i, e);

  std::vector<int> match_left(static_cast<std::size_t>(k), -1);
  std::vector<int> match_right(static_cast<std::size_t>(ground), -1);
  for (int u = 0; u < k; ++u) {
    std::vector<char> visited(static_cast<std::size_t>(ground), 0);
    detail::try_augment(g, u, visited, match_left, match_right);
  }

  SdrResult out;
  int unmatched = -1;
  for (int u = 0; u < k; ++u)
    if (match_left[static_cast<std::size_t>(u)] < 0) {
      unmatched = u;
      break;
    }
  if (unmatched < 0) {
    out.representatives = std::vector<int>(match_left.begin(), match_left.end());
    return out;
  }
  // Alternating reachability from the unmatched set: the reached left
  // vertices form a Hall violator.
  std::vector<char> left_seen(static_cast<std::size_t>(k), 0);
  std::vector<char> right_seen(static_cast<std::size_t>(ground), 0);
  std::vector<int> stack{unmatched};
  left_seen[static_cast<std::size_t>(unmatched)] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      if (right_seen[static_cast<std::size_t>(v)]) continue;
      right_seen[static_cast<std::size_t>(v)] = 1;
      int w = match_right[static_cast<std::size_t>(v)];
      if (w >= 0 && !left_seen[static_cast<std::size_t>(w)]) {
        left_seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  for (int u = 0; u < k; ++u)
    if (left_seen[static_cast<std::size_t>(u)]) out.violator.push_back(u);
  return out;
}

// ---------------------------------------------------------------------------
// Bipartite multigraph edge coloring
// ---------------------------------------------------------------------------

struct BipartiteMultigraph {
  struct Edge {
    int u = 0;  // left endpoint
    int v = 0;  // right endpoint
  };
  int left = 0;
  int right = 0;
  std::vector<Edge> edges;  // edge id = position

  BipartiteMultigraph() = default;
  BipartiteMultigraph(int l, int r) : left(l), right(r) {}

  void add_edge(int u, int v) {
    if (u < 0 || u >= left || v < 0 || v >= right)
      throw std::invalid_argument("multigraph edge out of range");
    edges.push_back({u, v});
  }

  int max_degree() const {
    std::vector<int> dl(static_cast<std::size_t>(left), 0), dr(static_cast<std::size_t>(right), 0);
    int best = 0;
    for (const Edge& e : edges) {
      best = std::max(best, ++dl[static_cast<std::size_t>(e.u)]);
      best = std::max(best, ++dr[static_cast<std::size_t>(e.v)]);
    }
    return best;
  }
};

// Proper edge coloring with at most `num_colors` colors (needs num_colors >=
// max degree). Edges are inserted one at a time; when the smallest color
// free at u is not free at v, the two-color alternating chain from v is
// swapped first. In a bipartite graph that chain can never end at u, so the
// insertion always succeeds — this is the constructive side of König's
// edge-coloring theorem.
inline std::vector<int> edge_color_bipartite(const BipartiteMultigraph& g, int num_colors) {
  if (num_colors < g.max_degree())
    throw std::invalid_argument("edge_color_bipartite: fewer colors than the maximum degree");
  const std::size_t colors = static_cast<std::size_t>(num_colors);
  // edge id per (vertex, color), -1 when free
  std::vector<std::vector<int>> at_left(static_cast<std::size_t>(g.left), std::vector<int>(colors, -1));
  std::vector<std::vector<int>> at_right(static_cast<std::size_t>(g.right), std::vector<int>(colors, -1));
  std::vector<int> color_of(g.edges.size(), -1);

  auto first_free = [&](const std::vector<int>& used) {
    for (std::size_t c = 0; c < used.size(); ++c)
      if (used[c] < 0) return static_cast<int>(c);
    return -1;
  };

  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    const auto [u, v] = g.edges[id];
    auto& lu = at_left[static_cast<std::size_t>(u)];
    auto& rv = at_right[static_cast<std::size_t>(v)];
    int a = first_free(lu);
    int b = first_free(rv);
    if (a < 0 || b < 0) throw std::logic_error("edge_color_bipartite: no free color");
    if (rv[static_cast<std::size_t>(a)] < 0) {
      color_of[id] = a;
      lu[static_cast<std::size_t>(a)] = rv[static_cast<std::size_t>(a)] = static_cast<int>(id);
      continue;
    }
    // Collect the maximal (a,b)-alternating chain starting at v. It starts
    // with an a-edge, so left vertices on it are always entered through
    // color a; u has no a-edge, hence the chain never touches u.
    std::vector<int> chain;
    bool from_right = true;
    int vertex = v;
    int want = a;
    while (true) {
      int e = from_right ? at_right[static_cast<std::size_t>(vertex)][static_cast<std::size_t>(want)]
                         : at_left[static_cast<std::size_t>(vertex)][static_cast<std::size_t>(want)];
      if (e < 0) break;
      chain.push_back(e);
      const auto [eu, ev] = g.edges[static_cast<std::size_t>(e)];
      vertex = from_right ? eu : ev;
      from_right = !from_right;
      want = want == a ? b : a;
    }
    for (int e : chain) {
      const auto [eu, ev] = g.edges[static_cast<std::size_t>(e)];
      int old = color_of[static_cast<std::size_t>(e)];
      color_of[static_cast<std::size_t>(e)] = old == a ? b : a;
      at_left[static_cast<std::size_t>(eu)][static_cast<std::size_t>(old)] = -1;
      at_right[static_cast<std::size_t>(ev)][static_cast<std::size_t>(old)] = -1;
    }
    for (int e : chain) {
      const auto [eu, ev] = g.edges[static_cast<std::size_t>(e)];
      int c = color_of[static_cast<std::size_t>(e)];
      at_left[static_cast<std::size_t>(eu)][static_cast<std::size_t>(c)] = e;
      at_right[static_cast<std::size_t>(ev)][static_cast<std::size_t>(c)] = e;
    }
    color_of[id] = a;
    lu[static_cast<std::size_t>(a)] = static_cast<int>(id);
    rv[static_cast<std::size_t>(a)] = static_cast<int>(id);
  }
  return color_of;
}

}  // namespace baldiag
