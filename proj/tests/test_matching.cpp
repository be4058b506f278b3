#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "baldiag/matching.hpp"
#include "baldiag/rng.hpp"

using namespace baldiag;

namespace {

// maximum matching by exhaustive recursion over left vertices
int brute_max_matching(const BipartiteGraph& g, int u = 0, std::vector<char>* used = nullptr) {
  std::vector<char> local;
  if (!used) {
    local.assign(static_cast<std::size_t>(g.right), 0);
    used = &local;
  }
  if (u == g.left) return 0;
  int best = brute_max_matching(g, u + 1, used);  // leave u unmatched
  for (int v : g.adj[static_cast<std::size_t>(u)]) {
    if ((*used)[static_cast<std::size_t>(v)]) continue;
    (*used)[static_cast<std::size_t>(v)] = 1;
    best = std::max(best, 1 + brute_max_matching(g, u + 1, used));
    (*used)[static_cast<std::size_t>(v)] = 0;
  }
  return best;
}

bool hall_condition_holds(const std::vector<std::vector<int>>& sets, int ground) {
  const int k = static_cast<int>(sets.size());
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<char> in_union(static_cast<std::size_t>(ground), 0);
    int size = 0, members = 0;
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      ++members;
      for (int e : sets[static_cast<std::size_t>(i)])
        if (!in_union[static_cast<std::size_t>(e)]) {
          in_union[static_cast<std::size_t>(e)] = 1;
          ++size;
        }
    }
    if (size < members) return false;
  }
  return true;
}

BipartiteGraph random_graph(int left, int right, double density, Rng& rng) {
  BipartiteGraph g(left, right);
  for (int u = 0; u < left; ++u)
    for (int v = 0; v < right; ++v)
      if (rng.coin(density)) g.add_edge(u, v);
  return g;
}

bool coloring_is_proper(const BipartiteMultigraph& g, const std::vector<int>& colors, int limit) {
  std::vector<std::vector<char>> left_used(static_cast<std::size_t>(g.left),
                                           std::vector<char>(static_cast<std::size_t>(limit), 0));
  std::vector<std::vector<char>> right_used(static_cast<std::size_t>(g.right),
                                            std::vector<char>(static_cast<std::size_t>(limit), 0));
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    int c = colors[id];
    if (c < 0 || c >= limit) return false;
    if (left_used[static_cast<std::size_t>(g.edges[id].u)][static_cast<std::size_t>(c)]) return false;
    if (right_used[static_cast<std::size_t>(g.edges[id].v)][static_cast<std::size_t>(c)]) return false;
    left_used[static_cast<std::size_t>(g.edges[id].u)][static_cast<std::size_t>(c)] = 1;
    right_used[static_cast<std::size_t>(g.edges[id].v)][static_cast<std::size_t>(c)] = 1;
  }
  return true;
}

}  // namespace

TEST_CASE("max_matching: pinned examples") {
  BipartiteGraph complete3(3, 3);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) complete3.add_edge(u, v);
  CHECK(max_matching(complete3).size() == 3);

  BipartiteGraph bottleneck(2, 1);
  bottleneck.add_edge(0, 0);
  bottleneck.add_edge(1, 0);
  CHECK(max_matching(bottleneck).size() == 1);
}

TEST_CASE("max_matching: matches brute force on random and structured graphs") {
  Rng rng(42);
  for (int trial = 0; trial < 600; ++trial) {
    int left = 1 + rng.below_int(7);
    int right = 1 + rng.below_int(7);
    BipartiteGraph g = random_graph(left, right, 0.1 + 0.8 * rng.unit(), rng);
    Matching m = max_matching(g);
    CHECK(m.size() == brute_max_matching(g));
    std::vector<char> lu(static_cast<std::size_t>(left), 0), ru(static_cast<std::size_t>(right), 0);
    for (auto [u, v] : m.pairs) {
      CHECK(!lu[static_cast<std::size_t>(u)]);
      CHECK(!ru[static_cast<std::size_t>(v)]);
      lu[static_cast<std::size_t>(u)] = ru[static_cast<std::size_t>(v)] = 1;
      CHECK(std::find(g.adj[static_cast<std::size_t>(u)].begin(), g.adj[static_cast<std::size_t>(u)].end(), v) !=
            g.adj[static_cast<std::size_t>(u)].end());
    }
  }
  // structured: perfect matchings on even cycles and complete graphs
  for (int k = 2; k <= 6; ++k) {
    BipartiteGraph cycle(k, k);
    for (int i = 0; i < k; ++i) {
      cycle.add_edge(i, i);
      cycle.add_edge(i, (i + 1) % k);
    }
    CHECK(max_matching(cycle).size() == k);
  }
}

TEST_CASE("find_sdr: pinned examples") {
  SdrResult ok = find_sdr({{1, 2}, {2, 3}, {3, 1}});
  REQUIRE(ok.representatives);
  CHECK(*ok.representatives == std::vector<int>{1, 2, 3});

  SdrResult bad = find_sdr({{1}, {1}});
  CHECK(!bad.representatives);
  CHECK(bad.violator == std::vector<int>{0, 1});
}

TEST_CASE("find_sdr: success iff Hall's condition, violator is a genuine violator") {
  Rng rng(90210);
  for (int trial = 0; trial < 500; ++trial) {
    int k = 1 + rng.below_int(7);
    int ground = 1 + rng.below_int(7);
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(k));
    for (auto& s : sets)
      for (int e = 0; e < ground; ++e)
        if (rng.coin(0.4)) s.push_back(e);
    SdrResult res = find_sdr(sets);
    CHECK(res.representatives.has_value() == hall_condition_holds(sets, ground));
    if (res.representatives) {
      std::vector<char> used(static_cast<std::size_t>(ground), 0);
      for (int i = 0; i < k; ++i) {
        int rep = (*res.representatives)[static_cast<std::size_t>(i)];
        CHECK(std::find(sets[static_cast<std::size_t>(i)].begin(), sets[static_cast<std::size_t>(i)].end(), rep) !=
              sets[static_cast<std::size_t>(i)].end());
        CHECK(!used[static_cast<std::size_t>(rep)]);
        used[static_cast<std::size_t>(rep)] = 1;
      }
    } else {
      // the reported family must have a union smaller than itself
      std::vector<char> in_union(static_cast<std::size_t>(ground), 0);
      int size = 0;
      for (int i : res.violator)
        for (int e : sets[static_cast<std::size_t>(i)])
          if (!in_union[static_cast<std::size_t>(e)]) {
            in_union[static_cast<std::size_t>(e)] = 1;
            ++size;
          }
      CHECK(size < static_cast<int>(res.violator.size()));
    }
  }
}

TEST_CASE("find_sdr: column-missing sets of a Latin rectangle are always hit") {
  // 2x4 rectangle: rows are permutations, columns duplicate-free
  std::vector<std::vector<int>> rows = {{1, 2, 3, 4}, {2, 3, 4, 1}};
  std::vector<std::vector<int>> missing(4);
  for (int c = 0; c < 4; ++c)
    for (int s = 1; s <= 4; ++s)
      if (s != rows[0][static_cast<std::size_t>(c)] && s != rows[1][static_cast<std::size_t>(c)])
        missing[static_cast<std::size_t>(c)].push_back(s - 1);
  SdrResult res = find_sdr(missing);
  REQUIRE(res.representatives);
  std::vector<char> used(5, 0);
  for (int rep : *res.representatives) {
    CHECK(!used[static_cast<std::size_t>(rep)]);
    used[static_cast<std::size_t>(rep)] = 1;
  }
}

TEST_CASE("edge_color_bipartite: pinned examples") {
  // 2-regular even cycle as a multigraph, delta = 2
  BipartiteMultigraph cycle(3, 3);
  for (int i = 0; i < 3; ++i) {
    cycle.add_edge(i, i);
    cycle.add_edge(i, (i + 1) % 3);
  }
  auto colors = edge_color_bipartite(cycle, 2);
  CHECK(coloring_is_proper(cycle, colors, 2));

  // parallel edges on a single vertex pair: all colors distinct
  BipartiteMultigraph star(1, 1);
  for (int d = 0; d < 5; ++d) star.add_edge(0, 0);
  auto star_colors = edge_color_bipartite(star, 5);
  std::sort(star_colors.begin(), star_colors.end());
  CHECK(star_colors == std::vector<int>{0, 1, 2, 3, 4});

  CHECK_THROWS_AS(edge_color_bipartite(star, 4), std::invalid_argument);
}

TEST_CASE("edge_color_bipartite: proper with <= delta colors on fuzzed multigraphs") {
  Rng rng(1906);
  for (int trial = 0; trial < 400; ++trial) {
    int left = 1 + rng.below_int(8);
    int right = 1 + rng.below_int(8);
    BipartiteMultigraph g(left, right);
    for (int u = 0; u < left; ++u)
      for (int v = 0; v < right; ++v) {
        int multiplicity = rng.below_int(4);  // 0..3
        for (int k = 0; k < multiplicity; ++k)
          if (rng.coin(0.5)) g.add_edge(u, v);
      }
    int delta = g.max_degree();
    if (delta == 0) continue;
    auto colors = edge_color_bipartite(g, delta);
    CHECK(coloring_is_proper(g, colors, delta));
    // determinism
    CHECK(edge_color_bipartite(g, delta) == colors);
  }
}
