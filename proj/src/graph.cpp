#include "ccn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace ccn {

int Bipartition::side(Vertex v) const {
  return std::binary_search(part1.begin(), part1.end(), v) ? 1 : 2;
}

CellGraph CellGraph::from_edge_list(int n, std::span<const std::pair<int, int>> edges,
                                    std::span<const int> loops) {
  if (n < 1) throw std::invalid_argument("cell graph needs at least one vertex");
  CellGraph g;
  g.n_ = n;
  g.inputs_.assign(n + 1, {});
  auto in_range = [n](int v) { return v >= 1 && v <= n; };

  for (auto [a, b] : edges) {
    if (!in_range(a) || !in_range(b))
      throw std::invalid_argument("edge {" + std::to_string(a) + "," + std::to_string(b) +
                                  "} has an endpoint outside 1.." + std::to_string(n));
    if (a == b)
      throw std::invalid_argument("self-edge {" + std::to_string(a) + "," + std::to_string(b) +
                                  "} must be given as a loop");
    g.edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  if (auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end()); dup != g.edges_.end())
    throw std::invalid_argument("duplicate edge {" + std::to_string(dup->u) + "," +
                                std::to_string(dup->v) + "}");

  for (int v : loops) {
    if (!in_range(v)) throw std::invalid_argument("loop vertex " + std::to_string(v) + " out of range");
    g.loops_.push_back(v);
  }
  std::sort(g.loops_.begin(), g.loops_.end());
  if (std::adjacent_find(g.loops_.begin(), g.loops_.end()) != g.loops_.end())
    throw std::invalid_argument("duplicate loop");

  for (const Edge& e : g.edges_) {
    g.inputs_[e.u].push_back(e.v);
    g.inputs_[e.v].push_back(e.u);
  }
  for (auto& in : g.inputs_) std::sort(in.begin(), in.end());

  if (count_components(n, g.edges_) != 1)
    throw std::invalid_argument("cell graph must be connected");
  return g;
}

void CellGraph::check_vertex(Vertex v) const {
  if (v < 1 || v > n_)
    throw std::domain_error("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n_));
}

const std::vector<Vertex>& CellGraph::inputs(Vertex v) const {
  check_vertex(v);
  return inputs_[v];
}

int CellGraph::degree(Vertex v) const { return static_cast<int>(inputs(v).size()); }

bool CellGraph::adjacent(Vertex u, Vertex v) const {
  const auto& in = inputs(u);
  return std::binary_search(in.begin(), in.end(), v);
}

bool CellGraph::has_loop(Vertex v) const {
  check_vertex(v);
  return std::binary_search(loops_.begin(), loops_.end(), v);
}

int CellGraph::edge_index(Vertex u, Vertex v) const {
  Edge key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || !(*it == key)) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::optional<int> is_regular(const CellGraph& g) {
  const int d = g.degree(1);
  for (Vertex v = 2; v <= g.size(); ++v)
    if (g.degree(v) != d) return std::nullopt;
  return d;
}

std::optional<Bipartition> bipartition(const CellGraph& g) {
  if (!g.loops().empty()) return std::nullopt;
  const int n = g.size();
  std::vector<int> colour(n + 1, 0);
  std::queue<Vertex> queue;
  colour[1] = 1;
  queue.push(1);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop();
    for (Vertex u : g.inputs(v)) {
      if (colour[u] == 0) {
        colour[u] = 3 - colour[v];
        queue.push(u);
      } else if (colour[u] == colour[v]) {
        return std::nullopt;
      }
    }
  }
  Bipartition b;
  for (Vertex v = 1; v <= n; ++v) (colour[v] == 1 ? b.part1 : b.part2).push_back(v);
  return b;
}

std::optional<DmParams> is_dm_graph(const CellGraph& g) {
  auto d = is_regular(g);
  auto b = bipartition(g);
  if (!d || !b || b->part1.size() != b->part2.size()) return std::nullopt;
  return DmParams{*d, static_cast<int>(b->part1.size())};
}

bool is_complete(const CellGraph& g) {
  const auto n = static_cast<std::size_t>(g.size());
  return g.edges().size() == n * (n - 1) / 2;
}

int count_components(int n, std::span<const Edge> edges) {
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n;
  for (const Edge& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

namespace {

CellGraph build(int n, const std::vector<std::pair<int, int>>& edges) {
  return CellGraph::from_edge_list(n, edges);
}

}  // namespace

CellGraph ring(int n) {
  if (n < 3) throw std::invalid_argument("ring needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
  return build(n, e);
}

CellGraph complete(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
  return build(n, e);
}

CellGraph complete_bipartite(int m, int n) {
  if (m < 1 || n < 1 || m + n < 2) throw std::invalid_argument("complete bipartite needs m, n >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) e.emplace_back(i, m + j);
  return build(m + n, e);
}

CellGraph star(int n) {
  if (n < 2) throw std::invalid_argument("star needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 2; i <= n; ++i) e.emplace_back(1, i);
  return build(n, e);
}

CellGraph path(int n) {
  if (n < 2) throw std::invalid_argument("path needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  return build(n, e);
}

CellGraph cube() {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < 8; ++a)
    for (int bit = 0; bit < 3; ++bit) {
      int b = a ^ (1 << bit);
      if (a < b) e.emplace_back(a + 1, b + 1);
    }
  return build(8, e);
}

CellGraph complete_bipartite_minus_matching(int m) {
  if (m < 2) throw std::invalid_argument("needs m >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      if (i != j) e.emplace_back(i, m + j);
  return build(2 * m, e);
}

CellGraph petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i + 1, (i + 1) % 5 + 1);          // outer cycle
    e.emplace_back(i + 1, i + 6);                    // spokes
    e.emplace_back(i + 6, (i + 2) % 5 + 6);          // inner pentagram
  }
  return build(10, e);
}

}  // namespace ccn
