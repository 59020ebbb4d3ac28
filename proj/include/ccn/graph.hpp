#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ccn {

/// Cells are labelled 1..n.
using Vertex = int;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Two-colouring of a bipartite cell graph; `part1` always contains vertex 1.
struct Bipartition {
  std::vector<Vertex> part1;
  std::vector<Vertex> part2;

  /// 1 if v is in part1, 2 otherwise.
  int side(Vertex v) const;
};

struct DmParams {
  int d;
  int m;
  friend bool operator==(const DmParams&, const DmParams&) = default;
};

/// Connected undirected simple graph of cells, optionally with loops.
///
/// Loops are stored but never enter input sets or degrees. The object is
/// immutable once built; construction rejects duplicate edges, out-of-range
/// endpoints and disconnected graphs.
class CellGraph {
 public:
  static CellGraph from_edge_list(int n, std::span<const std::pair<int, int>> edges,
                                  std::span<const int> loops = {});
  static CellGraph from_edge_list(int n, std::initializer_list<std::pair<int, int>> edges) {
    std::vector<std::pair<int, int>> e(edges);
    return from_edge_list(n, e);
  }

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& loops() const { return loops_; }

  /// Input set I(v), sorted ascending.
  const std::vector<Vertex>& inputs(Vertex v) const;
  int degree(Vertex v) const;
  bool adjacent(Vertex u, Vertex v) const;
  bool has_loop(Vertex v) const;

  /// Index of edge {u,v} in edges(), or -1.
  int edge_index(Vertex u, Vertex v) const;

 private:
  CellGraph() = default;
  void check_vertex(Vertex v) const;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Vertex> loops_;
  std::vector<std::vector<Vertex>> inputs_;
};

/// Common degree d if the graph is d-regular.
std::optional<int> is_regular(const CellGraph& g);

/// BFS two-colouring. Absent when an odd cycle (or a loop) exists.
std::optional<Bipartition> bipartition(const CellGraph& g);

/// (d, m) when g is d-regular bipartite with both parts of size m.
std::optional<DmParams> is_dm_graph(const CellGraph& g);

bool is_complete(const CellGraph& g);

/// Number of connected components of the graph on vertices 1..n restricted to
/// the given edges; isolated vertices count as components.
int count_components(int n, std::span<const Edge> edges);

// Named constructors.
CellGraph ring(int n);
CellGraph complete(int n);
/// K_{m,n} with part {1..m} and part {m+1..m+n}.
CellGraph complete_bipartite(int m, int n);
/// Star on n vertices with centre 1.
CellGraph star(int n);
/// Path 1-2-...-n.
CellGraph path(int n);
/// 3-cube Q3 (vertices are bit patterns 0..7 shifted to 1..8).
CellGraph cube();
/// K_{m,m} with the perfect matching {i, m+i} removed.
CellGraph complete_bipartite_minus_matching(int m);
CellGraph petersen();

}  // namespace ccn
