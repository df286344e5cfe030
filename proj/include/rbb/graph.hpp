#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rbb {

// Dense vertex index in 0..n-1.
using NodeId = std::uint32_t;

// Sorted, duplicate-free collection of vertices.
using NodeSet = std::vector<NodeId>;

using Edge = std::pair<NodeId, NodeId>;

inline NodeSet make_node_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

inline bool contains(const NodeSet& set, NodeId v) {
  return std::binary_search(set.begin(), set.end(), v);
}

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool includes(const NodeSet& super, const NodeSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Membership mask of `set` over n vertices.
inline std::vector<char> membership(std::size_t n, const NodeSet& set) {
  std::vector<char> mask(n, 0);
  for (NodeId v : set) mask.at(v) = 1;
  return mask;
}

inline NodeSet from_membership(const std::vector<char>& mask) {
  NodeSet out;
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) out.push_back(static_cast<NodeId>(v));
  return out;
}

// Simple undirected graph: sorted adjacency lists plus a dense adjacency
// matrix for O(1) edge tests. Intended for n up to a few thousand.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n) : adj_(n), matrix_(n * n, 0) {}

  Graph(std::size_t n, std::initializer_list<Edge> edges) : Graph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  // Adds the undirected edge {u, v}; duplicates are ignored.
  void add_edge(NodeId u, NodeId v) {
    if (u >= size() || v >= size()) throw std::out_of_range("Graph::add_edge: vertex out of range");
    if (u == v) throw std::invalid_argument("Graph::add_edge: self-loops are not allowed");
    if (matrix_[index(u, v)]) return;
    matrix_[index(u, v)] = matrix_[index(v, u)] = 1;
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    ++edge_count_;
  }

  std::size_t size() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adj_.at(v); }
  std::size_t degree(NodeId v) const { return adj_.at(v).size(); }

  bool adjacent(NodeId u, NodeId v) const { return matrix_[index(u, v)] != 0; }

  // Edges with u < v, lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < size(); ++u)
      for (NodeId v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool operator==(const Graph& other) const { return adj_ == other.adj_; }

 private:
  std::size_t index(NodeId u, NodeId v) const { return std::size_t{u} * size() + v; }

  static void insert_sorted(std::vector<NodeId>& list, NodeId v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  }

  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::uint8_t> matrix_;
  std::size_t edge_count_ = 0;
};

// Subgraph induced by a vertex set, with the map back to parent ids.
// Local vertex i corresponds to parent vertex to_parent[i].
struct InducedSubgraph {
  Graph graph;
  NodeSet to_parent;
};

inline InducedSubgraph induced_subgraph(const Graph& g, const NodeSet& nodes) {
  std::vector<std::int64_t> local(g.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) local.at(nodes[i]) = static_cast<std::int64_t>(i);
  InducedSubgraph sub{Graph(nodes.size()), nodes};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      const auto j = local[w];
      if (j > static_cast<std::int64_t>(i)) sub.graph.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  return sub;
}

// Graph with one vertex removed; ids above `removed` shift down by one.
inline Graph without_vertex(const Graph& g, NodeId removed) {
  Graph out(g.size() - 1);
  auto remap = [removed](NodeId v) { return v > removed ? v - 1 : v; };
  for (NodeId u = 0; u < g.size(); ++u) {
    if (u == removed) continue;
    for (NodeId v : g.neighbors(u))
      if (u < v && v != removed) out.add_edge(remap(u), remap(v));
  }
  return out;
}

// Graph plus a transmission rate on every edge.
class RatedGraph {
 public:
  RatedGraph() = default;

  // All rates start at `rate`.
  explicit RatedGraph(Graph graph, double rate = 0.0)
      : graph_(std::move(graph)), rates_(graph_.size() * graph_.size(), 0.0) {
    for (auto [u, v] : graph_.edges()) set_rate(u, v, rate);
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }

  double rate(NodeId u, NodeId v) const { return rates_[std::size_t{u} * size() + v]; }

  void set_rate(NodeId u, NodeId v, double rate) {
    if (!graph_.adjacent(u, v)) throw std::invalid_argument("RatedGraph::set_rate: not an edge");
    rates_[std::size_t{u} * size() + v] = rate;
    rates_[std::size_t{v} * size() + u] = rate;
  }

  bool operator==(const RatedGraph& other) const = default;

 private:
  Graph graph_;
  std::vector<double> rates_;
};

}  // namespace rbb
