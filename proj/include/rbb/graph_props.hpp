#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rbb/errors.hpp"
#include "rbb/graph.hpp"

namespace rbb {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// ---------------------------------------------------------------------------
// Distances and paths
// ---------------------------------------------------------------------------

// BFS hop distances from `source`, kUnreachable where no path exists. The
// search stops expanding at `max_depth`.
inline std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source,
                                              std::size_t max_depth = kUnreachable) {
  std::vector<std::size_t> dist(g.size(), kUnreachable);
  std::deque<NodeId> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] == max_depth) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

inline std::optional<std::size_t> hop_distance(const Graph& g, NodeId u, NodeId v) {
  const auto d = bfs_distances(g, u)[v];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

struct PathResult {
  std::vector<NodeId> nodes;
  std::size_t hop_count = 0;
  double cost = 0.0;

  bool operator==(const PathResult&) const = default;
};

template <class F>
concept EdgeCostFn = std::invocable<const F&, NodeId, NodeId> &&
                     std::convertible_to<std::invoke_result_t<const F&, NodeId, NodeId>, double>;

inline double unit_cost(NodeId, NodeId) { return 1.0; }

namespace detail {

struct PathLabel {
  double cost;
  std::size_t hops;
  std::vector<NodeId> nodes;

  // Total order: cost, then hops, then lexicographic node sequence. It is
  // preserved under extension by a common edge, so label-setting is exact.
  bool operator<(const PathLabel& other) const {
    if (cost != other.cost) return cost < other.cost;
    if (hops != other.hops) return hops < other.hops;
    return nodes < other.nodes;
  }
};

}  // namespace detail

// Minimum-cost u-v path. Ties go to fewer hops, then to the lexicographically
// smallest node sequence. With `max_hops` set, only paths of at most that many
// edges are considered.
template <EdgeCostFn Cost>
std::optional<PathResult> shortest_path(const Graph& g, NodeId u, NodeId v, const Cost& cost_fn,
                                        std::optional<std::size_t> max_hops = std::nullopt) {
  using detail::PathLabel;
  if (u >= g.size() || v >= g.size()) throw std::out_of_range("shortest_path: vertex out of range");
  if (u == v) return PathResult{{u}, 0, 0.0};

  const std::size_t layers = max_hops ? *max_hops + 1 : 1;
  auto state = [&](NodeId node, std::size_t hops) {
    return max_hops ? std::size_t{node} * layers + hops : std::size_t{node};
  };
  std::vector<char> settled(g.size() * layers, 0);
  // Hops still needed to reach v; prunes extensions that cannot finish in time.
  const auto to_target = max_hops ? bfs_distances(g, v, *max_hops) : std::vector<std::size_t>{};
  auto cmp = [](const PathLabel& a, const PathLabel& b) { return b < a; };
  std::priority_queue<PathLabel, std::vector<PathLabel>, decltype(cmp)> open(cmp);
  open.push(PathLabel{0.0, 0, {u}});

  while (!open.empty()) {
    PathLabel label = open.top();
    open.pop();
    const NodeId at = label.nodes.back();
    const auto s = state(at, label.hops);
    if (settled[s]) continue;
    settled[s] = 1;
    if (at == v) return PathResult{std::move(label.nodes), label.hops, label.cost};
    if (max_hops && label.hops == *max_hops) continue;
    for (NodeId w : g.neighbors(at)) {
      if (std::find(label.nodes.begin(), label.nodes.end(), w) != label.nodes.end()) continue;
      if (max_hops && (to_target[w] == kUnreachable || label.hops + 1 + to_target[w] > *max_hops)) continue;
      if (settled[state(w, label.hops + 1)]) continue;
      const double c = static_cast<double>(cost_fn(at, w));
      if (!(c >= 0.0)) throw std::invalid_argument("shortest_path: edge costs must be non-negative");
      PathLabel next{label.cost + c, label.hops + 1, label.nodes};
      next.nodes.push_back(w);
      open.push(std::move(next));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  std::vector<std::vector<NodeId>> components;
  std::vector<char> seen(g.size(), 0);
  for (NodeId root = 0; root < g.size(); ++root) {
    if (seen[root]) continue;
    std::vector<NodeId> component{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (NodeId w : g.neighbors(component[head])) {
        if (seen[w]) continue;
        seen[w] = 1;
        component.push_back(w);
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

inline bool is_connected(const Graph& g) {
  if (g.size() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnreachable; });
}

struct BlockDecomposition {
  std::vector<NodeSet> blocks;
  NodeSet cut_vertices;
  // Indices into `blocks`.
  std::vector<std::size_t> leaf_blocks;
};

namespace detail {

// Hopcroft-Tarjan biconnected components, iterative. Works on disconnected
// graphs; an isolated vertex forms a single-vertex block.
inline BlockDecomposition biconnected_components(const Graph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> disc(n, kNone), low(n, 0);
  std::vector<NodeId> parent(n, 0);
  std::vector<char> is_cut(n, 0);
  std::vector<Edge> edge_stack;
  std::vector<std::pair<NodeId, std::size_t>> stack;
  BlockDecomposition out;
  std::size_t timer = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] != kNone) continue;
    if (g.degree(root) == 0) {
      disc[root] = timer++;
      out.blocks.push_back({root});
      continue;
    }
    std::size_t root_children = 0;
    disc[root] = low[root] = timer++;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto nbrs = g.neighbors(v);
      if (next < nbrs.size()) {
        const NodeId w = nbrs[next++];
        if (disc[w] == kNone) {
          parent[w] = v;
          if (v == root) ++root_children;
          edge_stack.emplace_back(v, w);
          disc[w] = low[w] = timer++;
          stack.emplace_back(w, 0);
        } else if (w != parent[v] && disc[w] < disc[v]) {
          low[v] = std::min(low[v], disc[w]);
          edge_stack.emplace_back(v, w);
        }
        continue;
      }
      const NodeId child = v;
      stack.pop_back();
      if (stack.empty()) break;
      const NodeId p = stack.back().first;
      low[p] = std::min(low[p], low[child]);
      if (low[child] >= disc[p]) {
        if (p != root) is_cut[p] = 1;
        std::vector<NodeId> block;
        while (true) {
          const Edge e = edge_stack.back();
          edge_stack.pop_back();
          block.push_back(e.first);
          block.push_back(e.second);
          if (e.first == p && e.second == child) break;
        }
        out.blocks.push_back(make_node_set(std::move(block)));
      }
    }
    if (root_children > 1) is_cut[root] = 1;
  }

  out.cut_vertices = from_membership(is_cut);
  std::sort(out.blocks.begin(), out.blocks.end());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto cuts = std::count_if(out.blocks[b].begin(), out.blocks[b].end(),
                                    [&](NodeId v) { return is_cut[v] != 0; });
    if (cuts == 1) out.leaf_blocks.push_back(b);
  }
  return out;
}

}  // namespace detail

inline NodeSet cut_vertices(const Graph& g) { return detail::biconnected_components(g).cut_vertices; }

// Blocks (maximal 2-connected subgraphs or bridges), cut vertices and leaf
// blocks of a connected graph. Blocks are sorted lexicographically.
inline BlockDecomposition block_decomposition(const Graph& g) {
  if (!is_connected(g)) throw DisconnectedInput("block_decomposition: input graph is disconnected");
  return detail::biconnected_components(g);
}

// 2-connected: at least 3 vertices, connected, no cut vertex.
inline bool is_biconnected(const Graph& g) {
  return g.size() >= 3 && is_connected(g) && cut_vertices(g).empty();
}

// Vertices whose removal leaves a graph that is not 2-connected.
inline NodeSet bad_points(const Graph& g) {
  if (!is_biconnected(g)) throw NotBiconnectedInput("bad_points: input graph is not 2-connected");
  NodeSet bad;
  for (NodeId v = 0; v < g.size(); ++v)
    if (!is_biconnected(without_vertex(g, v))) bad.push_back(v);
  return bad;
}

namespace detail {

// Unit-capacity node-split network: vertex v becomes v_in = 2v and
// v_out = 2v + 1 joined by a unit arc; each edge {u, v} becomes the arcs
// u_out -> v_in and v_out -> u_in. Internally vertex-disjoint s-t paths are
// augmenting paths from s_out to t_in.
class SplitFlowNetwork {
 public:
  explicit SplitFlowNetwork(const Graph& g) : head_(2 * g.size(), -1) {
    for (NodeId v = 0; v < g.size(); ++v) add_arc(2 * v, 2 * v + 1);
    for (auto [u, v] : g.edges()) {
      add_arc(2 * u + 1, 2 * v);
      add_arc(2 * v + 1, 2 * u);
    }
    initial_ = cap_;
  }

  // Number of internally vertex-disjoint s-t paths, stopping at `limit`.
  std::size_t disjoint_paths(NodeId s, NodeId t, std::size_t limit) {
    cap_ = initial_;
    const int source = static_cast<int>(2 * s + 1);
    const int sink = static_cast<int>(2 * t);
    std::size_t flow = 0;
    std::vector<int> via(head_.size());
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{source};
      via[source] = -2;
      while (!queue.empty() && via[sink] == -1) {
        const int x = queue.front();
        queue.pop_front();
        for (int a = head_[x]; a != -1; a = next_[a]) {
          if (cap_[a] == 0 || via[to_[a]] != -1) continue;
          via[to_[a]] = a;
          queue.push_back(to_[a]);
        }
      }
      if (via[sink] == -1) break;
      for (int x = sink; x != source;) {
        const int a = via[x];
        --cap_[a];
        ++cap_[a ^ 1];
        x = to_[a ^ 1];
      }
      ++flow;
    }
    return flow;
  }

 private:
  void add_arc(int from, int to) {
    for (auto [a, b, c] : {std::tuple{from, to, 1}, std::tuple{to, from, 0}}) {
      to_.push_back(b);
      cap_.push_back(c);
      next_.push_back(head_[a]);
      head_[a] = static_cast<int>(to_.size()) - 1;
    }
  }

  std::vector<int> head_, next_, to_, cap_, initial_;
};

}  // namespace detail

// Number of internally vertex-disjoint paths between non-adjacent s and t.
inline std::size_t local_vertex_connectivity(const Graph& g, NodeId s, NodeId t,
                                             std::size_t limit = kUnreachable) {
  if (s == t || g.adjacent(s, t))
    throw std::invalid_argument("local_vertex_connectivity: endpoints must be distinct and non-adjacent");
  return detail::SplitFlowNetwork(g).disjoint_paths(s, t, limit);
}

// Vertex connectivity (n - 1 for complete graphs), truncated at `cap`.
// Even's scheme: only sources v_0..v_k need to be tried, where k is the
// running minimum, since a minimum separator misses one of them.
inline std::size_t vertex_connectivity(const Graph& g, std::size_t cap = kUnreachable) {
  const std::size_t n = g.size();
  if (n < 2) throw TooSmall("vertex_connectivity: need at least 2 vertices");
  if (!is_connected(g)) return 0;
  std::size_t best = n - 1;
  for (NodeId v = 0; v < n; ++v) best = std::min(best, g.degree(v));
  best = std::min(best, cap);
  detail::SplitFlowNetwork network(g);
  for (NodeId i = 0; i < n && i <= best; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (g.adjacent(i, j)) continue;
      best = std::min(best, network.disjoint_paths(i, j, best));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Domination
// ---------------------------------------------------------------------------

inline std::size_t dominator_neighbors(const Graph& g, const std::vector<char>& in_set, NodeId v) {
  std::size_t count = 0;
  for (NodeId w : g.neighbors(v)) count += in_set[w] ? 1 : 0;
  return count;
}

// Every vertex outside D has at least k neighbours in D.
inline bool is_k_dominating(const Graph& g, const NodeSet& dominators, std::size_t k) {
  const auto in_set = membership(g.size(), dominators);
  for (NodeId v = 0; v < g.size(); ++v)
    if (!in_set[v] && dominator_neighbors(g, in_set, v) < k) return false;
  return true;
}

inline bool is_independent_set(const Graph& g, const NodeSet& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (g.adjacent(nodes[i], nodes[j])) return false;
  return true;
}

inline bool is_maximal_independent_set(const Graph& g, const NodeSet& nodes) {
  return is_independent_set(g, nodes) && is_k_dominating(g, nodes, 1);
}

// ---------------------------------------------------------------------------
// Backbone certification
// ---------------------------------------------------------------------------

struct BackboneCertificate {
  bool m_ok = false;
  bool k_ok = false;
  // Vertex connectivity of the induced dominator graph; a single dominator
  // counts as 1-connected.
  std::size_t induced_connectivity = 0;

  bool ok() const noexcept { return m_ok && k_ok; }
};

namespace detail {

inline std::size_t induced_connectivity(const Graph& g, const NodeSet& dominators, std::size_t cap) {
  if (dominators.empty()) throw std::invalid_argument("certify_backbone: empty dominator set");
  if (dominators.size() == 1) return 1;
  return vertex_connectivity(induced_subgraph(g, dominators).graph, cap);
}

}  // namespace detail

// Ground-truth validator for m-connected k-dominating sets.
inline BackboneCertificate certify_backbone(const Graph& g, const NodeSet& dominators, std::size_t m,
                                            std::size_t k) {
  BackboneCertificate cert;
  cert.induced_connectivity = detail::induced_connectivity(g, dominators, kUnreachable);
  cert.m_ok = cert.induced_connectivity >= m;
  cert.k_ok = is_k_dominating(g, dominators, k);
  return cert;
}

// Same verdict as certify_backbone(...).ok() without the exact connectivity.
inline bool is_backbone(const Graph& g, const NodeSet& dominators, std::size_t m, std::size_t k) {
  if (dominators.empty()) return false;
  return is_k_dominating(g, dominators, k) && detail::induced_connectivity(g, dominators, m) >= m;
}

}  // namespace rbb
