#pragma once

// Greedy construction of m-connected k-dominating sets (m, k <= 3) in five
// rounds: MIS, MIS connection, extra MIS layers, leaf-block augmentation and
// bad-point elimination.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "rbb/errors.hpp"
#include "rbb/graph.hpp"
#include "rbb/graph_props.hpp"

namespace rbb {

enum class Color { White, Grey, Black };

using NodeColoring = std::vector<Color>;

struct CostConfig {
  bool use_uncertainty_cost = false;
  std::size_t pair_hop_threshold = 4;

  // 1 - rate when the uncertainty cost is on, otherwise 1 per edge.
  double edge_cost(const RatedGraph& g, NodeId u, NodeId v) const {
    return use_uncertainty_cost ? 1.0 - g.rate(u, v) : 1.0;
  }
};

// Sum of (1 - rate) along a path. Reported for both cost settings so the two
// can be compared on the same scale.
inline double uncertainty_cost(const RatedGraph& g, const std::vector<NodeId>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += 1.0 - g.rate(path[i - 1], path[i]);
  return total;
}

// Mean, over vertices outside D, of the best rate to any neighbouring
// dominator. 1.0 when D covers every vertex.
inline double mean_best_rate(const RatedGraph& g, const NodeSet& dominators) {
  const auto in_set = membership(g.size(), dominators);
  double total = 0.0;
  std::size_t outside = 0;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (in_set[v]) continue;
    double best = 0.0;
    for (NodeId w : g.graph().neighbors(v))
      if (in_set[w]) best = std::max(best, g.rate(v, w));
    total += best;
    ++outside;
  }
  return outside == 0 ? 1.0 : total / static_cast<double>(outside);
}

struct ConnectedPair {
  NodeId u = 0;
  NodeId v = 0;
  std::size_t hops_in_graph = 0;
  PathResult path;
  double uncertainty_cost = 0.0;
};

struct ConnectionResult {
  NodeSet dominators;
  std::vector<ConnectedPair> pairs;
};

struct Round5Result {
  NodeSet dominators;
  std::size_t single_moves = 0;
  std::size_t path_moves = 0;
  bool fell_back = false;
};

struct BackboneSolution {
  NodeSet dominators;
  std::size_t m_achieved = 0;
  std::size_t k_achieved = 0;
  std::size_t size = 0;
  double max_pair_cost = 0.0;
  double mean_rate = 0.0;

  // Construction trace.
  NodeSet first_mis;
  std::vector<ConnectedPair> pairs;
  std::vector<NodeSet> round_outputs;  // D after each executed round
  bool round5_fell_back = false;
};

namespace detail {

// Greedy MIS over the vertices flagged in `active`: repeatedly blacken the
// white vertex with the most grey neighbours, ties to higher degree (within
// the active subgraph), then smaller id. The first pick is therefore the
// maximum-degree vertex.
inline NodeSet greedy_mis(const Graph& g, const std::vector<char>& active, NodeColoring* coloring = nullptr) {
  const std::size_t n = g.size();
  NodeColoring color(n, Color::White);
  std::vector<std::size_t> degree(n, 0), grey_count(n, 0);
  std::size_t white_left = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!active[v]) continue;
    ++white_left;
    for (NodeId w : g.neighbors(v)) degree[v] += active[w] ? 1 : 0;
  }

  NodeSet mis;
  while (white_left > 0) {
    std::optional<NodeId> pick;
    for (NodeId v = 0; v < n; ++v) {
      if (!active[v] || color[v] != Color::White) continue;
      if (!pick || std::tie(grey_count[v], degree[v]) > std::tie(grey_count[*pick], degree[*pick])) pick = v;
    }
    color[*pick] = Color::Black;
    --white_left;
    mis.push_back(*pick);
    for (NodeId w : g.neighbors(*pick)) {
      if (!active[w] || color[w] != Color::White) continue;
      color[w] = Color::Grey;
      --white_left;
      for (NodeId x : g.neighbors(w)) grey_count[x] += active[x] ? 1 : 0;
    }
  }
  if (coloring) *coloring = std::move(color);
  return make_node_set(std::move(mis));
}

// Joins every pair of `anchors` within `cost.pair_hop_threshold` hops by the
// cheapest path of at most that many hops, in ascending (hops, u, v) order.
inline ConnectionResult connect_pairs(const RatedGraph& g, const NodeSet& anchors, NodeSet dominators,
                                      const CostConfig& cost) {
  std::vector<std::tuple<std::size_t, NodeId, NodeId>> order;
  const auto is_anchor = membership(g.size(), anchors);
  for (NodeId u : anchors) {
    const auto dist = bfs_distances(g.graph(), u, cost.pair_hop_threshold);
    for (NodeId v = u + 1; v < g.size(); ++v)
      if (is_anchor[v] && dist[v] != kUnreachable) order.emplace_back(dist[v], u, v);
  }
  std::sort(order.begin(), order.end());

  auto in_set = membership(g.size(), set_union(dominators, anchors));
  ConnectionResult out;
  auto edge_cost = [&](NodeId a, NodeId b) { return cost.edge_cost(g, a, b); };
  for (auto [hops, u, v] : order) {
    auto path = shortest_path(g.graph(), u, v, edge_cost, cost.pair_hop_threshold);
    if (!path) continue;
    for (NodeId x : path->nodes) in_set[x] = 1;
    const double uc = uncertainty_cost(g, path->nodes);
    out.pairs.push_back(ConnectedPair{u, v, hops, std::move(*path), uc});
  }
  out.dominators = from_membership(in_set);
  return out;
}

// Multi-source BFS from `sources` whose interior vertices must satisfy
// `may_pass`, stopping at the first vertex satisfying `is_target`. Returns
// the path (source first). Sources are expanded in ascending id order and
// neighbour lists are sorted, so the result is deterministic.
template <class Pass, class Target>
std::optional<std::vector<NodeId>> bfs_path(const Graph& g, const NodeSet& sources, const Pass& may_pass,
                                            const Target& is_target) {
  constexpr NodeId kNoParent = ~NodeId{0};
  std::vector<NodeId> parent(g.size(), kNoParent);
  std::vector<char> seen(g.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    seen[s] = 1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(x)) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = x;
      if (is_target(w)) {
        std::vector<NodeId> path{w};
        for (NodeId at = x; at != kNoParent; at = parent[at]) path.push_back(at);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (may_pass(w)) queue.push_back(w);
    }
  }
  return std::nullopt;
}

struct SeparationProfile {
  NodeSet bad;
  std::size_t separating_pairs = 0;
};

// Cut vertices of g - skip found by an iterative low-point search over the
// original adjacency; nullopt when g - skip is disconnected.
class MaskedCutCounter {
 public:
  std::optional<std::size_t> count(const Graph& g, NodeId skip) {
    const std::size_t n = g.size();
    disc_.assign(n, kNone);
    low_.assign(n, 0);
    parent_.assign(n, 0);
    next_.assign(n, 0);
    is_cut_.assign(n, 0);
    const NodeId root = skip == 0 ? 1 : 0;
    std::size_t time = 0, root_children = 0;
    disc_[root] = low_[root] = time++;
    stack_.assign(1, root);
    while (!stack_.empty()) {
      const NodeId x = stack_.back();
      const auto nbrs = g.neighbors(x);
      if (next_[x] < nbrs.size()) {
        const NodeId w = nbrs[next_[x]++];
        if (w == skip) continue;
        if (disc_[w] == kNone) {
          parent_[w] = x;
          disc_[w] = low_[w] = time++;
          stack_.push_back(w);
          if (x == root) ++root_children;
        } else if (w != parent_[x]) {
          low_[x] = std::min(low_[x], disc_[w]);
        }
        continue;
      }
      stack_.pop_back();
      if (x == root) continue;
      const NodeId p = parent_[x];
      low_[p] = std::min(low_[p], low_[x]);
      if (p != root && low_[x] >= disc_[p]) is_cut_[p] = 1;
    }
    if (time != n - 1) return std::nullopt;
    if (root_children >= 2) is_cut_[root] = 1;
    return static_cast<std::size_t>(std::count(is_cut_.begin(), is_cut_.end(), 1));
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> disc_, low_, next_;
  std::vector<NodeId> parent_, stack_;
  std::vector<char> is_cut_;
};

// Bad points of a 2-connected graph, plus the number of (v, w) with w a cut
// vertex of G - v.
inline SeparationProfile separation_profile(const Graph& g) {
  SeparationProfile p;
  MaskedCutCounter counter;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (g.size() < 4) {
      p.bad.push_back(v);
      continue;
    }
    const auto cuts = counter.count(g, v);
    if (!cuts || *cuts > 0) p.bad.push_back(v);
    if (cuts) p.separating_pairs += *cuts;
  }
  return p;
}

inline bool induced_biconnected(const Graph& g, const NodeSet& nodes) {
  return is_biconnected(induced_subgraph(g, nodes).graph);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rounds
// ---------------------------------------------------------------------------

inline NodeColoring round1_mis(const Graph& g) {
  if (g.size() == 0 || !is_connected(g)) throw DisconnectedInput("round1_mis: graph must be connected and non-empty");
  NodeColoring coloring;
  detail::greedy_mis(g, std::vector<char>(g.size(), 1), &coloring);
  return coloring;
}

inline NodeSet black_nodes(const NodeColoring& coloring) {
  NodeSet out;
  for (NodeId v = 0; v < coloring.size(); ++v)
    if (coloring[v] == Color::Black) out.push_back(v);
  return out;
}

inline ConnectionResult round2_connect(const RatedGraph& g, const NodeColoring& coloring, const CostConfig& cost) {
  const NodeSet mis = black_nodes(coloring);
  return detail::connect_pairs(g, mis, mis, cost);
}

struct KDominationResult {
  NodeSet dominators;
  std::vector<NodeSet> layers;  // M_2 .. M_k
};

// Adds MIS layers M_2..M_k, each built with the earlier layers removed, and
// reconnects each layer's pairs the way Round 2 does.
inline KDominationResult round3_k_dominate(const RatedGraph& g, const NodeSet& dominators, const NodeSet& first_mis,
                                           std::size_t k, const CostConfig& cost) {
  if (k < 1 || k > 3) throw std::invalid_argument("round3_k_dominate: k must be in 1..3");
  KDominationResult out{dominators, {}};
  std::vector<char> active(g.size(), 1);
  for (NodeId v : first_mis) active[v] = 0;
  for (std::size_t i = 2; i <= k; ++i) {
    NodeSet layer = detail::greedy_mis(g.graph(), active);
    for (NodeId v : layer) active[v] = 0;
    out.dominators = detail::connect_pairs(g, layer, set_union(out.dominators, layer), cost).dominators;
    out.layers.push_back(std::move(layer));
  }
  return out;
}

// Grows D until its induced subgraph is 2-connected by repeatedly adding the
// interior of a shortest path that leaves a leaf block and re-enters D
// elsewhere, with no dominator in its interior.
inline NodeSet round4_biconnect(const Graph& g, NodeSet dominators) {
  if (!is_biconnected(g)) throw InfeasibleConnectivity("round4_biconnect: host graph is not 2-connected");
  if (dominators.empty() || !is_connected(induced_subgraph(g, dominators).graph))
    throw DisconnectedInput("round4_biconnect: dominators must induce a connected subgraph");

  auto in_set = membership(g.size(), dominators);
  auto outside = [&](NodeId v) { return in_set[v] == 0; };
  auto add_interior = [&](const std::vector<NodeId>& path) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) in_set[path[i]] = 1;
    dominators = from_membership(in_set);
  };

  while (!detail::induced_biconnected(g, dominators)) {
    if (dominators.size() == 1) {
      // Grow a single dominator into an edge; the two-vertex case follows.
      in_set[g.neighbors(dominators[0]).front()] = 1;
      dominators = from_membership(in_set);
      continue;
    }
    if (dominators.size() == 2) {
      const NodeId a = dominators[0], b = dominators[1];
      // Shortest a-b path other than the edge itself.
      std::optional<std::vector<NodeId>> best;
      for (NodeId first : g.neighbors(a)) {
        if (in_set[first]) continue;
        auto tail = detail::bfs_path(
            g, {first}, [&](NodeId v) { return outside(v) && v != a; }, [&](NodeId v) { return v == b; });
        if (!tail) continue;
        tail->insert(tail->begin(), a);
        if (!best || tail->size() < best->size()) best = std::move(tail);
      }
      if (!best) throw InfeasibleConnectivity("round4_biconnect: no cycle through the dominators");
      add_interior(*best);
      continue;
    }

    const auto sub = induced_subgraph(g, dominators);
    const auto blocks = block_decomposition(sub.graph);
    std::optional<std::vector<NodeId>> best;
    for (std::size_t b : blocks.leaf_blocks) {
      std::vector<char> in_block(g.size(), 0);
      NodeSet sources;
      for (NodeId local : blocks.blocks[b]) {
        const NodeId v = sub.to_parent[local];
        in_block[v] = 1;
        if (!contains(blocks.cut_vertices, local)) sources.push_back(v);
      }
      auto path = detail::bfs_path(g, sources, outside, [&](NodeId v) { return in_set[v] && !in_block[v]; });
      if (path && (!best || path->size() < best->size())) best = std::move(path);
    }
    if (!best) throw InfeasibleConnectivity("round4_biconnect: no augmenting path from a leaf block");
    add_interior(*best);
  }
  return dominators;
}

// Eliminates bad points of a 2-connected D. Each step adds the outside vertex
// that removes the most bad points (ties: fewer separating pairs, then
// smaller id). When no single vertex helps, the smallest bad point t and the
// smallest cut vertex w of D - t are split apart by adding a shortest
// dominator-free path joining two components of D - {t, w}. Falls back to
// D = V if neither move exists.
inline Round5Result round5_triconnect(const Graph& g, NodeSet dominators) {
  if (g.size() < 4 || vertex_connectivity(g, 3) < 3)
    throw InfeasibleConnectivity("round5_triconnect: host graph is not 3-connected");
  if (!detail::induced_biconnected(g, dominators))
    throw NotBiconnectedInput("round5_triconnect: dominators must induce a 2-connected subgraph");

  Round5Result out;
  auto in_set = membership(g.size(), dominators);
  while (true) {
    const auto sub = induced_subgraph(g, dominators);
    const auto profile = detail::separation_profile(sub.graph);
    if (profile.bad.empty()) break;

    // Single-vertex move.
    std::optional<std::tuple<std::size_t, std::size_t, NodeId>> best;
    for (NodeId c = 0; c < g.size(); ++c) {
      if (in_set[c] || dominator_neighbors(g, in_set, c) < 2) continue;
      NodeSet trial = dominators;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), c), c);
      const auto p = detail::separation_profile(induced_subgraph(g, trial).graph);
      if (p.bad.size() >= profile.bad.size()) continue;
      const auto key = std::tuple{p.bad.size(), p.separating_pairs, c};
      if (!best || key < *best) best = key;
    }
    if (best) {
      in_set[std::get<2>(*best)] = 1;
      dominators = from_membership(in_set);
      ++out.single_moves;
      continue;
    }

    // Path move around the separating pair {t, w}.
    const NodeId t_local = profile.bad.front();
    const Graph rest = without_vertex(sub.graph, t_local);
    const NodeId t = sub.to_parent[t_local];
    std::optional<NodeId> w;
    if (rest.size() >= 3) {
      const auto cuts = cut_vertices(rest);
      if (!cuts.empty()) w = sub.to_parent[cuts.front() >= t_local ? cuts.front() + 1 : cuts.front()];
    }
    std::optional<std::vector<NodeId>> path;
    if (w) {
      NodeSet remaining;
      for (NodeId v : dominators)
        if (v != t && v != *w) remaining.push_back(v);
      const auto pieces = induced_subgraph(g, remaining);
      const auto components = connected_components(pieces.graph);
      std::vector<char> in_first(g.size(), 0);
      NodeSet sources;
      for (NodeId local : components.front()) {
        in_first[pieces.to_parent[local]] = 1;
        sources.push_back(pieces.to_parent[local]);
      }
      path = detail::bfs_path(
          g, sources, [&](NodeId v) { return !in_set[v]; },
          [&](NodeId v) { return in_set[v] && !in_first[v] && v != t && v != *w; });
    }
    if (path && path->size() > 2) {
      for (std::size_t i = 1; i + 1 < path->size(); ++i) in_set[(*path)[i]] = 1;
      dominators = from_membership(in_set);
      ++out.path_moves;
      continue;
    }

    out.fell_back = true;
    std::fill(in_set.begin(), in_set.end(), 1);
    dominators = from_membership(in_set);
    break;
  }
  out.dominators = std::move(dominators);
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

// Smallest number of dominator neighbours over vertices outside D; `fallback`
// when D covers every vertex.
inline std::size_t domination_level(const Graph& g, const NodeSet& dominators, std::size_t fallback) {
  const auto in_set = membership(g.size(), dominators);
  std::optional<std::size_t> level;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (in_set[v]) continue;
    const auto d = dominator_neighbors(g, in_set, v);
    level = level ? std::min(*level, d) : d;
  }
  return level.value_or(fallback);
}

inline BackboneSolution avido(const RatedGraph& g, std::size_t m, std::size_t k, const CostConfig& cost = {}) {
  if (m < 1 || m > 3 || k < 1 || k > 3) throw std::invalid_argument("avido: m and k must be in 1..3");
  const Graph& topo = g.graph();
  if (topo.size() == 0 || !is_connected(topo)) throw DisconnectedInput("avido: host graph must be connected");
  if (m > 1 && (topo.size() < 2 || vertex_connectivity(topo, m) < m))
    throw InfeasibleConnectivity("avido: host graph connectivity is below m");

  BackboneSolution sol;
  const auto coloring = round1_mis(topo);
  sol.first_mis = black_nodes(coloring);
  sol.round_outputs.push_back(sol.first_mis);

  auto connection = round2_connect(g, coloring, cost);
  NodeSet dominators = std::move(connection.dominators);
  sol.pairs = std::move(connection.pairs);
  sol.round_outputs.push_back(dominators);

  if (k >= 2) {
    dominators = round3_k_dominate(g, dominators, sol.first_mis, k, cost).dominators;
    sol.round_outputs.push_back(dominators);
  }
  if (m >= 2) {
    dominators = round4_biconnect(topo, std::move(dominators));
    sol.round_outputs.push_back(dominators);
  }
  if (m >= 3) {
    auto r5 = round5_triconnect(topo, std::move(dominators));
    dominators = std::move(r5.dominators);
    sol.round5_fell_back = r5.fell_back;
    sol.round_outputs.push_back(dominators);
  }

  const auto cert = certify_backbone(topo, dominators, 1, 1);
  sol.m_achieved = cert.induced_connectivity;
  sol.k_achieved = domination_level(topo, dominators, k);
  sol.size = dominators.size();
  for (const auto& p : sol.pairs) sol.max_pair_cost = std::max(sol.max_pair_cost, p.uncertainty_cost);
  sol.mean_rate = mean_best_rate(g, dominators);
  sol.dominators = std::move(dominators);
  return sol;
}

}  // namespace rbb
