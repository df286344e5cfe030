#pragma once

// Decomposition-based multi-objective refinement of backbones. Each
// subproblem scalarises the objective vector with a weight vector, is seeded
// by a greedy backbone, and improves by recombining the bests of its
// neighbouring subproblems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rbb/avido.hpp"
#include "rbb/errors.hpp"
#include "rbb/graph.hpp"
#include "rbb/graph_props.hpp"
#include "rbb/rng.hpp"

namespace rbb {

// Objective order: f_rate (mean best dominator-link rate of dominatees),
// f_compact (1 - |D| / n). Both are maximised.
using ObjectiveVector = std::vector<double>;
inline constexpr std::size_t kObjectiveCount = 2;
inline constexpr std::size_t kRateObjective = 0;
inline constexpr std::size_t kCompactObjective = 1;

// Node-membership bit vector: bit i set iff vertex i is a dominator.
struct Genome {
  std::vector<char> bits;

  static Genome from_set(std::size_t n, const NodeSet& dominators) { return Genome{membership(n, dominators)}; }

  NodeSet dominators() const { return from_membership(bits); }
  std::size_t size() const { return bits.size(); }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

  bool operator==(const Genome&) const = default;
};

struct GenesisConfig {
  std::size_t subproblems = 2;  // L
  std::size_t neighborhood = 2;  // T
  std::size_t generations = 50;
  double crossover_probability = 0.8;
  double mutation_probability = 0.001;
  std::uint64_t seed = 0;

  void validate() const {
    if (subproblems < 1) throw std::invalid_argument("GenesisConfig: need at least one subproblem");
    if (neighborhood < 1 || neighborhood > subproblems)
      throw std::invalid_argument("GenesisConfig: neighborhood size must be in 1..subproblems");
    for (double p : {crossover_probability, mutation_probability})
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("GenesisConfig: probabilities must lie in [0, 1]");
  }
};

struct Subproblem {
  std::vector<double> weight;
  std::vector<std::size_t> neighbors;  // self first, then by distance
  Genome best;
  ObjectiveVector best_objectives;
  double best_score = 0.0;
};

struct ArchiveEntry {
  Genome genome;
  ObjectiveVector objectives;
};

// a dominates b: a >= b componentwise with at least one strict >.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dominates: objective vectors differ in length");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    strict = strict || a[i] > b[i];
  }
  return strict;
}

class ParetoArchive {
 public:
  // Inserts the candidate unless a member dominates it or already has the
  // same objective vector; evicts members the candidate dominates. Returns
  // whether the candidate was inserted.
  bool insert(ArchiveEntry candidate) {
    for (const auto& e : entries_)
      if (dominates(e.objectives, candidate.objectives) || e.objectives == candidate.objectives) return false;
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(candidate.objectives, e.objectives); });
    entries_.push_back(std::move(candidate));
    return true;
  }

  const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Exhaustive pairwise check of mutual non-domination.
  bool is_mutually_nondominated() const {
    for (const auto& a : entries_)
      for (const auto& b : entries_)
        if (&a != &b && dominates(a.objectives, b.objectives)) return false;
    return true;
  }

 private:
  std::vector<ArchiveEntry> entries_;
};

inline bool update_archive(ParetoArchive& archive, ArchiveEntry candidate) {
  return archive.insert(std::move(candidate));
}

// ---------------------------------------------------------------------------
// Objectives and scalarisation
// ---------------------------------------------------------------------------

inline ObjectiveVector evaluate(const RatedGraph& g, const Genome& genome, std::size_t m, std::size_t k) {
  if (genome.size() != g.size()) throw DimensionMismatch("evaluate: genome length differs from vertex count");
  const NodeSet dominators = genome.dominators();
  if (!is_backbone(g.graph(), dominators, m, k)) throw InfeasibleGenome("evaluate: genome is not a certified backbone");
  const double compact = 1.0 - static_cast<double>(dominators.size()) / static_cast<double>(g.size());
  return {mean_best_rate(g, dominators), compact};
}

inline double weighted_sum(const std::vector<double>& weight, const ObjectiveVector& f) {
  if (weight.size() != f.size()) throw DimensionMismatch("weighted_sum: weight and objective lengths differ");
  return std::inner_product(weight.begin(), weight.end(), f.begin(), 0.0);
}

// (sum_i w_i f_i)^2 / |D|^2; secondary key when weighted sums tie.
inline double improvement_score(const std::vector<double>& weight, const ObjectiveVector& f, std::size_t dominator_count) {
  if (dominator_count == 0) throw std::invalid_argument("improvement_score: dominator count must be >= 1");
  const double s = weighted_sum(weight, f);
  const double d = static_cast<double>(dominator_count);
  return (s * s) / (d * d);
}

// Weights spread evenly over the 2-simplex, neighbourhoods by Euclidean
// distance between weight vectors (ties to lower index). A single
// subproblem gets the midpoint (0.5, 0.5).
inline std::vector<Subproblem> init_subproblems(std::size_t count, std::size_t neighborhood) {
  if (count < 1) throw std::invalid_argument("init_subproblems: need at least one subproblem");
  if (neighborhood < 1 || neighborhood > count)
    throw std::invalid_argument("init_subproblems: neighborhood size must be in 1..count");
  std::vector<Subproblem> subs(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (count == 1) {
      subs[j].weight = {0.5, 0.5};
    } else {
      const double span = static_cast<double>(count - 1);
      subs[j].weight = {static_cast<double>(count - 1 - j) / span, static_cast<double>(j) / span};
    }
  }
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto dist = [&](std::size_t o) {
      double s = 0.0;
      for (std::size_t i = 0; i < kObjectiveCount; ++i) {
        const double d = subs[j].weight[i] - subs[o].weight[i];
        s += d * d;
      }
      return s;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (a == j || b == j) return a == j && b != j;
      return dist(a) < dist(b);
    });
    subs[j].neighbors.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(neighborhood));
  }
  return subs;
}

// Seeds every subproblem with a greedy backbone: rate-leaning weights use the
// uncertainty cost, compactness-leaning weights do not. Returns the seeds.
inline std::vector<BackboneSolution> seed_population(const RatedGraph& g, std::size_t m, std::size_t k,
                                                     std::vector<Subproblem>& subproblems) {
  std::vector<BackboneSolution> seeds;
  std::optional<BackboneSolution> with_cost, without_cost;
  for (auto& sub : subproblems) {
    const bool rate_leaning = sub.weight[kRateObjective] >= sub.weight[kCompactObjective];
    auto& cached = rate_leaning ? with_cost : without_cost;
    if (!cached) cached = avido(g, m, k, CostConfig{rate_leaning, 4});
    seeds.push_back(*cached);
    sub.best = Genome::from_set(g.size(), cached->dominators);
    sub.best_objectives = evaluate(g, sub.best, m, k);
    sub.best_score = weighted_sum(sub.weight, sub.best_objectives);
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Variation and repair
// ---------------------------------------------------------------------------

inline Genome crossover_mutate(const Genome& parent_a, const Genome& parent_b, const GenesisConfig& cfg, Rng& rng) {
  if (parent_a.size() != parent_b.size()) throw DimensionMismatch("crossover_mutate: parent lengths differ");
  Genome child = parent_a;
  if (rng.bernoulli(cfg.crossover_probability))
    for (std::size_t i = 0; i < child.size(); ++i) child.bits[i] = rng.bernoulli(0.5) ? parent_a.bits[i] : parent_b.bits[i];
  for (auto& bit : child.bits)
    if (rng.bernoulli(cfg.mutation_probability)) bit = bit ? 0 : 1;
  return child;
}

// Returns a certified (m, k) backbone containing the genome's dominators:
// greedy additions restore k-domination, shortest paths reconnect the
// components, then the leaf-block and bad-point rounds lift connectivity.
inline Genome repair(const RatedGraph& g, const Genome& genome, std::size_t m, std::size_t k) {
  if (genome.size() != g.size()) throw DimensionMismatch("repair: genome length differs from vertex count");
  const Graph& topo = g.graph();
  const std::size_t n = topo.size();
  NodeSet dominators = genome.dominators();
  if (is_backbone(topo, dominators, m, k)) return genome;

  const bool host_ok = n == 1 ? m <= 1 : is_connected(topo) && (m <= 1 || vertex_connectivity(topo, m) >= m);
  if (!host_ok) throw IrreparableGenome("repair: host graph connectivity is below m");

  std::vector<char> in_set = genome.bits;
  auto deficient = [&](NodeId v) { return !in_set[v] && dominator_neighbors(topo, in_set, v) < k; };

  // k-domination: add the outside vertex covering the most deficient vertices.
  while (true) {
    std::optional<std::pair<std::size_t, NodeId>> best;
    for (NodeId c = 0; c < n; ++c) {
      if (in_set[c]) continue;
      std::size_t covers = deficient(c) ? 1 : 0;
      for (NodeId w : topo.neighbors(c)) covers += deficient(w) ? 1 : 0;
      if (covers > 0 && (!best || covers > best->first)) best = std::pair{covers, c};
    }
    if (!best) break;
    in_set[best->second] = 1;
  }

  // Connectivity: join the component holding the smallest dominator to the
  // nearest other component until one remains.
  while (true) {
    dominators = from_membership(in_set);
    const auto sub = induced_subgraph(topo, dominators);
    const auto comps = connected_components(sub.graph);
    if (comps.size() <= 1) break;
    std::vector<char> in_first(n, 0);
    NodeSet sources;
    for (NodeId local : comps.front()) {
      in_first[sub.to_parent[local]] = 1;
      sources.push_back(sub.to_parent[local]);
    }
    auto path = detail::bfs_path(
        topo, sources, [&](NodeId v) { return !in_set[v]; }, [&](NodeId v) { return in_set[v] && !in_first[v]; });
    if (!path) throw IrreparableGenome("repair: dominator components cannot be joined");
    for (NodeId v : *path) in_set[v] = 1;
  }

  try {
    if (m >= 2) dominators = round4_biconnect(topo, std::move(dominators));
    if (m >= 3) dominators = round5_triconnect(topo, std::move(dominators)).dominators;
  } catch (const InfeasibleConnectivity& e) {
    throw IrreparableGenome(std::string("repair: ") + e.what());
  }
  if (!is_backbone(topo, dominators, m, k)) throw IrreparableGenome("repair: result failed certification");
  return Genome::from_set(n, dominators);
}

// Offers the child to every neighbour of subproblem `emitter`. A neighbour
// adopts it on a strictly higher weighted sum, or on an equal sum with a
// strictly higher improvement score. Returns the number of adoptions.
inline std::size_t update_neighbors(std::vector<Subproblem>& subproblems, std::size_t emitter, const Genome& child,
                                    const ObjectiveVector& child_objectives) {
  std::size_t replaced = 0;
  const std::size_t child_count = child.count();
  for (std::size_t j : subproblems.at(emitter).neighbors) {
    auto& sub = subproblems[j];
    const double score = weighted_sum(sub.weight, child_objectives);
    bool adopt = score > sub.best_score;
    if (!adopt && score == sub.best_score)
      adopt = improvement_score(sub.weight, child_objectives, child_count) >
              improvement_score(sub.weight, sub.best_objectives, sub.best.count());
    if (!adopt) continue;
    sub.best = child;
    sub.best_objectives = child_objectives;
    sub.best_score = score;
    ++replaced;
  }
  return replaced;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct GenesisResult {
  ParetoArchive archive;
  std::vector<Subproblem> subproblems;
  std::vector<BackboneSolution> seeds;
  std::vector<double> seed_scores;
  // best_score_history[g][j]: best score of subproblem j after generation g
  // (row 0 is the seeded state).
  std::vector<std::vector<double>> best_score_history;
  std::size_t children = 0;
  std::size_t adoptions = 0;
};

// Called after every archive insertion attempt.
using GenesisObserver = std::function<void(const ParetoArchive&, const std::vector<Subproblem>&)>;

inline GenesisResult genesis(const RatedGraph& g, std::size_t m, std::size_t k, const GenesisConfig& cfg,
                             const GenesisObserver& observer = {}) {
  cfg.validate();
  GenesisResult out;
  out.subproblems = init_subproblems(cfg.subproblems, cfg.neighborhood);
  out.seeds = seed_population(g, m, k, out.subproblems);

  auto offer = [&](const Genome& genome, const ObjectiveVector& f) {
    update_archive(out.archive, ArchiveEntry{genome, f});
    if (observer) observer(out.archive, out.subproblems);
  };
  auto snapshot = [&] {
    std::vector<double> row;
    for (const auto& sub : out.subproblems) row.push_back(sub.best_score);
    out.best_score_history.push_back(std::move(row));
  };

  for (const auto& sub : out.subproblems) {
    out.seed_scores.push_back(sub.best_score);
    offer(sub.best, sub.best_objectives);
  }
  snapshot();

  Rng rng(cfg.seed);
  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    for (std::size_t i = 0; i < out.subproblems.size(); ++i) {
      const auto& nbrs = out.subproblems[i].neighbors;
      const Genome& parent_a = out.subproblems[i].best;
      const std::size_t other = nbrs.size() > 1 ? nbrs[1 + rng.below(nbrs.size() - 1)] : i;
      const Genome& parent_b = out.subproblems[other].best;
      const Genome child = repair(g, crossover_mutate(parent_a, parent_b, cfg, rng), m, k);
      const ObjectiveVector f = evaluate(g, child, m, k);
      ++out.children;
      out.adoptions += update_neighbors(out.subproblems, i, child, f);
      offer(child, f);
    }
    snapshot();
  }
  return out;
}

// Archive member with the highest f_rate (ties: higher f_compact).
inline const ArchiveEntry& best_rate_member(const ParetoArchive& archive) {
  if (archive.empty()) throw std::invalid_argument("best_rate_member: empty archive");
  return *std::max_element(archive.entries().begin(), archive.entries().end(),
                           [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.objectives < b.objectives; });
}

}  // namespace rbb
