#include <gtest/gtest.h>

#include <cmath>

#include "rbb/genesis.hpp"
#include "rbb/udg.hpp"

using namespace rbb;

namespace {

Graph path(std::size_t n) {
  Graph g(n);
  for (NodeId v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph complete(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

UnitDiskGraph instance(std::size_t n, double range, std::uint64_t seed, std::size_t connectivity = 1) {
  InstanceSpec spec;
  spec.n = n;
  spec.range = range;
  spec.seed = seed;
  spec.connectivity_requirement = connectivity;
  return generate_instance(spec);
}

ArchiveEntry entry(double rate, double compact) { return ArchiveEntry{Genome{}, {rate, compact}}; }

Subproblem subproblem(std::vector<double> weight, std::vector<std::size_t> nbrs, const Genome& best,
                      ObjectiveVector f) {
  Subproblem s;
  s.weight = std::move(weight);
  s.neighbors = std::move(nbrs);
  s.best = best;
  s.best_objectives = f;
  s.best_score = weighted_sum(s.weight, f);
  return s;
}

}  // namespace

TEST(Evaluate, StarWithUniformRates) {
  Graph s(5);
  for (NodeId v = 1; v < 5; ++v) s.add_edge(0, v);
  RatedGraph g(s, 0.5);
  const auto f = evaluate(g, Genome::from_set(5, {0}), 1, 1);
  EXPECT_DOUBLE_EQ(f[kRateObjective], 0.5);
  EXPECT_DOUBLE_EQ(f[kCompactObjective], 0.8);
}

TEST(Evaluate, PathOfFive) {
  RatedGraph g(path(5), 0.0);
  g.set_rate(0, 1, 0.3);
  g.set_rate(3, 4, 0.7);
  const auto f = evaluate(g, Genome::from_set(5, {1, 2, 3}), 1, 1);
  EXPECT_DOUBLE_EQ(f[kRateObjective], 0.5);
  EXPECT_DOUBLE_EQ(f[kCompactObjective], 0.4);
}

TEST(Evaluate, WholeVertexSetAndErrors) {
  RatedGraph g(path(5));
  EXPECT_EQ(evaluate(g, Genome::from_set(5, {0, 1, 2, 3, 4}), 1, 1), (ObjectiveVector{1.0, 0.0}));
  EXPECT_THROW(evaluate(g, Genome::from_set(5, {0, 4}), 1, 1), InfeasibleGenome);
  EXPECT_THROW(evaluate(g, Genome::from_set(4, {0}), 1, 1), DimensionMismatch);
}

TEST(WeightedSum, Examples) {
  const ObjectiveVector f{0.6, 0.4};
  EXPECT_EQ(weighted_sum({1, 0}, f), 0.6);
  EXPECT_EQ(weighted_sum({0, 1}, f), 0.4);
  EXPECT_DOUBLE_EQ(weighted_sum({0.5, 0.5}, f), 0.5);
  EXPECT_THROW(weighted_sum({1}, f), DimensionMismatch);
}

TEST(InitSubproblems, TwoSubproblems) {
  const auto subs = init_subproblems(2, 2);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_EQ(subs[0].weight, (std::vector<double>{1, 0}));
  EXPECT_EQ(subs[1].weight, (std::vector<double>{0, 1}));
  EXPECT_EQ(subs[0].neighbors, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(subs[1].neighbors, (std::vector<std::size_t>{1, 0}));
}

TEST(InitSubproblems, ThreeAndOne) {
  const auto three = init_subproblems(3, 2);
  EXPECT_EQ(three[0].weight, (std::vector<double>{1, 0}));
  EXPECT_EQ(three[1].weight, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(three[2].weight, (std::vector<double>{0, 1}));
  EXPECT_EQ(three[0].neighbors, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(three[2].neighbors, (std::vector<std::size_t>{2, 1}));
  // Both ends are equidistant from the middle; the lower index wins.
  EXPECT_EQ(three[1].neighbors, (std::vector<std::size_t>{1, 0}));

  const auto one = init_subproblems(1, 1);
  EXPECT_EQ(one[0].weight, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(one[0].neighbors, (std::vector<std::size_t>{0}));

  EXPECT_THROW(init_subproblems(0, 0), std::invalid_argument);
  EXPECT_THROW(init_subproblems(2, 3), std::invalid_argument);
}

TEST(SeedPopulation, TwoSubproblemsUseBothCostSettings) {
  const auto g = instance(60, 25, 3);
  auto subs = init_subproblems(2, 2);
  const auto seeds = seed_population(g, 1, 1, subs);
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(seeds[0].dominators, avido(g, 1, 1, CostConfig{true}).dominators);
  EXPECT_EQ(seeds[1].dominators, avido(g, 1, 1, CostConfig{false}).dominators);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(subs[j].best, Genome::from_set(g.size(), seeds[j].dominators));
    EXPECT_EQ(subs[j].best_score, weighted_sum(subs[j].weight, subs[j].best_objectives));
  }
}

TEST(SeedPopulation, SingleSubproblemUsesCost) {
  const auto g = instance(50, 25, 8);
  auto subs = init_subproblems(1, 1);
  const auto seeds = seed_population(g, 1, 2, subs);
  ASSERT_EQ(seeds.size(), 1u);
  EXPECT_EQ(seeds[0].dominators, avido(g, 1, 2, CostConfig{true}).dominators);
}

TEST(SeedPopulation, Deterministic) {
  const auto g = instance(60, 25, 5, 2);
  auto a = init_subproblems(2, 2);
  auto b = init_subproblems(2, 2);
  seed_population(g, 2, 2, a);
  seed_population(g, 2, 2, b);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(a[j].best, b[j].best);
    EXPECT_EQ(a[j].best_score, b[j].best_score);
  }
}

TEST(CrossoverMutate, IdentityCases) {
  Rng rng(1);
  Genome a{{1, 0, 1, 1, 0, 0, 1, 0}};
  Genome b{{0, 1, 0, 0, 1, 1, 0, 1}};
  GenesisConfig none;
  none.crossover_probability = 0;
  none.mutation_probability = 0;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(crossover_mutate(a, b, none, rng), a);
  GenesisConfig always;
  always.crossover_probability = 1;
  always.mutation_probability = 0;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(crossover_mutate(a, a, always, rng), a);
  EXPECT_THROW(crossover_mutate(a, Genome{{1}}, none, rng), DimensionMismatch);
}

TEST(CrossoverMutate, UniformCrossoverTakesEachBitFromAParent) {
  Rng rng(2);
  Genome a{std::vector<char>(64, 1)};
  Genome b{std::vector<char>(64, 0)};
  GenesisConfig cfg;
  cfg.crossover_probability = 1;
  cfg.mutation_probability = 0;
  std::size_t ones = 0;
  for (int i = 0; i < 200; ++i) ones += crossover_mutate(a, b, cfg, rng).count();
  EXPECT_NEAR(static_cast<double>(ones) / (200 * 64), 0.5, 0.03);
}

TEST(CrossoverMutate, MutationFlipCountIsBinomial) {
  Rng rng(3);
  Genome parent{std::vector<char>(100, 0)};
  GenesisConfig cfg;
  cfg.crossover_probability = 0;
  cfg.mutation_probability = 0.001;
  const int children = 10000;
  std::size_t flips = 0;
  for (int i = 0; i < children; ++i) flips += crossover_mutate(parent, parent, cfg, rng).count();
  const double mean = static_cast<double>(flips) / children;
  const double sigma = std::sqrt(100 * 0.001 * 0.999 / children);
  EXPECT_LE(std::abs(mean - 0.1), 3 * sigma) << mean;
}

TEST(Repair, FeasibleGenomeIsFixpoint) {
  RatedGraph g(path(5));
  const auto genome = Genome::from_set(5, {1, 2, 3});
  EXPECT_EQ(repair(g, genome, 1, 1), genome);
}

TEST(Repair, EmptyGenomeOnCompleteGraph) {
  RatedGraph g(complete(4));
  const auto fixed = repair(g, Genome::from_set(4, {}), 1, 1);
  EXPECT_EQ(fixed.count(), 1u);
  EXPECT_TRUE(is_backbone(g.graph(), fixed.dominators(), 1, 1));
}

TEST(Repair, AllOnesIsFeasibleWhenHostIsConnectedEnough) {
  const auto g = instance(40, 35, 2, 3);
  const Genome all{std::vector<char>(40, 1)};
  for (std::size_t m = 1; m <= 3; ++m) EXPECT_EQ(repair(g, all, m, 3), all);
}

TEST(Repair, RandomGenomesBecomeCertifiedSupersets) {
  const auto g = instance(50, 30, 6, 3);
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Genome genome{std::vector<char>(50, 0)};
    for (auto& bit : genome.bits) bit = rng.bernoulli(0.15) ? 1 : 0;
    const std::size_t m = 1 + trial % 3, k = 1 + (trial / 3) % 3;
    const auto fixed = repair(g, genome, m, k);
    EXPECT_TRUE(is_backbone(g.graph(), fixed.dominators(), m, k));
    EXPECT_TRUE(includes(fixed.dominators(), genome.dominators()));
  }
}

TEST(Repair, IrreparableWhenHostTooWeak) {
  RatedGraph g(path(4));
  EXPECT_THROW(repair(g, Genome::from_set(4, {}), 2, 1), IrreparableGenome);
  EXPECT_THROW(repair(RatedGraph(Graph(3, {{0, 1}})), Genome::from_set(3, {}), 1, 1), IrreparableGenome);
}

TEST(ImprovementScore, Examples) {
  EXPECT_DOUBLE_EQ(improvement_score({1, 0}, {0.5, 0.3}, 5), 0.01);
  EXPECT_EQ(improvement_score({0.5, 0.5}, {0, 0}, 3), 0.0);
  const ObjectiveVector f{0.7, 0.2};
  EXPECT_DOUBLE_EQ(improvement_score({0.5, 0.5}, f, 3), 4 * improvement_score({0.5, 0.5}, f, 6));
  EXPECT_THROW(improvement_score({1, 0}, f, 0), std::invalid_argument);
}

TEST(UpdateNeighbors, WorseChildChangesNothing) {
  const Genome old = Genome::from_set(4, {0, 1});
  std::vector<Subproblem> subs{subproblem({1, 0}, {0, 1}, old, {0.6, 0.5}),
                               subproblem({0, 1}, {1, 0}, old, {0.6, 0.5})};
  EXPECT_EQ(update_neighbors(subs, 0, Genome::from_set(4, {0, 1, 2}), {0.4, 0.25}), 0u);
  EXPECT_EQ(subs[0].best, old);
  EXPECT_EQ(subs[1].best, old);
}

TEST(UpdateNeighbors, ChildBetterOnOneNeighbor) {
  const Genome old = Genome::from_set(4, {0, 1});
  const Genome child = Genome::from_set(4, {0, 1, 2});
  std::vector<Subproblem> subs{subproblem({1, 0}, {0, 1}, old, {0.6, 0.5}),
                               subproblem({0, 1}, {1, 0}, old, {0.6, 0.5})};
  EXPECT_EQ(update_neighbors(subs, 1, child, {0.7, 0.25}), 1u);
  EXPECT_EQ(subs[0].best, child);
  EXPECT_EQ(subs[0].best_score, 0.7);
  EXPECT_EQ(subs[1].best, old);
}

TEST(UpdateNeighbors, TieBrokenByImprovementScore) {
  // Same weighted sum 0.6; the child uses fewer dominators, so its
  // improvement score is higher.
  const Genome old = Genome::from_set(6, {0, 1, 2});
  const Genome child = Genome::from_set(6, {0, 1});
  std::vector<Subproblem> subs{subproblem({1, 0}, {0}, old, {0.6, 0.5})};
  EXPECT_EQ(update_neighbors(subs, 0, child, {0.6, 0.6}), 1u);
  EXPECT_EQ(subs[0].best, child);
  // The reverse offer loses the tie.
  EXPECT_EQ(update_neighbors(subs, 0, old, {0.6, 0.5}), 0u);
  EXPECT_EQ(subs[0].best, child);
}

TEST(UpdateNeighbors, EqualWeightsDecideIdentically) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const ObjectiveVector cur{rng.uniform01(), rng.uniform01()};
    const Genome base = Genome::from_set(8, {0, 1, 2});
    std::vector<Subproblem> subs{subproblem({0.3, 0.7}, {0, 1}, base, cur),
                                 subproblem({0.3, 0.7}, {1, 0}, base, cur)};
    const ObjectiveVector f{rng.uniform01(), rng.uniform01()};
    const std::size_t size = 1 + rng.below(6);
    NodeSet d;
    for (NodeId v = 0; v < size; ++v) d.push_back(v);
    const auto replaced = update_neighbors(subs, 0, Genome::from_set(8, d), f);
    EXPECT_TRUE(replaced == 0 || replaced == 2);
    EXPECT_EQ(subs[0].best, subs[1].best);
  }
}

TEST(Archive, InsertionRules) {
  ParetoArchive archive;
  EXPECT_TRUE(update_archive(archive, entry(0.5, 0.5)));
  EXPECT_FALSE(update_archive(archive, entry(0.4, 0.5)));
  EXPECT_FALSE(update_archive(archive, entry(0.5, 0.5)));
  EXPECT_EQ(archive.size(), 1u);
  EXPECT_TRUE(update_archive(archive, entry(0.6, 0.4)));
  EXPECT_EQ(archive.size(), 2u);
  EXPECT_TRUE(update_archive(archive, entry(0.7, 0.6)));
  ASSERT_EQ(archive.size(), 1u);
  EXPECT_EQ(archive.entries()[0].objectives, (ObjectiveVector{0.7, 0.6}));
  EXPECT_TRUE(archive.is_mutually_nondominated());
}

TEST(Archive, RandomInsertionsStayNondominated) {
  Rng rng(8);
  ParetoArchive archive;
  std::vector<ObjectiveVector> offered;
  for (int i = 0; i < 400; ++i) {
    ObjectiveVector f{std::round(rng.uniform01() * 20) / 20, std::round(rng.uniform01() * 20) / 20};
    offered.push_back(f);
    update_archive(archive, ArchiveEntry{Genome{}, f});
    ASSERT_TRUE(archive.is_mutually_nondominated());
  }
  // Every offered vector is dominated by or equal to some member.
  for (const auto& f : offered) {
    bool covered = false;
    for (const auto& e : archive.entries()) covered = covered || e.objectives == f || dominates(e.objectives, f);
    EXPECT_TRUE(covered);
  }
}

TEST(Genesis, ZeroGenerationsKeepsSeeds) {
  const auto g = instance(50, 25, 1);
  GenesisConfig cfg;
  cfg.generations = 0;
  const auto r = genesis(g, 1, 1, cfg);
  EXPECT_EQ(r.children, 0u);
  ParetoArchive expected;
  for (const auto& seed : r.seeds) {
    const auto genome = Genome::from_set(g.size(), seed.dominators);
    expected.insert({genome, evaluate(g, genome, 1, 1)});
  }
  ASSERT_EQ(r.archive.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_EQ(r.archive.entries()[i].genome, expected.entries()[i].genome);
}

TEST(Genesis, InvariantsHoldThroughoutRun) {
  for (auto [m, k] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 2}, {3, 2}}) {
    const auto g = instance(50, 30, 20 + m, 3);
    GenesisConfig cfg;
    cfg.generations = 15;
    cfg.seed = 99;
    std::size_t checks = 0;
    const auto r = genesis(g, m, k, cfg, [&](const ParetoArchive& archive, const std::vector<Subproblem>& subs) {
      ASSERT_TRUE(archive.is_mutually_nondominated());
      for (const auto& e : archive.entries()) ASSERT_TRUE(is_backbone(g.graph(), e.genome.dominators(), m, k));
      for (const auto& s : subs) ASSERT_TRUE(is_backbone(g.graph(), s.best.dominators(), m, k));
      ++checks;
    });
    EXPECT_EQ(checks, cfg.subproblems * (cfg.generations + 1));
    ASSERT_EQ(r.best_score_history.size(), cfg.generations + 1);
    EXPECT_EQ(r.best_score_history.front(), r.seed_scores);
    for (std::size_t gen = 1; gen < r.best_score_history.size(); ++gen)
      for (std::size_t j = 0; j < cfg.subproblems; ++j)
        EXPECT_GE(r.best_score_history[gen][j], r.best_score_history[gen - 1][j]);
    for (std::size_t j = 0; j < cfg.subproblems; ++j) {
      double best = -1;
      for (const auto& e : r.archive.entries())
        best = std::max(best, weighted_sum(r.subproblems[j].weight, e.objectives));
      EXPECT_GE(best, r.seed_scores[j]);
    }
  }
}

TEST(Genesis, Deterministic) {
  const auto g = instance(50, 25, 7);
  GenesisConfig cfg;
  cfg.generations = 20;
  cfg.seed = 4;
  const auto a = genesis(g, 1, 2, cfg);
  const auto b = genesis(g, 1, 2, cfg);
  ASSERT_EQ(a.archive.size(), b.archive.size());
  for (std::size_t i = 0; i < a.archive.size(); ++i) {
    EXPECT_EQ(a.archive.entries()[i].genome, b.archive.entries()[i].genome);
    EXPECT_EQ(a.archive.entries()[i].objectives, b.archive.entries()[i].objectives);
  }
}

TEST(Genesis, ArchiveExposesTradeOff) {
  const auto g = instance(60, 25, 12);
  GenesisConfig cfg;
  cfg.seed = 12;
  const auto r = genesis(g, 1, 1, cfg);
  ASSERT_FALSE(r.archive.empty());
  const auto& by_rate = best_rate_member(r.archive);
  const auto& by_size = *std::max_element(
      r.archive.entries().begin(), r.archive.entries().end(),
      [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.objectives[1] < b.objectives[1]; });
  EXPECT_GE(by_rate.objectives[kRateObjective], by_size.objectives[kRateObjective]);
  EXPECT_GE(by_size.objectives[kCompactObjective], by_rate.objectives[kCompactObjective]);
  if (r.archive.size() >= 2) {
    EXPECT_GT(by_rate.objectives[kRateObjective], by_size.objectives[kRateObjective]);
    EXPECT_LT(by_rate.objectives[kCompactObjective], by_size.objectives[kCompactObjective]);
  }
}

TEST(Genesis, ConfigValidation) {
  const auto g = instance(20, 40, 1);
  GenesisConfig cfg;
  cfg.neighborhood = 3;
  EXPECT_THROW(genesis(g, 1, 1, cfg), std::invalid_argument);
  cfg = {};
  cfg.mutation_probability = 1.5;
  EXPECT_THROW(genesis(g, 1, 1, cfg), std::invalid_argument);
}
