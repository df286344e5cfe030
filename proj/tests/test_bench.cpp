#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rbb/bench.hpp"

using namespace rbb;
using namespace rbb::bench;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(Experiment e) {
  auto cfg = default_config(e);
  cfg.reps = 4;
  cfg.threads = 1;
  return cfg;
}

struct Run {
  int status = 0;
  std::string output;
};

Run run_cli(const std::string& args) {
  Run r;
  const std::string cmd = std::string(RBB_BENCH_EXE) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("rbb_bench_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Stats, SummarizeUsesSampleDeviation) {
  const auto s = summarize({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(32.0 / 7.0));
  EXPECT_EQ(s.count, 8u);
  EXPECT_EQ(summarize({3}).sd, 0.0);
}

TEST(Stats, Spearman) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {30, 20, 10}), -1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {1, 4, 9, 16}), 1.0);
  EXPECT_EQ(average_ranks({10, 20, 20, 30}), (std::vector<double>{1, 2.5, 2.5, 4}));
  // Classic example: rho = 1 - 6 * sum d^2 / (n (n^2 - 1)) with d = (0, 0, 1, -1, 0).
  EXPECT_NEAR(spearman({1, 2, 3, 4, 5}, {1, 2, 4, 3, 5}), 1.0 - 6.0 * 2 / (5 * 24), 1e-12);
  EXPECT_TRUE(std::isnan(spearman({1}, {1})));
  EXPECT_TRUE(std::isnan(spearman({1, 2}, {3, 3})));
  EXPECT_THROW(spearman({1}, {1, 2}), DimensionMismatch);
}

TEST(Csv, QuotesWhenNeeded) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{"x,y", "say \"hi\""}, {"1", ""}};
  EXPECT_EQ(to_csv(t), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,\n");
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_EQ(fmt(0.1), "0.1");
  EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(Seeds, CellsUseDerivedSeeds) {
  auto cfg = small(Experiment::Fig2a);
  const auto cells = grid_cells(cfg);
  ASSERT_EQ(cells.size(), 9u);
  for (const auto& c : cells) EXPECT_EQ(c.seed, derive_seed(cfg.seed, c.index));
  EXPECT_EQ(cells[1].n, 50u);
  EXPECT_EQ(cells[1].range, 25.0);
  EXPECT_EQ(cells[3].n, 100u);
}

TEST(Fig2a, RangeCoveringThePlaneGivesSizeOne) {
  auto cfg = small(Experiment::Fig2a);
  cfg.n_values = {30};
  cfg.ranges = {20, 150};
  const auto r = run_fig2a(cfg);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.cells[1].size.mean, 1.0);
  EXPECT_GT(r.cells[0].size.mean, 1.0);
  EXPECT_DOUBLE_EQ(r.size_range_correlation.at(30), -1.0);
}

TEST(Fig2a, RowSeedReplaysSize) {
  auto cfg = small(Experiment::Fig2a);
  cfg.reps = 1;
  const auto r = run_fig2a(cfg);
  const auto seed_col = r.table.column("seed");
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const auto& info = r.cells[i].info;
    ASSERT_EQ(info.status, "ok");
    CellInfo replay = info;
    replay.seed = std::stoull(r.table.rows[i][seed_col]);
    const auto g = generate_instance(rep_instance(replay, 0));
    EXPECT_EQ(static_cast<double>(avido(g, 1, 1).size), r.cells[i].sizes[0]);
  }
}

TEST(Fig2a, ResultsIndependentOfThreadCount) {
  auto cfg = small(Experiment::Fig2a);
  const auto one = to_csv(run_fig2a(cfg).table);
  cfg.threads = 4;
  EXPECT_EQ(to_csv(run_fig2a(cfg).table), one);
  cfg.seed = 2;
  EXPECT_NE(to_csv(run_fig2a(cfg).table), one);
}

TEST(Fig2a, GenerationFailureIsRecordedNotFatal) {
  auto cfg = small(Experiment::Fig2a);
  cfg.n_values = {30};
  cfg.ranges = {1, 40};
  const auto r = run_fig2a(cfg);
  EXPECT_EQ(r.cells[0].info.status, "generation_exhausted: rep 0");
  EXPECT_EQ(r.cells[1].info.status, "ok");
  EXPECT_EQ(r.table.rows[0][r.table.column("size_mean")], "");
}

TEST(Fig2bc, PairedColumns) {
  auto cfg = small(Experiment::Fig2bc);
  cfg.n_values = {50};
  cfg.ranges = {25, 150};
  const auto r = run_fig2bc(cfg);
  // Complete graph: both settings pick the same single node.
  EXPECT_EQ(r.cells[1].size_diff.mean, 0.0);
  EXPECT_EQ(r.cells[1].cost_diff.mean, 0.0);
  const auto& c = r.cells[0];
  EXPECT_DOUBLE_EQ(c.size_diff.mean, c.size_on.mean - c.size_off.mean);
  EXPECT_LE(c.cost_on.mean, c.cost_off.mean + 1e-12);
  for (auto name : {"size_off_mean", "size_on_mean", "max_pair_cost_off_mean", "max_pair_cost_on_mean",
                    "size_diff_mean", "max_pair_cost_diff_mean"})
    EXPECT_NO_THROW(r.table.column(name)) << name;
}

TEST(Fig2d, LadderIsMonotonePerInstance) {
  auto cfg = small(Experiment::Fig2d);
  cfg.n_values = {60};
  const auto r = run_fig2d(cfg);
  ASSERT_EQ(r.cells.size(), 1u);
  const auto& c = r.cells[0];
  EXPECT_EQ(c.info.reps_ok + c.info.skipped, cfg.reps);
  EXPECT_EQ(c.monotone_instances, c.info.reps_ok);
  EXPECT_EQ(r.table.rows.size(), resilience_ladder().size());
  // The (1,1) rung is plain AVIDO on the same instance.
  std::size_t inst = 0;
  for (std::size_t rep = 0; rep < cfg.reps && inst < c.sizes[0].size(); ++rep) {
    try {
      const auto g = generate_instance(rep_instance(c.info, rep, 3));
      EXPECT_EQ(static_cast<double>(avido(g, 1, 1).size), c.sizes[0][inst++]);
    } catch (const GenerationExhausted&) {
    }
  }
}

TEST(Table7, SmokeRun) {
  auto cfg = small(Experiment::Table7);
  cfg.reps = 2;
  cfg.genesis.generations = 5;
  cfg.volumes = {{50, 60}, {60, 100}};
  const auto r = run_table7(cfg);
  ASSERT_EQ(r.cells.size(), 2u);
  for (const auto& c : r.cells) {
    EXPECT_EQ(c.info.status, "ok");
    EXPECT_EQ(c.genesis_ge_seed, 2u);
    EXPECT_GE(c.tr_genesis.mean, c.seed_rate.mean);
  }
  EXPECT_EQ(r.table.rows[0][r.table.column("ref_tr_e")], "0.52");
  EXPECT_EQ(r.table.rows[1][r.table.column("ref_d_g")], "41");
}

TEST(Config, Validation) {
  auto cfg = default_config(Experiment::Fig2a);
  cfg.reps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = default_config(Experiment::Fig2a);
  cfg.ranges = {-1};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = default_config(Experiment::Table7);
  EXPECT_EQ(cfg.reps, 10u);
  EXPECT_EQ(cfg.volumes.size(), 5u);
  EXPECT_EQ(default_config(Experiment::Fig2bc).reps, 100u);
}

TEST(Manifest, RecordsCellSeeds) {
  const auto cfg = small(Experiment::Fig2a);
  const auto j = manifest(cfg);
  EXPECT_EQ(j["experiment"], "fig2a");
  ASSERT_EQ(j["cells"].size(), 9u);
  EXPECT_EQ(j["cells"][4]["seed"].get<std::uint64_t>(), derive_seed(cfg.seed, 4));
}

TEST(Cli, SingleOnDenseInstanceReportsSizeOne) {
  const auto dir = scratch("dense");
  const auto r = run_cli("single --n 8 --range 200 --out " + dir.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("avido: size=1 "), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(dir / "instance.udg"));
  EXPECT_TRUE(fs::exists(dir / "solution.txt"));
  EXPECT_TRUE(fs::exists(dir / "run-manifest.json"));
}

TEST(Cli, SingleReportsNonNegativeOracleGap) {
  const auto dir = scratch("gap");
  for (int seed = 1; seed <= 5; ++seed) {
    const auto r = run_cli("single --n 10 --range 45 --seed " + std::to_string(seed) + " --out " + dir.string());
    ASSERT_EQ(r.status, 0) << r.output;
    const auto at = r.output.find("gap=");
    ASSERT_NE(at, std::string::npos) << r.output;
    EXPECT_NE(r.output[at + 4], '-');
    EXPECT_GE(std::stol(r.output.substr(at + 4)), 0);
  }
}

TEST(Cli, SingleReadsInstanceFile) {
  const auto dir = scratch("file");
  ASSERT_EQ(run_cli("single --n 12 --range 40 --seed 3 --out " + dir.string()).status, 0);
  const auto again = scratch("file2");
  const auto r = run_cli("single --instance " + (dir / "instance.udg").string() + " --out " + again.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(slurp(again / "instance.udg"), slurp(dir / "instance.udg"));
  EXPECT_EQ(slurp(again / "solution.txt"), slurp(dir / "solution.txt"));
}

TEST(Cli, InfeasibleRequestExitsNonZero) {
  const auto dir = scratch("infeasible");
  std::ofstream(dir / "path.udg") << "udg 1\nn 3\nwidth 10\nheight 10\nrange 1\nseed 0\n"
                                     "node 0 0 0\nnode 1 1 0\nnode 2 2 0\n"
                                     "edge 0 1 0.5\nedge 1 2 0.5\n";
  const auto r = run_cli("single --m 2 --instance " + (dir / "path.udg").string() + " --out " + dir.string());
  EXPECT_EQ(r.status, 2) << r.output;
}

TEST(Cli, ConfigFileAndErrors) {
  const auto dir = scratch("config");
  std::ofstream(dir / "good.toml") << "reps = 2\nn = [40]\nrange = [30]\nthreads = 1\n";
  const auto ok = run_cli("fig2a --config " + (dir / "good.toml").string() + " --out " + dir.string());
  ASSERT_EQ(ok.status, 0) << ok.output;
  const auto csv = slurp(dir / "results.csv");
  EXPECT_NE(csv.find("fig2a,0,"), std::string::npos);
  EXPECT_NE(csv.find(",40,100,100,30,2,ok,"), std::string::npos) << csv;

  std::ofstream(dir / "bad_value.toml") << "reps = many\n";
  const auto bad = run_cli("fig2a --config " + (dir / "bad_value.toml").string() + " --out " + dir.string());
  EXPECT_NE(bad.status, 0);
  EXPECT_NE(bad.output.find("reps"), std::string::npos) << bad.output;

  std::ofstream(dir / "bad_key.toml") << "repetitions = 3\n";
  const auto unknown = run_cli("fig2a --config " + (dir / "bad_key.toml").string() + " --out " + dir.string());
  EXPECT_NE(unknown.status, 0);
  EXPECT_NE(unknown.output.find("repetitions"), std::string::npos) << unknown.output;

  EXPECT_NE(run_cli("fig2a --reps 0").status, 0);
  EXPECT_NE(run_cli("nosuch").status, 0);
}

TEST(Cli, RunsAreByteIdentical) {
  const auto a = scratch("bytes_a");
  const auto b = scratch("bytes_b");
  const std::string common = "fig2bc --reps 3 --n 50 --range 25 30 ";
  ASSERT_EQ(run_cli(common + "--threads 1 --out " + a.string()).status, 0);
  ASSERT_EQ(run_cli(common + "--threads 3 --out " + b.string()).status, 0);
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "run-manifest.json"), slurp(b / "run-manifest.json"));
}
