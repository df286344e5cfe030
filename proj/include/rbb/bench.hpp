#pragma once

// Seeded experiment harness: grid sweeps over generated instances, CSV
// tables and a JSON run manifest.
//
// Seeds: cell c of an experiment uses derive_seed(master, c); repetition r of
// that cell generates its instance from derive_seed(cell_seed, r), and GENESIS
// runs on it use derive_seed(rep_seed, kGenesisStream). Cells are therefore
// independent of evaluation order and of the number of worker threads.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "rbb/avido.hpp"
#include "rbb/exact_oracle.hpp"
#include "rbb/genesis.hpp"
#include "rbb/udg.hpp"

namespace rbb::bench {

inline constexpr std::uint64_t kGenesisStream = std::uint64_t{1} << 32;

enum class Experiment { Fig2a, Fig2bc, Fig2d, Table7, Single };

inline const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Fig2a: return "fig2a";
    case Experiment::Fig2bc: return "fig2bc";
    case Experiment::Fig2d: return "fig2d";
    case Experiment::Table7: return "table7";
    case Experiment::Single: return "single";
  }
  return "?";
}

// One row of the volume sweep: square side and node count.
struct VolumeRow {
  double side = 0.0;
  std::size_t n = 0;
};

// Published reference values for the volume sweep, echoed next to measured ones.
struct ReferenceRow {
  double side;
  std::size_t n;
  double tr_e, tr_g, d_e, d_g;
};

inline const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows{
      {50, 60, 0.52, 0.60, 22, 30},   {60, 100, 0.45, 0.55, 35, 41},  {70, 180, 0.40, 0.47, 53, 59},
      {80, 250, 0.35, 0.45, 68, 77},  {100, 400, 0.33, 0.41, 72, 86},
  };
  return rows;
}

struct ExperimentConfig {
  Experiment experiment = Experiment::Fig2a;
  std::vector<std::size_t> n_values;
  std::vector<double> ranges;
  double width = 100.0;
  double height = 100.0;
  std::vector<VolumeRow> volumes;  // volume sweep only
  std::size_t reps = 100;
  std::size_t m = 1;
  std::size_t k = 1;
  GenesisConfig genesis;
  std::uint64_t seed = 1;
  std::string out = "results";
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string instance_file;  // single only: read instead of generating

  void validate() const {
    if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
    if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("config: width and height must be > 0");
    for (auto n : n_values)
      if (n < 1) throw std::invalid_argument("config: every n must be >= 1");
    for (auto r : ranges)
      if (!(r > 0.0)) throw std::invalid_argument("config: every range must be > 0");
    for (const auto& v : volumes)
      if (!(v.side > 0.0) || v.n < 1) throw std::invalid_argument("config: volume rows need side > 0 and n >= 1");
    if (m < 1 || m > 3 || k < 1 || k > 3) throw std::invalid_argument("config: m and k must be in 1..3");
    genesis.validate();
    if (experiment == Experiment::Table7) {
      if (volumes.empty() || ranges.size() != 1)
        throw std::invalid_argument("config: table7 needs volume rows and exactly one range");
    } else if (experiment == Experiment::Single) {
      if (instance_file.empty() && (n_values.size() != 1 || ranges.size() != 1))
        throw std::invalid_argument("config: single needs exactly one n and one range");
    } else if (n_values.empty() || ranges.empty()) {
      throw std::invalid_argument("config: n and range lists must be non-empty");
    }
  }
};

inline ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::Fig2a:
    case Experiment::Fig2bc:
      cfg.n_values = {50, 100, 150};
      cfg.ranges = {20, 25, 30};
      break;
    case Experiment::Fig2d:
      cfg.n_values = {50, 100, 150};
      cfg.ranges = {25};
      break;
    case Experiment::Table7:
      cfg.reps = 10;
      cfg.ranges = {12};
      for (const auto& r : reference_rows()) cfg.volumes.push_back({r.side, r.n});
      break;
    case Experiment::Single:
      cfg.reps = 1;
      cfg.n_values = {50};
      cfg.ranges = {25};
      break;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 below two values
  std::size_t count = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

// Ranks starting at 1; tied values share their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

// Spearman rank correlation; NaN when fewer than two points or a constant series.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("spearman: series lengths differ");
  if (xs.size() < 2) return std::nan("");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

// A CSV-ready table: fixed column set, cells pre-formatted.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("Table: no column '" + std::string(name) + "'");
  }
  const std::string& at(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return out.str();
}

inline std::string fmt(double x) { return std::isnan(x) ? std::string("nan") : detail::format_real(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }

// ---------------------------------------------------------------------------
// Cell execution
// ---------------------------------------------------------------------------

inline std::size_t worker_count(std::size_t requested, std::size_t cells) {
  std::size_t w = requested ? requested : std::max<unsigned>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, cells));
}

// Runs fn(i) for i in [0, count) on a pool of workers. Each call writes only
// to its own slot, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct CellInfo {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double range = 0.0;
  double width = 0.0;
  double height = 0.0;
  std::string status = "ok";
  std::size_t reps_ok = 0;
  std::size_t skipped = 0;
  Summary runtime_ms;
};

inline std::uint64_t rep_seed(std::uint64_t cell_seed, std::size_t rep) { return derive_seed(cell_seed, rep); }

inline InstanceSpec rep_instance(const CellInfo& cell, std::size_t rep, std::size_t connectivity = 1) {
  InstanceSpec spec;
  spec.n = cell.n;
  spec.width = cell.width;
  spec.height = cell.height;
  spec.range = cell.range;
  spec.seed = rep_seed(cell.seed, rep);
  spec.connectivity_requirement = connectivity;
  return spec;
}

inline std::vector<CellInfo> grid_cells(const ExperimentConfig& cfg) {
  std::vector<CellInfo> cells;
  if (cfg.experiment == Experiment::Table7) {
    for (const auto& v : cfg.volumes) {
      CellInfo c;
      c.index = cells.size();
      c.seed = derive_seed(cfg.seed, c.index);
      c.n = v.n;
      c.range = cfg.ranges.front();
      c.width = c.height = v.side;
      cells.push_back(c);
    }
    return cells;
  }
  for (auto n : cfg.n_values)
    for (auto r : cfg.ranges) {
      CellInfo c;
      c.index = cells.size();
      c.seed = derive_seed(cfg.seed, c.index);
      c.n = n;
      c.range = r;
      c.width = cfg.width;
      c.height = cfg.height;
      cells.push_back(c);
    }
  return cells;
}

// Runs every repetition of a cell through `body(rep)`, timing each one.
// Generation failures stop the cell and are recorded in its status unless
// `skip_failed_generation` is set, in which case they are counted and skipped.
template <class Body>
void run_reps(CellInfo& cell, std::size_t reps, bool skip_failed_generation, Body&& body) {
  std::vector<double> times;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body(rep);
    } catch (const GenerationExhausted&) {
      if (skip_failed_generation) {
        ++cell.skipped;
        continue;
      }
      cell.status = std::string("generation_exhausted: rep ") + std::to_string(rep);
      return;
    } catch (const std::exception& e) {
      cell.status = std::string("error: ") + e.what();
      return;
    }
    times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    ++cell.reps_ok;
  }
  cell.runtime_ms = summarize(times);
}

inline std::vector<std::string> cell_columns() {
  return {"experiment", "cell", "seed", "n", "width", "height", "range", "reps", "status"};
}

inline std::vector<std::string> cell_prefix(Experiment e, const CellInfo& c) {
  return {experiment_name(e), fmt(c.index), fmt(c.seed), fmt(c.n), fmt(c.width),
          fmt(c.height),      fmt(c.range), fmt(c.reps_ok), c.status};
}

inline void append_summary(std::vector<std::string>& row, const Summary& s, bool ok) {
  row.push_back(ok ? fmt(s.mean) : "");
  row.push_back(ok ? fmt(s.sd) : "");
}

inline void append_summary_columns(std::vector<std::string>& cols, const std::string& name) {
  cols.push_back(name + "_mean");
  cols.push_back(name + "_sd");
}

inline Table timings_table(Experiment e, const std::vector<CellInfo>& cells) {
  Table t;
  t.columns = {"experiment", "cell", "seed", "reps", "runtime_ms_mean", "runtime_ms_sd"};
  for (const auto& c : cells)
    t.rows.push_back({experiment_name(e), fmt(c.index), fmt(c.seed), fmt(c.reps_ok), fmt(c.runtime_ms.mean),
                      fmt(c.runtime_ms.sd)});
  return t;
}

// ---------------------------------------------------------------------------
// Backbone size vs range and n
// ---------------------------------------------------------------------------

struct Fig2aCell {
  CellInfo info;
  Summary size, max_pair_cost, mean_rate;
  std::vector<double> sizes;
};

struct Fig2aResult {
  std::vector<Fig2aCell> cells;
  std::map<std::size_t, double> size_range_correlation;  // per n
  Table table;
  Table timings;
};

inline Fig2aResult run_fig2a(const ExperimentConfig& cfg) {
  cfg.validate();
  Fig2aResult out;
  for (auto& info : grid_cells(cfg)) out.cells.push_back({info, {}, {}, {}, {}});

  parallel_for(out.cells.size(), cfg.threads, [&](std::size_t i) {
    auto& cell = out.cells[i];
    std::vector<double> costs, rates;
    run_reps(cell.info, cfg.reps, false, [&](std::size_t rep) {
      const auto g = generate_instance(rep_instance(cell.info, rep));
      const auto sol = avido(g, cfg.m, cfg.k);
      cell.sizes.push_back(static_cast<double>(sol.size));
      costs.push_back(sol.max_pair_cost);
      rates.push_back(sol.mean_rate);
    });
    cell.size = summarize(cell.sizes);
    cell.max_pair_cost = summarize(costs);
    cell.mean_rate = summarize(rates);
  });

  for (auto n : cfg.n_values) {
    std::vector<double> ranges, sizes;
    for (const auto& c : out.cells)
      if (c.info.n == n && c.info.status == "ok") {
        ranges.push_back(c.info.range);
        sizes.push_back(c.size.mean);
      }
    out.size_range_correlation[n] = spearman(ranges, sizes);
  }

  out.table.columns = cell_columns();
  for (auto name : {"size", "max_pair_cost", "mean_rate"}) append_summary_columns(out.table.columns, name);
  out.table.columns.push_back("size_range_spearman");
  std::vector<CellInfo> infos;
  for (const auto& c : out.cells) {
    auto row = cell_prefix(cfg.experiment, c.info);
    const bool ok = c.info.status == "ok";
    append_summary(row, c.size, ok);
    append_summary(row, c.max_pair_cost, ok);
    append_summary(row, c.mean_rate, ok);
    row.push_back(fmt(out.size_range_correlation.at(c.info.n)));
    out.table.rows.push_back(std::move(row));
    infos.push_back(c.info);
  }
  out.timings = timings_table(cfg.experiment, infos);
  return out;
}

// ---------------------------------------------------------------------------
// Uncertainty cost on vs off, paired per instance
// ---------------------------------------------------------------------------

struct Fig2bcCell {
  CellInfo info;
  Summary size_off, size_on, cost_off, cost_on, rate_off, rate_on, size_diff, cost_diff;
};

struct Fig2bcResult {
  std::vector<Fig2bcCell> cells;
  Table table;
  Table timings;
};

inline Fig2bcResult run_fig2bc(const ExperimentConfig& cfg) {
  cfg.validate();
  Fig2bcResult out;
  for (auto& info : grid_cells(cfg)) out.cells.push_back({info, {}, {}, {}, {}, {}, {}, {}, {}});

  parallel_for(out.cells.size(), cfg.threads, [&](std::size_t i) {
    auto& cell = out.cells[i];
    std::vector<double> so, sn, co, cn, ro, rn, sd, cd;
    run_reps(cell.info, cfg.reps, false, [&](std::size_t rep) {
      const auto g = generate_instance(rep_instance(cell.info, rep));
      const auto off = avido(g, cfg.m, cfg.k, CostConfig{false});
      const auto on = avido(g, cfg.m, cfg.k, CostConfig{true});
      so.push_back(static_cast<double>(off.size));
      sn.push_back(static_cast<double>(on.size));
      co.push_back(off.max_pair_cost);
      cn.push_back(on.max_pair_cost);
      ro.push_back(off.mean_rate);
      rn.push_back(on.mean_rate);
      sd.push_back(sn.back() - so.back());
      cd.push_back(cn.back() - co.back());
    });
    cell.size_off = summarize(so);
    cell.size_on = summarize(sn);
    cell.cost_off = summarize(co);
    cell.cost_on = summarize(cn);
    cell.rate_off = summarize(ro);
    cell.rate_on = summarize(rn);
    cell.size_diff = summarize(sd);
    cell.cost_diff = summarize(cd);
  });

  out.table.columns = cell_columns();
  for (auto name : {"size_off", "size_on", "max_pair_cost_off", "max_pair_cost_on", "mean_rate_off", "mean_rate_on",
                    "size_diff", "max_pair_cost_diff"})
    append_summary_columns(out.table.columns, name);
  std::vector<CellInfo> infos;
  for (const auto& c : out.cells) {
    auto row = cell_prefix(cfg.experiment, c.info);
    const bool ok = c.info.status == "ok";
    for (const auto* s : {&c.size_off, &c.size_on, &c.cost_off, &c.cost_on, &c.rate_off, &c.rate_on, &c.size_diff,
                          &c.cost_diff})
      append_summary(row, *s, ok);
    out.table.rows.push_back(std::move(row));
    infos.push_back(c.info);
  }
  out.timings = timings_table(cfg.experiment, infos);
  return out;
}

// ---------------------------------------------------------------------------
// Resilience ladder
// ---------------------------------------------------------------------------

struct Rung {
  std::size_t m, k;
};

inline const std::vector<Rung>& resilience_ladder() {
  static const std::vector<Rung> ladder{{1, 1}, {1, 2}, {2, 2}, {3, 3}};
  return ladder;
}

struct Fig2dCell {
  CellInfo info;
  std::vector<Summary> rung_size;             // per ladder rung
  std::vector<std::vector<double>> sizes;     // [rung][instance]
  std::size_t monotone_instances = 0;
  std::size_t fallbacks = 0;                  // rung (3,3) runs that fell back to D = V

  double monotone_fraction() const {
    return info.reps_ok ? static_cast<double>(monotone_instances) / static_cast<double>(info.reps_ok) : std::nan("");
  }
};

struct Fig2dResult {
  std::vector<Fig2dCell> cells;
  Table table;
  Table timings;
};

inline Fig2dResult run_fig2d(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& ladder = resilience_ladder();
  Fig2dResult out;
  for (auto& info : grid_cells(cfg)) {
    Fig2dCell c;
    c.info = info;
    c.sizes.resize(ladder.size());
    out.cells.push_back(std::move(c));
  }

  parallel_for(out.cells.size(), cfg.threads, [&](std::size_t i) {
    auto& cell = out.cells[i];
    run_reps(cell.info, cfg.reps, true, [&](std::size_t rep) {
      const auto g = generate_instance(rep_instance(cell.info, rep, 3));
      std::vector<std::size_t> sizes;
      for (const auto& rung : ladder) {
        const auto sol = avido(g, rung.m, rung.k);
        if (sol.round5_fell_back) ++cell.fallbacks;
        sizes.push_back(sol.size);
      }
      for (std::size_t r = 0; r < ladder.size(); ++r) cell.sizes[r].push_back(static_cast<double>(sizes[r]));
      if (std::is_sorted(sizes.begin(), sizes.end())) ++cell.monotone_instances;
    });
    for (const auto& s : cell.sizes) cell.rung_size.push_back(summarize(s));
  });

  out.table.columns = cell_columns();
  for (auto name : {"skipped", "m", "k"}) out.table.columns.push_back(name);
  append_summary_columns(out.table.columns, "size");
  for (auto name : {"monotone_fraction", "fallbacks"}) out.table.columns.push_back(name);
  std::vector<CellInfo> infos;
  for (const auto& c : out.cells) {
    const bool ok = c.info.status == "ok";
    for (std::size_t r = 0; r < ladder.size(); ++r) {
      auto row = cell_prefix(cfg.experiment, c.info);
      row.push_back(fmt(c.info.skipped));
      row.push_back(fmt(ladder[r].m));
      row.push_back(fmt(ladder[r].k));
      append_summary(row, ok ? c.rung_size[r] : Summary{}, ok);
      row.push_back(ok ? fmt(c.monotone_fraction()) : "");
      row.push_back(fmt(c.fallbacks));
      out.table.rows.push_back(std::move(row));
    }
    infos.push_back(c.info);
  }
  out.timings = timings_table(cfg.experiment, infos);
  return out;
}

// ---------------------------------------------------------------------------
// GENESIS vs AVIDO over growing volumes
// ---------------------------------------------------------------------------

struct Table7Cell {
  CellInfo info;
  Summary tr_genesis, tr_avido, d_genesis, d_avido, seed_rate;
  std::size_t genesis_ge_seed = 0;  // instances where GENESIS's best f_rate >= its best seed's
  std::size_t archive_members = 0;
};

struct Table7Result {
  std::vector<Table7Cell> cells;
  Table table;
  Table timings;
};

inline const ReferenceRow* find_reference(double side, std::size_t n) {
  for (const auto& r : reference_rows())
    if (r.side == side && r.n == n) return &r;
  return nullptr;
}

inline Table7Result run_table7(const ExperimentConfig& cfg) {
  cfg.validate();
  Table7Result out;
  for (auto& info : grid_cells(cfg)) {
    Table7Cell c;
    c.info = info;
    out.cells.push_back(c);
  }

  parallel_for(out.cells.size(), cfg.threads, [&](std::size_t i) {
    auto& cell = out.cells[i];
    std::vector<double> tg, ta, dg, da, sr;
    run_reps(cell.info, cfg.reps, false, [&](std::size_t rep) {
      const auto spec = rep_instance(cell.info, rep);
      const auto g = generate_instance(spec);
      GenesisConfig gc = cfg.genesis;
      gc.seed = derive_seed(spec.seed, kGenesisStream);
      const auto res = genesis(g, cfg.m, cfg.k, gc);
      const auto& best = best_rate_member(res.archive);
      const auto plain = avido(g, cfg.m, cfg.k);
      double seed_best = 0.0;
      for (const auto& s : res.seeds) seed_best = std::max(seed_best, s.mean_rate);
      tg.push_back(best.objectives[kRateObjective]);
      dg.push_back(static_cast<double>(best.genome.count()));
      ta.push_back(plain.mean_rate);
      da.push_back(static_cast<double>(plain.size));
      sr.push_back(seed_best);
      if (tg.back() >= seed_best) ++cell.genesis_ge_seed;
      cell.archive_members += res.archive.size();
    });
    cell.tr_genesis = summarize(tg);
    cell.tr_avido = summarize(ta);
    cell.d_genesis = summarize(dg);
    cell.d_avido = summarize(da);
    cell.seed_rate = summarize(sr);
  });

  out.table.columns = cell_columns();
  for (auto name : {"tr_genesis", "tr_avido", "d_genesis", "d_avido", "seed_rate"})
    append_summary_columns(out.table.columns, name);
  for (auto name : {"genesis_ge_seed", "archive_members", "ref_tr_e", "ref_tr_g", "ref_d_e", "ref_d_g"})
    out.table.columns.push_back(name);
  std::vector<CellInfo> infos;
  for (const auto& c : out.cells) {
    auto row = cell_prefix(cfg.experiment, c.info);
    const bool ok = c.info.status == "ok";
    for (const auto* s : {&c.tr_genesis, &c.tr_avido, &c.d_genesis, &c.d_avido, &c.seed_rate})
      append_summary(row, *s, ok);
    row.push_back(fmt(c.genesis_ge_seed));
    row.push_back(fmt(c.archive_members));
    const auto* ref = find_reference(c.info.width, c.info.n);
    for (double v : {ref ? ref->tr_e : 0.0, ref ? ref->tr_g : 0.0, ref ? ref->d_e : 0.0, ref ? ref->d_g : 0.0})
      row.push_back(ref ? fmt(v) : "");
    out.table.rows.push_back(std::move(row));
    infos.push_back(c.info);
  }
  out.timings = timings_table(cfg.experiment, infos);
  return out;
}

// ---------------------------------------------------------------------------
// Single instance report
// ---------------------------------------------------------------------------

struct SingleReport {
  UnitDiskGraph instance;
  BackboneSolution plain;
  BackboneSolution with_cost;
  BackboneCertificate certificate;
  std::optional<std::size_t> optimum;  // exhaustive optimum when the instance is small enough
  std::string text;
};

inline std::string solution_text(const BackboneSolution& sol, std::size_t m, std::size_t k) {
  std::ostringstream out;
  out << "m " << m << "\nk " << k << "\nsize " << sol.size << "\ndominators";
  for (NodeId v : sol.dominators) out << ' ' << v;
  out << '\n';
  return out.str();
}

// Throws InfeasibleConnectivity / GenerationExhausted as the pipeline does.
inline SingleReport run_single(const ExperimentConfig& cfg) {
  cfg.validate();
  SingleReport rep;
  if (!cfg.instance_file.empty()) {
    std::ifstream in(cfg.instance_file);
    if (!in) throw std::runtime_error("cannot open instance file '" + cfg.instance_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    rep.instance = deserialize_instance(buf.str());
  } else {
    InstanceSpec spec;
    spec.n = cfg.n_values.front();
    spec.range = cfg.ranges.front();
    spec.width = cfg.width;
    spec.height = cfg.height;
    spec.seed = cfg.seed;
    spec.connectivity_requirement = cfg.m;
    rep.instance = generate_instance(spec);
  }
  const auto& g = rep.instance;
  rep.plain = avido(g, cfg.m, cfg.k, CostConfig{false});
  rep.with_cost = avido(g, cfg.m, cfg.k, CostConfig{true});
  rep.certificate = certify_backbone(g.graph(), rep.plain.dominators, cfg.m, cfg.k);
  if (g.size() <= kOracleMaxNodes) rep.optimum = brute_force_min(g.graph(), cfg.m, cfg.k).optimum_size;

  std::ostringstream out;
  out << "instance: n=" << g.size() << " edges=" << g.graph().edge_count() << " plane=" << fmt(g.width()) << "x"
      << fmt(g.height()) << " range=" << fmt(g.range()) << " seed=" << g.seed() << '\n';
  out << "requested: m=" << cfg.m << " k=" << cfg.k << '\n';
  auto describe = [&](const char* label, const BackboneSolution& s) {
    const double f_compact = 1.0 - static_cast<double>(s.size) / static_cast<double>(g.size());
    out << label << ": size=" << s.size << " m_achieved=" << s.m_achieved << " k_achieved=" << s.k_achieved
        << " max_pair_cost=" << fmt(s.max_pair_cost) << " f_rate=" << fmt(s.mean_rate)
        << " f_compact=" << fmt(f_compact) << (s.round5_fell_back ? " (fell back to all nodes)" : "") << '\n';
  };
  describe("avido", rep.plain);
  describe("avido+cost", rep.with_cost);
  out << "certificate: connectivity=" << rep.certificate.induced_connectivity
      << " m_ok=" << (rep.certificate.m_ok ? "yes" : "no") << " k_ok=" << (rep.certificate.k_ok ? "yes" : "no")
      << '\n';
  if (rep.optimum)
    out << "oracle: optimum=" << *rep.optimum << " gap=" << (rep.plain.size - *rep.optimum) << '\n';
  else
    out << "oracle: skipped (instance too large)\n";
  rep.text = out.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

inline nlohmann::json manifest(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["seed"] = cfg.seed;
  j["reps"] = cfg.reps;
  j["n"] = cfg.n_values;
  j["range"] = cfg.ranges;
  j["width"] = cfg.width;
  j["height"] = cfg.height;
  j["m"] = cfg.m;
  j["k"] = cfg.k;
  j["genesis"] = {{"subproblems", cfg.genesis.subproblems},
                  {"neighborhood", cfg.genesis.neighborhood},
                  {"generations", cfg.genesis.generations},
                  {"crossover_probability", cfg.genesis.crossover_probability},
                  {"mutation_probability", cfg.genesis.mutation_probability}};
  auto volumes = nlohmann::json::array();
  for (const auto& v : cfg.volumes) volumes.push_back({{"side", v.side}, {"n", v.n}});
  j["volumes"] = volumes;
  if (!cfg.instance_file.empty()) j["instance_file"] = cfg.instance_file;
  j["seed_derivation"] = "cell_seed = splitmix64(master + (cell + 1) * 0x9E3779B97F4A7C15); "
                         "rep_seed = same mix of (cell_seed, rep); genesis_seed = same mix of (rep_seed, 2^32)";
  auto cells = nlohmann::json::array();
  if (cfg.experiment != Experiment::Single)
    for (const auto& c : grid_cells(cfg))
      cells.push_back({{"cell", c.index}, {"seed", c.seed}, {"n", c.n}, {"range", c.range},
                       {"width", c.width}, {"height", c.height}});
  j["cells"] = cells;
  return j;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace rbb::bench
