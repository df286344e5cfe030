#pragma once

// Exact references for small instances: exhaustive minimum backbone search,
// the degree relaxation's optimum, and LP exports of the integer programs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbb/errors.hpp"
#include "rbb/graph.hpp"
#include "rbb/graph_props.hpp"
#include "rbb/lp_format.hpp"

namespace rbb {

inline constexpr std::size_t kOracleMaxNodes = 14;

struct OracleResult {
  std::size_t optimum_size = 0;
  NodeSet dominators;
  std::size_t search_space_size = 0;  // subsets examined
};

namespace detail {

// Visits subsets of {0..n-1} by ascending size, lexicographic within a size,
// until `accept` returns true. Returns the accepted subset, if any.
template <class Accept>
std::optional<NodeSet> first_subset_by_size(std::size_t n, std::size_t& examined, const Accept& accept) {
  examined = 0;
  for (std::size_t size = 1; size <= n; ++size) {
    NodeSet pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = static_cast<NodeId>(i);
    while (true) {
      ++examined;
      if (accept(pick)) return pick;
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

inline void check_oracle_size(const Graph& g) {
  if (g.size() > kOracleMaxNodes)
    throw TooLarge("exact oracle: " + std::to_string(g.size()) + " nodes exceeds the cap of " +
                   std::to_string(kOracleMaxNodes));
  if (g.size() == 0) throw std::invalid_argument("exact oracle: empty graph");
}

}  // namespace detail

// Minimum certified m-connected k-dominating set by exhaustive search.
inline OracleResult brute_force_min(const Graph& g, std::size_t m, std::size_t k) {
  detail::check_oracle_size(g);
  OracleResult out;
  auto found = detail::first_subset_by_size(g.size(), out.search_space_size,
                                            [&](const NodeSet& s) { return is_backbone(g, s, m, k); });
  // A proper subset can be m-connected where V(g) is not, so only an empty
  // search proves infeasibility.
  if (!found) throw Infeasible("brute_force_min: no vertex subset is an (m, k) backbone");
  out.dominators = *found;
  out.optimum_size = out.dominators.size();
  return out;
}

// Coefficient of x_s in the dominator-degree rows. A lone dominator is a valid
// 1-connected set, so for m = 1 the row degenerates to the trivial bound.
inline std::size_t degree_row_coefficient(std::size_t m) { return m == 1 ? 0 : m; }

// Degree-relaxation test on a candidate set: every dominator has at least
// degree_row_coefficient(m) dominator neighbours, every other vertex at least k.
inline bool satisfies_degree_relaxation(const Graph& g, const NodeSet& dominators, std::size_t m, std::size_t k) {
  const auto in_set = membership(g.size(), dominators);
  const std::size_t need_inside = degree_row_coefficient(m);
  for (NodeId v = 0; v < g.size(); ++v)
    if (dominator_neighbors(g, in_set, v) < (in_set[v] ? need_inside : k)) return false;
  return true;
}

// Optimum of the degree relaxation by enumeration; nullopt when infeasible.
inline std::optional<OracleResult> relaxation_min(const Graph& g, std::size_t m, std::size_t k) {
  detail::check_oracle_size(g);
  OracleResult out;
  auto found = detail::first_subset_by_size(g.size(), out.search_space_size, [&](const NodeSet& s) {
    return satisfies_degree_relaxation(g, s, m, k);
  });
  if (!found) return std::nullopt;
  out.dominators = *found;
  out.optimum_size = out.dominators.size();
  return out;
}

// ---------------------------------------------------------------------------
// LP exports
// ---------------------------------------------------------------------------

// Rows per constraint family of the spanning-tree CDS model on n vertices
// (root = vertex 0, non-root vertices R = n - 1):
//   e2  1        e3  R*R      e4  1    e5  1    e6  1    e7  1
//   e8  R*(R-1)  e9  R*(R-1)  e10 R*(R-1)
struct CdsTally {
  std::size_t e2, e3, e4, e5, e6, e7, e8, e9, e10;
  std::size_t a_vars, b_vars, u_vars;

  std::size_t rows() const { return e2 + e3 + e4 + e5 + e6 + e7 + e8 + e9 + e10; }
};

inline CdsTally cds_tally(std::size_t n) {
  const std::size_t r = n - 1;
  return {1, r * r, 1, 1, 1, 1, r * (r - 1), r * (r - 1), r * (r - 1), n, n * (n - 1), n};
}

namespace detail {

inline std::string var(const char* prefix, std::size_t i) { return std::string(prefix) + "_" + std::to_string(i); }

inline std::string var(const char* prefix, std::size_t i, std::size_t j) {
  return std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace detail

// Spanning-tree model of a minimum connected dominating set. a_i marks CDS
// membership, b_i_j a directed tree arc i -> j, u_i the order labels that
// rule out cycles. `size_bound` is the right-hand side of e2 (default n).
inline lp::Model cds_model(const Graph& g, std::optional<std::size_t> size_bound = std::nullopt) {
  const std::size_t n = g.size();
  if (n < 2) throw TooSmall("export_ilp_cds: need at least 2 vertices");
  if (!is_connected(g)) throw DisconnectedInput("export_ilp_cds: graph must be connected");
  using detail::var;
  const double N = static_cast<double>(n);
  const std::size_t root = 0;

  lp::Model model;
  model.comments = {
      "Minimum connected dominating set, spanning-tree model with order labels.",
      "Vertices: " + std::to_string(n) + ", edges: " + std::to_string(g.edge_count()) + ", root vertex 0.",
      "Strict row e4 (sum_j b_0_j < 1 + (n-1) a_0) is written in its integral form <= (n-1) a_0.",
      "b_i_j for non-adjacent pairs are fixed to 0 in Bounds.",
  };
  model.objective_name = "c";
  for (std::size_t i = 0; i < n; ++i) model.objective.push_back({1.0, var("a", i)});

  auto add = [&](std::string name, std::vector<lp::Term> terms, lp::Sense sense, double rhs) {
    model.rows.push_back(lp::Row{std::move(name), std::move(terms), sense, rhs});
  };

  // e2: sum_i a_i <= D
  add("e2", model.objective, lp::Sense::LessEqual, static_cast<double>(size_bound.value_or(n)));
  // e3: b_i_j <= n a_i, i != root
  for (std::size_t i = 0; i < n; ++i) {
    if (i == root) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) add(var("e3", i, j), {{1.0, var("b", i, j)}, {-N, var("a", i)}}, lp::Sense::LessEqual, 0.0);
  }
  // e4: sum_j b_root_j <= (n - 1) a_root
  {
    std::vector<lp::Term> t;
    for (std::size_t j = 0; j < n; ++j)
      if (j != root) t.push_back({1.0, var("b", root, j)});
    auto e5 = t;
    t.push_back({-(N - 1.0), var("a", root)});
    add("e4", std::move(t), lp::Sense::LessEqual, 0.0);
    // e5: sum_j b_root_j >= 1
    add("e5", std::move(e5), lp::Sense::GreaterEqual, 1.0);
  }
  // e6: sum_{i != j} b_i_j = n - 1
  {
    std::vector<lp::Term> t;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) t.push_back({1.0, var("b", i, j)});
    add("e6", std::move(t), lp::Sense::Equal, N - 1.0);
  }
  // e7: u_root = 1
  add("e7", {{1.0, var("u", root)}}, lp::Sense::Equal, 1.0);
  // e8, e9, e10 over ordered non-root pairs i != j
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == root || j == root || i == j) continue;
      add(var("e8", i, j), {{1.0, var("u", j)}, {-N, var("a", i)}}, lp::Sense::LessEqual, 0.0);
      add(var("e9", i, j), {{1.0, var("u", j)}, {-2.0, var("a", i)}}, lp::Sense::GreaterEqual, 0.0);
      add(var("e10", i, j), {{1.0, var("u", i)}, {-1.0, var("u", j)}, {N - 1.0, var("b", i, j)}},
          lp::Sense::LessEqual, N - 2.0);
    }
  }

  for (std::size_t i = 0; i < n; ++i) model.bounds.push_back({var("u", i), 0.0, N});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !g.adjacent(static_cast<NodeId>(i), static_cast<NodeId>(j)))
        model.bounds.push_back({var("b", i, j), 0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) model.binaries.push_back(var("a", i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) model.binaries.push_back(var("b", i, j));
  for (std::size_t i = 0; i < n; ++i) model.generals.push_back(var("u", i));
  return model;
}

inline std::string export_ilp_cds(const Graph& g, std::optional<std::size_t> size_bound = std::nullopt) {
  return lp::write(cds_model(g, size_bound));
}

// Degree model of an m-connected k-dominating set: one e13 and one e14 row
// per vertex (2n rows), n binaries.
inline lp::Model mck_model(const Graph& g, std::size_t m, std::size_t k) {
  if (m < 1 || k < 1) throw std::invalid_argument("export_ilp_mck: m and k must be >= 1");
  using detail::var;
  const std::size_t n = g.size();
  lp::Model model;
  model.comments = {
      "m-connected k-dominating set, degree model (m = " + std::to_string(m) + ", k = " + std::to_string(k) + ").",
      "WARNING: rows e13 only bound each dominator's number of dominator neighbours.",
      "They are necessary for m-connectivity but do not guarantee it; certify solutions separately.",
      "For m = 1 the e13 coefficient is 0, since a single dominator is 1-connected.",
  };
  model.objective_name = "c";
  for (std::size_t s = 0; s < n; ++s) model.objective.push_back({1.0, var("x", s)});

  const double mc = static_cast<double>(degree_row_coefficient(m));
  const double kc = static_cast<double>(k);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<lp::Term> nbrs;
    for (NodeId t : g.neighbors(static_cast<NodeId>(s))) nbrs.push_back({1.0, var("x", t)});
    auto e13 = nbrs;
    e13.push_back({-mc, var("x", s)});
    model.rows.push_back({var("e13", s), std::move(e13), lp::Sense::GreaterEqual, 0.0});
    nbrs.push_back({kc, var("x", s)});
    model.rows.push_back({var("e14", s), std::move(nbrs), lp::Sense::GreaterEqual, kc});
  }
  for (std::size_t s = 0; s < n; ++s) model.binaries.push_back(var("x", s));
  return model;
}

inline std::string export_ilp_mck(const Graph& g, std::size_t m, std::size_t k) {
  return lp::write(mck_model(g, m, k));
}

}  // namespace rbb
