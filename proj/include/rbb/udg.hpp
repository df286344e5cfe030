#pragma once

// Unit disk graph instances: generation, edge derivation and the text format.
//
// Instance file layout (one record per line, fields separated by one space,
// reals written in shortest round-trip form):
//
//   udg 1
//   n <count>
//   width <real>
//   height <real>
//   range <real>
//   seed <uint64>
//   node <id> <x> <y>          n lines, ids ascending from 0
//   edge <u> <v> <rate>        one line per edge, u < v, lexicographic order
//
// Lines starting with '#' and blank lines are ignored by the reader.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rbb/errors.hpp"
#include "rbb/graph.hpp"
#include "rbb/graph_props.hpp"
#include "rbb/rng.hpp"

namespace rbb {

inline constexpr double kMaxRate = 0.8;
inline constexpr std::size_t kMaxGenerationAttempts = 10'000;

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct InstanceSpec {
  std::size_t n = 50;
  double width = 100.0;
  double height = 100.0;
  double range = 25.0;
  std::uint64_t seed = 0;
  std::size_t connectivity_requirement = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("InstanceSpec: n must be >= 1");
    if (!(range > 0.0) || !std::isfinite(range)) throw std::invalid_argument("InstanceSpec: range must be > 0");
    if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("InstanceSpec: plane dimensions must be > 0");
    if (connectivity_requirement < 1)
      throw std::invalid_argument("InstanceSpec: connectivity_requirement must be >= 1");
  }
};

// Closed disks: distance exactly equal to the range is an edge.
inline bool within_range(const Point& a, const Point& b, double range) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= range * range;
}

inline Graph build_edges(const std::vector<Point>& points, double range) {
  if (points.empty()) throw std::invalid_argument("build_edges: no points");
  if (!(range > 0.0)) throw std::invalid_argument("build_edges: range must be > 0");
  Graph g(points.size());
  for (NodeId u = 0; u < points.size(); ++u)
    for (NodeId v = u + 1; v < points.size(); ++v)
      if (within_range(points[u], points[v], range)) g.add_edge(u, v);
  return g;
}

class UnitDiskGraph : public RatedGraph {
 public:
  UnitDiskGraph() = default;

  // Edges are derived from the geometry; rates are drawn uniformly from
  // [0, 0.8) out of `rng`, one per edge in lexicographic edge order.
  UnitDiskGraph(std::vector<Point> points, double width, double height, double range, std::uint64_t seed, Rng& rng)
      : UnitDiskGraph(std::move(points), width, height, range, seed) {
    for (auto [u, v] : graph().edges()) set_rate(u, v, kMaxRate * rng.uniform01());
  }

  // Edges derived from the geometry, all rates zero.
  UnitDiskGraph(std::vector<Point> points, double width, double height, double range, std::uint64_t seed)
      : RatedGraph(build_edges(points, range)),
        points_(std::move(points)),
        width_(width),
        height_(height),
        range_(range),
        seed_(seed) {
    for (const auto& p : points_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0 || p.y < 0 || p.x > width_ || p.y > height_)
        throw std::invalid_argument("UnitDiskGraph: point outside the deployment plane");
  }

  const std::vector<Point>& points() const noexcept { return points_; }
  double width() const noexcept { return width_; }
  double height() const noexcept { return height_; }
  double range() const noexcept { return range_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool operator==(const UnitDiskGraph&) const = default;

 private:
  std::vector<Point> points_;
  double width_ = 0.0;
  double height_ = 0.0;
  double range_ = 0.0;
  std::uint64_t seed_ = 0;
};

// True when g meets a vertex-connectivity requirement; a single vertex is
// taken to be 1-connected.
inline bool meets_connectivity(const Graph& g, std::size_t requirement) {
  if (g.size() == 1) return requirement <= 1;
  if (requirement <= 1) return is_connected(g);
  return vertex_connectivity(g, requirement) >= requirement;
}

// Attempt a (0-based) draws from Rng(derive_seed(spec.seed, a)): 2n uniform
// reals as x0, y0, x1, y1, ...; once the geometry is accepted the same stream
// continues with the edge rates.
inline UnitDiskGraph generate_instance(const InstanceSpec& spec) {
  spec.validate();
  for (std::size_t attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Rng rng(derive_seed(spec.seed, attempt));
    std::vector<Point> points(spec.n);
    for (auto& p : points) {
      p.x = spec.width * rng.uniform01();
      p.y = spec.height * rng.uniform01();
    }
    if (!meets_connectivity(build_edges(points, spec.range), spec.connectivity_requirement)) continue;
    return UnitDiskGraph(std::move(points), spec.width, spec.height, spec.range, spec.seed, rng);
  }
  throw GenerationExhausted("generate_instance: " + std::to_string(kMaxGenerationAttempts) +
                            " consecutive draws missed the connectivity requirement");
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

template <class T>
T parse_field(std::string_view text, std::size_t line, const std::string& field) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError(line, field, "cannot parse '" + std::string(text) + "'");
  return value;
}

// Splits text into (line number, fields) records, skipping blanks and comments.
inline std::vector<std::pair<std::size_t, std::vector<std::string_view>>> records(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    auto fields = split_fields(text.substr(pos, end - pos));
    if (!fields.empty() && fields[0][0] != '#') out.emplace_back(line_no, std::move(fields));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace detail

inline std::string serialize_instance(const UnitDiskGraph& g) {
  using detail::format_real;
  std::ostringstream out;
  out << "udg 1\n"
      << "n " << g.size() << '\n'
      << "width " << format_real(g.width()) << '\n'
      << "height " << format_real(g.height()) << '\n'
      << "range " << format_real(g.range()) << '\n'
      << "seed " << g.seed() << '\n';
  for (NodeId v = 0; v < g.size(); ++v)
    out << "node " << v << ' ' << format_real(g.points()[v].x) << ' ' << format_real(g.points()[v].y) << '\n';
  for (auto [u, v] : g.graph().edges()) out << "edge " << u << ' ' << v << ' ' << format_real(g.rate(u, v)) << '\n';
  return out.str();
}

inline UnitDiskGraph deserialize_instance(std::string_view text) {
  using detail::parse_field;
  const auto recs = detail::records(text);
  std::size_t cursor = 0;

  auto expect = [&](std::string_view keyword, std::size_t arity) -> const auto& {
    if (cursor >= recs.size()) {
      const std::size_t line = recs.empty() ? 1 : recs.back().first + 1;
      throw ParseError(line, std::string(keyword), "unexpected end of input");
    }
    const auto& [line, fields] = recs[cursor];
    if (fields[0] != keyword)
      throw ParseError(line, std::string(keyword), "expected '" + std::string(keyword) + "', found '" +
                                                       std::string(fields[0]) + "'");
    if (fields.size() != arity + 1)
      throw ParseError(line, std::string(keyword),
                       "expected " + std::to_string(arity) + " value(s), found " + std::to_string(fields.size() - 1));
    ++cursor;
    return recs[cursor - 1];
  };

  {
    const auto& [line, f] = expect("udg", 1);
    if (parse_field<int>(f[1], line, "udg") != 1) throw ParseError(line, "udg", "unsupported format version");
  }
  const auto& [n_line, n_f] = expect("n", 1);
  const auto n = parse_field<std::size_t>(n_f[1], n_line, "n");
  if (n == 0) throw ParseError(n_line, "n", "instance needs at least one node");
  const auto& [w_line, w_f] = expect("width", 1);
  const double width = parse_field<double>(w_f[1], w_line, "width");
  const auto& [h_line, h_f] = expect("height", 1);
  const double height = parse_field<double>(h_f[1], h_line, "height");
  const auto& [r_line, r_f] = expect("range", 1);
  const double range = parse_field<double>(r_f[1], r_line, "range");
  if (!(range > 0.0)) throw ParseError(r_line, "range", "range must be > 0");
  const auto& [s_line, s_f] = expect("seed", 1);
  const auto seed = parse_field<std::uint64_t>(s_f[1], s_line, "seed");

  std::vector<Point> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [line, f] = expect("node", 3);
    if (parse_field<std::size_t>(f[1], line, "node.id") != i)
      throw ParseError(line, "node.id", "expected id " + std::to_string(i));
    points[i] = {parse_field<double>(f[2], line, "node.x"), parse_field<double>(f[3], line, "node.y")};
    const auto& p = points[i];
    if (!(p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height))
      throw ParseError(line, "node", "point outside the deployment plane");
  }

  std::optional<UnitDiskGraph> g;
  try {
    g.emplace(std::move(points), width, height, range, seed);
  } catch (const std::invalid_argument& e) {
    throw ParseError(n_line, "node", e.what());
  }

  std::size_t edges_read = 0;
  const auto expected_edges = g->graph().edges();
  while (cursor < recs.size()) {
    const auto& [line, f] = expect("edge", 3);
    const auto u = parse_field<NodeId>(f[1], line, "edge.u");
    const auto v = parse_field<NodeId>(f[2], line, "edge.v");
    const double rate = parse_field<double>(f[3], line, "edge.rate");
    if (edges_read >= expected_edges.size() || expected_edges[edges_read] != Edge{u, v})
      throw ParseError(line, "edge", "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                         ") does not match the geometry or is out of order");
    if (!(rate >= 0.0 && rate <= kMaxRate)) throw ParseError(line, "edge.rate", "rate outside [0, 0.8]");
    g->set_rate(u, v, rate);
    ++edges_read;
  }
  if (edges_read != expected_edges.size())
    throw ParseError(recs.empty() ? 1 : recs.back().first + 1, "edge",
                     "expected " + std::to_string(expected_edges.size()) + " edges, found " +
                         std::to_string(edges_read));
  return std::move(*g);
}

}  // namespace rbb
