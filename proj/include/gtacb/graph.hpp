#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gtacb {

// One adjacency entry: the neighbor index plus the arc weight. In an
// out-list `node` is the destination, in an in-list it is the source.
struct Arc {
  int node;
  double weight;
};

struct IngestReport {
  std::int64_t records_read = 0;
  std::int64_t arcs_merged = 0;
  std::int64_t self_loops_dropped = 0;
  bool was_symmetrized = false;
  double weight_scale = 1.0;  // max weight before normalization
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::int64_t line_number);
  std::int64_t line;
};

// Orders labels numerically when both are plain decimal integers and
// lexicographically otherwise. Every rank tie-break in the library uses
// this ordering so results do not depend on ingestion order.
bool label_less(std::string_view a, std::string_view b);

// Directed weighted graph with dense internal indices 0..n-1 assigned in
// first-seen order and a label map back to the input identifiers.
// Immutable after construction; safe for concurrent reads.
class Graph {
 public:
  int node_count() const { return static_cast<int>(labels_.size()); }
  std::int64_t arc_count() const { return static_cast<std::int64_t>(out_arcs_.size()); }

  // False when ingestion symmetrized the input (each edge became two arcs).
  bool directed() const { return directed_; }

  const std::string& label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> find(std::string_view label) const;
  int require(std::string_view label) const;  // throws std::out_of_range

  std::span<const Arc> out(int v) const {
    return {out_arcs_.data() + out_off_[static_cast<std::size_t>(v)],
            out_arcs_.data() + out_off_[static_cast<std::size_t>(v) + 1]};
  }
  std::span<const Arc> in(int v) const {
    return {in_arcs_.data() + in_off_[static_cast<std::size_t>(v)],
            in_arcs_.data() + in_off_[static_cast<std::size_t>(v) + 1]};
  }

  double max_weight() const;

  // Visits arcs as f(src, dst, weight) in ascending (src, dst) index order.
  template <class F>
  void for_each_arc(F&& f) const {
    for (int v = 0; v < node_count(); ++v)
      for (const Arc& a : out(v)) f(v, a.node, a.weight);
  }

  // Builds a graph from an explicit arc list. Arcs must already be unique,
  // self-loop free, and carry finite positive weights.
  static Graph from_arcs(std::vector<std::string> labels,
                         std::vector<std::pair<std::pair<int, int>, double>> arcs,
                         bool directed);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::int64_t> out_off_, in_off_;
  std::vector<Arc> out_arcs_, in_arcs_;
  bool directed_ = true;
};

// Accumulates ingestion records, enforcing the shared rules: self-loops are
// dropped and counted, duplicate (src, dst) arcs merge by weight sum, and
// weights must be finite and positive.
class GraphBuilder {
 public:
  int add_node(std::string label);
  void add_arc_record(int src, int dst, double weight);
  void add_edge_record(int src, int dst, double weight);  // symmetrized pair
  std::int64_t record_count() const { return report.records_read; }
  Graph build(bool directed);

  IngestReport report;

 private:
  void merge_arc(int src, int dst, double weight);
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::uint64_t, double> arc_weight_;
};

// Whitespace-delimited `src dst [weight]` lines; `#` and `%` start comments.
// With use_weights=false the weight column is ignored and all arcs get 1.0.
std::pair<Graph, IngestReport> parse_edge_list(std::istream& in, bool directed,
                                               bool use_weights = true);

// Pajek subset: `*Vertices N`, optional vertex lines, `*Arcs` (directed) and
// `*Edges` (symmetrized) sections. Vertex ids 1..N become labels "1".."N".
std::pair<Graph, IngestReport> parse_pajek(std::istream& in);

// Divides every weight by the maximum weight; resulting weights lie in (0,1].
// The pre-normalization maximum is stored through weight_scale when given.
Graph normalize_weights(const Graph& g, double* weight_scale = nullptr);

// Subgraph on `nodes` (internal indices) with all arcs between them; node
// order follows ascending original index, labels preserved.
Graph induced_subgraph(const Graph& g, std::span<const int> nodes);

enum class ArcDirection { Out, In };

// Hop-count geodesic distances from `source` along arc direction;
// unreachable nodes are marked -1.
std::vector<int> bfs_distances(const Graph& g, int source,
                               ArcDirection direction = ArcDirection::Out);

// Weakly connected components on the symmetrized adjacency; returns the
// component index per node, components numbered in first-seen order.
std::pair<std::vector<int>, int> connected_components(const Graph& g);

// Canonical serialization: `src<TAB>dst<TAB>weight`, one arc per line,
// sorted by (src, dst) label order, weights printed with 9 significant
// digits. Re-parsing yields the same arc multiset.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace gtacb
