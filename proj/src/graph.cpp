#include "gtacb/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace gtacb {

ParseError::ParseError(const std::string& msg, std::int64_t line_number)
    : std::runtime_error(line_number > 0 ? msg + " (line " + std::to_string(line_number) + ")"
                                         : msg),
      line(line_number) {}

bool label_less(std::string_view a, std::string_view b) {
  const auto is_decimal = [](std::string_view s) {
    if (s.empty() || s.size() > 18) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (is_decimal(a) && is_decimal(b)) {
    std::int64_t va = 0, vb = 0;
    std::from_chars(a.data(), a.data() + a.size(), va);
    std::from_chars(b.data(), b.data() + b.size(), vb);
    if (va != vb) return va < vb;
    return a < b;  // leading-zero variants stay distinct
  }
  return a < b;
}

std::optional<int> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Graph::require(std::string_view label) const {
  auto v = find(label);
  if (!v) throw std::out_of_range("unknown node: " + std::string(label));
  return *v;
}

double Graph::max_weight() const {
  double m = 0.0;
  for (const Arc& a : out_arcs_) m = std::max(m, a.weight);
  return m;
}

Graph Graph::from_arcs(std::vector<std::string> labels,
                       std::vector<std::pair<std::pair<int, int>, double>> arcs,
                       bool directed) {
  Graph g;
  g.labels_ = std::move(labels);
  g.directed_ = directed;
  const int n = g.node_count();
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  g.index_.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) g.index_.emplace(g.labels_[static_cast<std::size_t>(v)], v);
  if (g.index_.size() != g.labels_.size())
    throw std::invalid_argument("duplicate node labels");

  std::sort(arcs.begin(), arcs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  g.out_off_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.in_off_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.out_arcs_.reserve(arcs.size());
  for (const auto& [key, w] : arcs) {
    g.out_off_[static_cast<std::size_t>(key.first) + 1]++;
    g.in_off_[static_cast<std::size_t>(key.second) + 1]++;
    g.out_arcs_.push_back({key.second, w});
  }
  for (int v = 0; v < n; ++v) {
    g.out_off_[static_cast<std::size_t>(v) + 1] += g.out_off_[static_cast<std::size_t>(v)];
    g.in_off_[static_cast<std::size_t>(v) + 1] += g.in_off_[static_cast<std::size_t>(v)];
  }
  g.in_arcs_.resize(arcs.size());
  std::vector<std::int64_t> cursor(g.in_off_.begin(), g.in_off_.end() - 1);
  for (const auto& [key, w] : arcs)
    g.in_arcs_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(key.second)]++)] = {
        key.first, w};
  return g;
}

int GraphBuilder::add_node(std::string label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  const int idx = static_cast<int>(labels_.size());
  index_.emplace(label, idx);
  labels_.push_back(std::move(label));
  return idx;
}

void GraphBuilder::merge_arc(int src, int dst, double weight) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 32) |
      static_cast<std::uint32_t>(dst);
  auto [it, inserted] = arc_weight_.try_emplace(key, weight);
  if (!inserted) it->second += weight;
}

void GraphBuilder::add_arc_record(int src, int dst, double weight) {
  if (!std::isfinite(weight) || weight <= 0.0)
    throw std::invalid_argument("arc weight must be finite and > 0");
  report.records_read++;
  if (src == dst) {
    report.self_loops_dropped++;
    return;
  }
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 32) |
      static_cast<std::uint32_t>(dst);
  if (arc_weight_.count(key)) report.arcs_merged++;
  merge_arc(src, dst, weight);
}

void GraphBuilder::add_edge_record(int src, int dst, double weight) {
  if (!std::isfinite(weight) || weight <= 0.0)
    throw std::invalid_argument("edge weight must be finite and > 0");
  report.records_read++;
  report.was_symmetrized = true;
  if (src == dst) {
    report.self_loops_dropped++;
    return;
  }
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 32) |
      static_cast<std::uint32_t>(dst);
  if (arc_weight_.count(key)) report.arcs_merged++;
  merge_arc(src, dst, weight);
  merge_arc(dst, src, weight);
}

Graph GraphBuilder::build(bool directed) {
  std::vector<std::pair<std::pair<int, int>, double>> arcs;
  arcs.reserve(arc_weight_.size());
  double max_w = 0.0;
  for (const auto& [key, w] : arc_weight_) {
    arcs.push_back({{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu)}, w});
    max_w = std::max(max_w, w);
  }
  report.weight_scale = arcs.empty() ? 1.0 : max_w;
  return Graph::from_arcs(std::move(labels_), std::move(arcs), directed);
}

namespace {

// Splits a line into whitespace tokens, dropping `#`/`%` comment lines.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_comment_or_blank(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens[0][0] == '#' || tokens[0][0] == '%';
}

double parse_weight(std::string_view tok, std::int64_t line) {
  double w = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), w);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("malformed weight '" + std::string(tok) + "'", line);
  if (!std::isfinite(w) || w <= 0.0)
    throw ParseError("weight must be finite and > 0, got '" + std::string(tok) + "'", line);
  return w;
}

}  // namespace

std::pair<Graph, IngestReport> parse_edge_list(std::istream& in, bool directed,
                                               bool use_weights) {
  GraphBuilder b;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (is_comment_or_blank(tokens)) continue;
    if (tokens.size() < 2 || tokens.size() > 3)
      throw ParseError("expected 'src dst [weight]', got " +
                           std::to_string(tokens.size()) + " fields",
                       line_no);
    const int src = b.add_node(std::string(tokens[0]));
    const int dst = b.add_node(std::string(tokens[1]));
    double w = 1.0;
    if (tokens.size() == 3 && use_weights) w = parse_weight(tokens[2], line_no);
    try {
      if (directed)
        b.add_arc_record(src, dst, w);
      else
        b.add_edge_record(src, dst, w);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (b.record_count() == 0) throw ParseError("empty input: no edges found", 0);
  Graph g = b.build(directed);
  return {std::move(g), b.report};
}

std::pair<Graph, IngestReport> parse_pajek(std::istream& in) {
  enum class Section { None, Vertices, Arcs, Edges };
  Section section = Section::None;
  int n = 0;
  bool saw_vertices = false;
  bool saw_arc_section = false;
  GraphBuilder b;
  std::string line;
  std::int64_t line_no = 0;

  const auto parse_id = [&](std::string_view tok) {
    int id = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw ParseError("malformed vertex id '" + std::string(tok) + "'", line_no);
    if (id < 1 || id > n)
      throw ParseError("vertex id " + std::to_string(id) + " out of range 1.." +
                           std::to_string(n),
                       line_no);
    return id - 1;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (is_comment_or_blank(tokens)) continue;
    if (tokens[0][0] == '*') {
      std::string keyword(tokens[0].substr(1));
      std::transform(keyword.begin(), keyword.end(), keyword.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (keyword == "network") {
        continue;  // optional title line, e.g. "*Network USAir97"
      } else if (keyword == "vertices") {
        if (tokens.size() < 2) throw ParseError("*Vertices needs a count", line_no);
        int count = 0;
        const auto res =
            std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), count);
        if (res.ec != std::errc{} || count < 1)
          throw ParseError("invalid vertex count", line_no);
        n = count;
        saw_vertices = true;
        for (int v = 1; v <= n; ++v) b.add_node(std::to_string(v));
        section = Section::Vertices;
      } else if (keyword == "arcs") {
        section = Section::Arcs;
      } else if (keyword == "edges") {
        section = Section::Edges;
      } else {
        throw ParseError("unsupported Pajek section '*" + keyword + "'", line_no);
      }
      if (section != Section::Vertices && !saw_vertices)
        throw ParseError("missing *Vertices header before arc data", line_no);
      continue;
    }
    switch (section) {
      case Section::None:
        throw ParseError("data before any section header", line_no);
      case Section::Vertices:
        parse_id(tokens[0]);  // labels/coordinates after the id are ignored
        break;
      case Section::Arcs:
      case Section::Edges: {
        if (tokens.size() < 2)
          throw ParseError("expected 'src dst [weight]'", line_no);
        const int src = parse_id(tokens[0]);
        const int dst = parse_id(tokens[1]);
        const double w = tokens.size() >= 3 ? parse_weight(tokens[2], line_no) : 1.0;
        try {
          if (section == Section::Arcs) {
            saw_arc_section = true;
            b.add_arc_record(src, dst, w);
          } else {
            b.add_edge_record(src, dst, w);
          }
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), line_no);
        }
        break;
      }
    }
  }
  if (!saw_vertices) throw ParseError("missing *Vertices header", 0);
  Graph g = b.build(/*directed=*/saw_arc_section);
  return {std::move(g), b.report};
}

Graph normalize_weights(const Graph& g, double* weight_scale) {
  if (g.arc_count() < 1) throw std::invalid_argument("cannot normalize a graph with no arcs");
  const double scale = g.max_weight();
  if (weight_scale) *weight_scale = scale;
  std::vector<std::pair<std::pair<int, int>, double>> arcs;
  arcs.reserve(static_cast<std::size_t>(g.arc_count()));
  g.for_each_arc([&](int s, int d, double w) { arcs.push_back({{s, d}, w / scale}); });
  return Graph::from_arcs(g.labels(), std::move(arcs), g.directed());
}

Graph induced_subgraph(const Graph& g, std::span<const int> nodes) {
  std::vector<int> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int v : keep)
    if (v < 0 || v >= g.node_count())
      throw std::out_of_range("induced_subgraph: node index " + std::to_string(v) +
                              " out of range");
  if (keep.empty()) throw std::invalid_argument("induced_subgraph: empty node set");

  std::vector<int> remap(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    labels.push_back(g.label(keep[i]));
  }
  std::vector<std::pair<std::pair<int, int>, double>> arcs;
  for (int v : keep)
    for (const Arc& a : g.out(v))
      if (remap[static_cast<std::size_t>(a.node)] >= 0)
        arcs.push_back({{remap[static_cast<std::size_t>(v)],
                         remap[static_cast<std::size_t>(a.node)]},
                        a.weight});
  return Graph::from_arcs(std::move(labels), std::move(arcs), g.directed());
}

std::vector<int> bfs_distances(const Graph& g, int source, ArcDirection direction) {
  if (source < 0 || source >= g.node_count())
    throw std::out_of_range("bfs_distances: unknown source " + std::to_string(source));
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  dist[static_cast<std::size_t>(source)] = 0;
  std::queue<int> q;
  q.push(source);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    const auto arcs = direction == ArcDirection::Out ? g.out(v) : g.in(v);
    for (const Arc& a : arcs) {
      if (dist[static_cast<std::size_t>(a.node)] < 0) {
        dist[static_cast<std::size_t>(a.node)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(a.node);
      }
    }
  }
  return dist;
}

std::pair<std::vector<int>, int> connected_components(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Arc& a : g.out(v))
        if (comp[static_cast<std::size_t>(a.node)] < 0) {
          comp[static_cast<std::size_t>(a.node)] = count;
          stack.push_back(a.node);
        }
      for (const Arc& a : g.in(v))
        if (comp[static_cast<std::size_t>(a.node)] < 0) {
          comp[static_cast<std::size_t>(a.node)] = count;
          stack.push_back(a.node);
        }
    }
    ++count;
  }
  return {std::move(comp), count};
}

void write_edge_list(const Graph& g, std::ostream& out) {
  struct Row {
    const std::string* src;
    const std::string* dst;
    double w;
  };
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(g.arc_count()));
  g.for_each_arc([&](int s, int d, double w) {
    rows.push_back({&g.label(s), &g.label(d), w});
  });
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (*a.src != *b.src) return label_less(*a.src, *b.src);
    return label_less(*a.dst, *b.dst);
  });
  char buf[64];
  for (const Row& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g", r.w);
    out << *r.src << '\t' << *r.dst << '\t' << buf << '\n';
  }
}

}  // namespace gtacb
