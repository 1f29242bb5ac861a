#include "gtacb/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>

namespace gtacb {

std::vector<double> degree_centrality(const Graph& g, DegreeMode mode) {
  const int n = g.node_count();
  std::vector<double> dc(static_cast<std::size_t>(n), 0.0);
  if (mode == DegreeMode::Total) {
    std::vector<int> stamp(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
      int count = 0;
      for (const Arc& a : g.out(v))
        if (stamp[static_cast<std::size_t>(a.node)] != v) {
          stamp[static_cast<std::size_t>(a.node)] = v;
          ++count;
        }
      for (const Arc& a : g.in(v))
        if (stamp[static_cast<std::size_t>(a.node)] != v) {
          stamp[static_cast<std::size_t>(a.node)] = v;
          ++count;
        }
      dc[static_cast<std::size_t>(v)] = count;
    }
  } else {
    for (int v = 0; v < n; ++v)
      dc[static_cast<std::size_t>(v)] = static_cast<double>(
          mode == DegreeMode::Out ? g.out(v).size() : g.in(v).size());
  }
  return dc;
}

std::vector<double> closeness_centrality(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> cc(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v, ArcDirection::Out);
    std::int64_t sum = 0;
    for (int d : dist)
      if (d > 0) sum += d;
    cc[static_cast<std::size_t>(v)] = sum > 0 ? 1.0 / static_cast<double>(sum) : 0.0;
  }
  return cc;
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n)), delta(static_cast<std::size_t>(n));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      order.push_back(v);
      for (const Arc& a : g.out(v)) {
        const auto w = static_cast<std::size_t>(a.node);
        if (dist[w] < 0) {
          dist[w] = dist[static_cast<std::size_t>(v)] + 1;
          q.push(a.node);
        }
        if (dist[w] == dist[static_cast<std::size_t>(v)] + 1)
          sigma[w] += sigma[static_cast<std::size_t>(v)];
      }
    }
    // dependency accumulation over the BFS DAG, walked in reverse order
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = static_cast<std::size_t>(*it);
      for (const Arc& a : g.in(*it)) {
        const auto v = static_cast<std::size_t>(a.node);
        if (dist[v] >= 0 && dist[v] + 1 == dist[w])
          delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (*it != s) bc[w] += delta[w];
    }
  }
  return bc;
}

PagerankError::PagerankError(std::vector<double> last, double res, int iters)
    : std::runtime_error("pagerank did not converge after " + std::to_string(iters) +
                         " iterations (residual " + std::to_string(res) + ")"),
      last_iterate(std::move(last)),
      residual(res),
      iterations(iters) {}

std::vector<double> pagerank(const Graph& g, const PagerankOptions& opts) {
  if (!(opts.damping > 0.0 && opts.damping < 1.0))
    throw std::invalid_argument("pagerank damping must be in (0,1)");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("pagerank tol must be > 0");
  const int n = g.node_count();
  const double d = opts.damping;

  std::vector<double> out_wsum(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v)
    for (const Arc& a : g.out(v)) out_wsum[static_cast<std::size_t>(v)] += a.weight;

  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> next(static_cast<std::size_t>(n));
  double residual = 0.0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v)
      if (out_wsum[static_cast<std::size_t>(v)] == 0.0)
        dangling += x[static_cast<std::size_t>(v)];
    const double base = (1.0 - d) / n + d * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (int v = 0; v < n; ++v) {
      const auto sv = static_cast<std::size_t>(v);
      if (out_wsum[sv] == 0.0) continue;
      const double share = d * x[sv] / out_wsum[sv];
      for (const Arc& a : g.out(v)) next[static_cast<std::size_t>(a.node)] += share * a.weight;
    }
    residual = 0.0;
    for (int v = 0; v < n; ++v)
      residual += std::abs(next[static_cast<std::size_t>(v)] - x[static_cast<std::size_t>(v)]);
    x.swap(next);
    if (residual < opts.tol) return x;
  }
  throw PagerankError(std::move(x), residual, opts.max_iter);
}

CentralityTable centrality_table(const Graph& g, const PagerankOptions& opts) {
  CentralityTable t;
  t.nodes = g.labels();
  t.dc = degree_centrality(g, g.directed() ? DegreeMode::Out : DegreeMode::Total);
  t.cc = closeness_centrality(g);
  t.bc = betweenness_centrality(g);
  t.pr = pagerank(g, opts);
  return t;
}

void write_centrality_csv(const CentralityTable& table, std::ostream& out) {
  out << "node,dc,cc,bc,pr\n";
  char buf[160];
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g", table.dc[i], table.cc[i],
                  table.bc[i], table.pr[i]);
    out << table.nodes[i] << ',' << buf << '\n';
  }
}

}  // namespace gtacb
