#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtacb/graph.hpp"

namespace gtacb {

enum class DegreeMode { Out, In, Total };

// Count of distinct neighbors in the given direction (unweighted).
std::vector<double> degree_centrality(const Graph& g, DegreeMode mode);

// cc(v) = 1 / (sum of hop distances from v to the nodes it can reach);
// nodes that reach nothing get 0.
std::vector<double> closeness_centrality(const Graph& g);

// Brandes betweenness over directed hop-count geodesics; endpoints
// excluded, no normalization.
std::vector<double> betweenness_centrality(const Graph& g);

struct PagerankOptions {
  double damping = 0.85;
  double tol = 1e-10;  // L1 change between iterations
  int max_iter = 200;
};

struct PagerankError : std::runtime_error {
  PagerankError(std::vector<double> last, double res, int iters);
  std::vector<double> last_iterate;
  double residual;
  int iterations;
};

// Weighted PageRank: rank flows along out-arcs proportionally to weight,
// dangling nodes distribute uniformly, teleport mass (1-damping)/n.
std::vector<double> pagerank(const Graph& g, const PagerankOptions& opts = {});

struct CentralityTable {
  std::vector<std::string> nodes;  // labels, graph index order
  std::vector<double> dc, cc, bc, pr;
};

// All four measures with the module defaults: degree mode Out on directed
// graphs and Total on symmetrized ones.
CentralityTable centrality_table(const Graph& g, const PagerankOptions& opts = {});

// CSV export: header `node,dc,cc,bc,pr`, 9 significant digits.
void write_centrality_csv(const CentralityTable& table, std::ostream& out);

}  // namespace gtacb
