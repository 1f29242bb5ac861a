#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "gtacb/graph.hpp"

namespace gtacb {

// Disjoint communities covering all nodes, indexed by decreasing size.
struct Partition {
  std::vector<int> assignment;            // node index -> community index
  int community_count = 0;                // H
  std::vector<int> sizes;                 // sizes[0] >= sizes[1] >= ...
  std::vector<std::vector<int>> members;  // ascending node index per community

  static Partition from_assignment(std::vector<int> assignment);
};

// Total weight of arcs whose endpoints lie in different communities.
double cut_cost(const Graph& g, const Partition& p);

struct CommunityOptions {
  int restarts = 20;            // k-means restarts, best cut cost wins
  int kmeans_max_iter = 100;
  std::uint64_t rng_seed = 0;
  double eig_tol = 1e-5;        // Ritz residual threshold
  int eig_max_iter = 2000;
};

struct EigensolverError : std::runtime_error {
  EigensolverError(double res, int iters);
  double residual;
  int iterations;
};

// Spectral K-way partitioning: symmetrize the weighted adjacency, embed
// nodes with the k leading eigenvectors of the degree-normalized operator
// (subspace iteration), row-normalize, then cluster with seeded k-means
// restarts, keeping the restart with the lowest cut cost. Empty clusters
// are dropped, so the result may hold fewer than k_target communities.
Partition detect_communities(const Graph& g, int k_target,
                             const CommunityOptions& opts = {});

// CSV `node,community` export/import so externally computed partitions can
// be substituted for the built-in detector.
void write_partition_csv(const Graph& g, const Partition& p, std::ostream& out);
Partition read_partition_csv(const Graph& g, std::istream& in);

}  // namespace gtacb
