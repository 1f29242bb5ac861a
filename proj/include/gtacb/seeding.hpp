#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gtacb/centrality.hpp"
#include "gtacb/community.hpp"
#include "gtacb/graph.hpp"
#include "gtacb/topsis.hpp"

namespace gtacb {

struct SeedProvenance {
  int community = -1;  // GTaCB only
  double score = 0.0;  // ranking score that selected the node
};

struct SeedSet {
  std::string method;
  std::vector<std::string> seeds;  // K distinct node labels, selection order
  std::vector<SeedProvenance> provenance;

  int k() const { return static_cast<int>(seeds.size()); }
};

// First (K mod H) communities get ceil(K/H) seeds, the rest floor(K/H);
// communities are assumed pre-sorted by decreasing size.
std::vector<int> allocation_quotas(int K, int H);

struct SeedingOptions {
  std::vector<double> weights = equal_weights(4);  // DC, CC, BC, PR
  CommunityOptions community;
  PagerankOptions pagerank;
};

// Decision matrix over the four centrality attributes, all benefit-type.
DecisionMatrix centrality_decision_matrix(const CentralityTable& table,
                                          const std::vector<double>& weights);

// GTaCB: partition into K communities, rank each community's induced
// subgraph by TOPSIS over its own centralities, allocate quota seeds per
// community in size order; a community smaller than its quota spills the
// shortfall to the next communities (wrapping once).
SeedSet gtacb_seeds(const Graph& g, int K, const SeedingOptions& opts = {});

// Same allocation but over an externally supplied partition.
SeedSet gtacb_seeds_from_partition(const Graph& g, int K, const Partition& part,
                                   const SeedingOptions& opts = {});

enum class BaselineMethod { Dc, Cc, Bc, Pr, Topsis };

BaselineMethod baseline_method_from_name(const std::string& name);

// Top-K nodes by a single measure on the whole graph; `topsis` ranks the
// full centrality table. Ties break by ascending node label.
SeedSet baseline_seeds(const Graph& g, int K, BaselineMethod method,
                       const SeedingOptions& opts = {});

// Dispatch by method name: gtacb | dc | cc | bc | pr | topsis.
SeedSet seeds_for_method(const Graph& g, int K, const std::string& method,
                         const SeedingOptions& opts = {});

nlohmann::json seed_set_to_json(const SeedSet& set);

// Accepts the JSON export or plain text with one node label per line.
SeedSet read_seed_set(std::istream& in);

}  // namespace gtacb
