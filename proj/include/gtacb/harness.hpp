#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gtacb/graph.hpp"
#include "gtacb/seeding.hpp"
#include "gtacb/sir.hpp"

namespace gtacb {

// |a n b| / |a u b| over the seed node sets.
double jaccard(const SeedSet& a, const SeedSet& b);

// Symmetric matrix with unit diagonal; all sets must share the same K.
std::vector<std::vector<double>> jaccard_matrix(std::span<const SeedSet> sets);

// eta = (gamma - K) / tau: mean newly infected nodes per period.
double diffusion_speed(double gamma, int K, double tau);

struct ExperimentGrid {
  std::vector<std::string> methods;  // gtacb | dc | cc | bc | pr | topsis
  std::vector<int> k_values;
  std::vector<double> kappa_values;
  SirConfig sir;           // template; kappa and rng_seed set per cell
  SeedingOptions seeding;
  int jobs = 0;  // parallel cell workers
};

struct CellRecord {
  std::string method;
  int k = 0;
  double kappa = 0.0;
  double gamma_mean = 0.0;
  double gamma_std = 0.0;
  double gamma_pct = 0.0;  // gamma_mean / n
  double tau_mean = 0.0;
  double tau_std = 0.0;
  double eta = 0.0;
};

struct MethodSummary {
  std::string method;
  double mean_gamma_pct = 0.0;
  double mean_tau = 0.0;
  double mean_eta = 0.0;
};

struct ExperimentReport {
  std::vector<std::string> methods;
  std::vector<int> k_values;
  std::vector<double> kappa_values;
  std::vector<std::vector<SeedSet>> seed_sets;  // [method][k index]
  std::vector<CellRecord> cells;                // (method, K, kappa) order
  std::vector<MethodSummary> summary;           // grid means per method
  std::vector<std::vector<std::vector<double>>> jc;  // [k index][i][j]
};

// Seed sets are computed once per (method, K) and reused across kappa; each
// cell simulates with a stream derived from (seed, K, kappa index, seed-set
// content), so methods that pick the same nodes see identical outcomes.
ExperimentReport run_experiment_grid(const Graph& g, const ExperimentGrid& grid);

nlohmann::json report_to_json(const ExperimentReport& report);
void write_summary_csv(const ExperimentReport& report, const std::string& metric,
                       std::ostream& out);                       // metric column per method
void write_cells_csv(const ExperimentReport& report, std::ostream& out);  // long format
void write_jc_csv(const ExperimentReport& report, int k_index, std::ostream& out);

// Planted-module random graph: c near-equal modules over n nodes, overall
// edge density p, expected fraction r of realized edges intra-module
// (undirected, unit weights). Returns the graph and the planted assignment.
std::pair<Graph, std::vector<int>> generate_modular_graph(int n, int c, double p, double r,
                                                          std::uint64_t rng_seed);

}  // namespace gtacb
