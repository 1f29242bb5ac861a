#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gtacb/graph.hpp"
#include "gtacb/rng.hpp"
#include "gtacb/seeding.hpp"

namespace gtacb {

enum class TransmissionMode {
  PerEdge,        // each infectious in-neighbor attempts an independent trial
  SummedClamped,  // one trial with min(1, kappa * sum(w * alpha))
};

struct SirConfig {
  int L = 2;                               // infectious periods per node
  std::vector<double> alpha = {0.30, 0.15};  // infectiousness by infection age
  double kappa = 1.0;                      // relative infectiousness
  int iterations = 100;                    // Monte Carlo replications
  std::uint64_t rng_seed = 0;
  TransmissionMode mode = TransmissionMode::PerEdge;
  int jobs = 0;  // parallel replication workers; 0 = hardware concurrency

  void validate() const;
};

// Probability that one infectious neighbor of age `age` (1-based) passes
// the infection across an arc of weight w.
double edge_attempt_probability(double weight, int age, const SirConfig& cfg);

// Combined per-period infection probability for a susceptible node given
// its infectious in-arcs, under the configured transmission mode.
double combined_infection_probability(std::span<const std::pair<double, int>> in_arcs,
                                      const SirConfig& cfg);

struct SirRun {
  std::vector<std::uint8_t> ever_infected;        // per node flag
  int tau = 0;                                    // periods executed
  std::vector<std::array<int, 3>> compartments;   // (|S|,|I|,|R|) per period, [0] = t=0
};

// One replication: seeds start infected at t=0, states update synchronously
// each period, infected nodes recover after L infectious periods, and the
// run ends when no infectious node remains.
SirRun run_sir_once(const Graph& g, std::span<const int> seeds, const SirConfig& cfg,
                    RngStream& stream);

struct SirOutcome {
  double gamma_mean = 0.0;  // mean ever-infected count, seeds included
  double gamma_std = 0.0;
  double tau_mean = 0.0;
  double tau_std = 0.0;
  std::vector<double> psi;  // per-node infection frequency, graph index order
  int iterations = 0;
  std::vector<std::pair<int, int>> replications;  // per-replication (gamma, tau)
};

// Monte Carlo aggregate over cfg.iterations replications; replication i
// always draws from child stream i, so results do not depend on the number
// of workers.
SirOutcome simulate(const Graph& g, const SeedSet& seeds, const SirConfig& cfg);

// JSON export: gamma/tau moments, iterations, psi in graph node order.
nlohmann::json outcome_to_json(const SirOutcome& outcome);

}  // namespace gtacb
