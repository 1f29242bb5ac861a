#include "gtacb/sir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gtacb/parallel.hpp"

namespace gtacb {

void SirConfig::validate() const {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (static_cast<int>(alpha.size()) != L)
    throw std::invalid_argument("alpha must list exactly L rates");
  for (double a : alpha)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("alpha rates must lie in [0,1]");
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw std::invalid_argument("kappa must lie in [0,1]");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
}

double edge_attempt_probability(double weight, int age, const SirConfig& cfg) {
  return std::min(1.0, cfg.kappa * cfg.alpha[static_cast<std::size_t>(age - 1)] * weight);
}

double combined_infection_probability(std::span<const std::pair<double, int>> in_arcs,
                                      const SirConfig& cfg) {
  if (cfg.mode == TransmissionMode::SummedClamped) {
    double sum = 0.0;
    for (const auto& [w, age] : in_arcs)
      sum += w * cfg.alpha[static_cast<std::size_t>(age - 1)];
    return std::min(1.0, cfg.kappa * sum);
  }
  double escape = 1.0;
  for (const auto& [w, age] : in_arcs)
    escape *= 1.0 - edge_attempt_probability(w, age, cfg);
  return 1.0 - escape;
}

namespace {

enum Status : std::uint8_t { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

}  // namespace

SirRun run_sir_once(const Graph& g, std::span<const int> seeds, const SirConfig& cfg,
                    RngStream& stream) {
  const int n = g.node_count();
  SirRun run;
  run.ever_infected.assign(static_cast<std::size_t>(n), 0);

  std::vector<std::uint8_t> status(static_cast<std::size_t>(n), kSusceptible);
  std::vector<int> age(static_cast<std::size_t>(n), 0);  // completed infectious periods
  std::vector<int> infected;                             // ascending node index
  infected.reserve(seeds.size());
  for (int s : seeds) {
    if (s < 0 || s >= n) throw std::out_of_range("seed index out of range");
    if (status[static_cast<std::size_t>(s)] == kInfected)
      throw std::invalid_argument("duplicate seed");
    status[static_cast<std::size_t>(s)] = kInfected;
    run.ever_infected[static_cast<std::size_t>(s)] = 1;
    infected.push_back(s);
  }
  std::sort(infected.begin(), infected.end());

  int s_count = n - static_cast<int>(infected.size());
  int i_count = static_cast<int>(infected.size());
  int r_count = 0;
  run.compartments.push_back({s_count, i_count, r_count});

  std::vector<int> candidates;
  std::vector<int> newly;
  std::vector<std::uint8_t> is_candidate(static_cast<std::size_t>(n), 0);

  while (!infected.empty()) {
    ++run.tau;
    candidates.clear();
    for (int j : infected)
      for (const Arc& a : g.out(j))
        if (status[static_cast<std::size_t>(a.node)] == kSusceptible &&
            !is_candidate[static_cast<std::size_t>(a.node)]) {
          is_candidate[static_cast<std::size_t>(a.node)] = 1;
          candidates.push_back(a.node);
        }
    std::sort(candidates.begin(), candidates.end());

    newly.clear();
    for (int i : candidates) {
      is_candidate[static_cast<std::size_t>(i)] = 0;
      if (cfg.mode == TransmissionMode::PerEdge) {
        for (const Arc& a : g.in(i)) {
          if (status[static_cast<std::size_t>(a.node)] != kInfected) continue;
          const double p =
              edge_attempt_probability(a.weight, age[static_cast<std::size_t>(a.node)] + 1, cfg);
          if (p > 0.0 && stream.uniform01() < p) {
            newly.push_back(i);
            break;  // further attempts cannot change the outcome
          }
        }
      } else {
        double sum = 0.0;
        for (const Arc& a : g.in(i))
          if (status[static_cast<std::size_t>(a.node)] == kInfected)
            sum +=
                a.weight * cfg.alpha[static_cast<std::size_t>(age[static_cast<std::size_t>(a.node)])];
        const double p = std::min(1.0, cfg.kappa * sum);
        if (p > 0.0 && stream.uniform01() < p) newly.push_back(i);
      }
    }

    // synchronous update: aging and recovery first, then the new arrivals
    std::size_t keep = 0;
    for (int j : infected) {
      if (++age[static_cast<std::size_t>(j)] >= cfg.L) {
        status[static_cast<std::size_t>(j)] = kRecovered;
        ++r_count;
        --i_count;
      } else {
        infected[keep++] = j;
      }
    }
    infected.resize(keep);
    for (int i : newly) {
      status[static_cast<std::size_t>(i)] = kInfected;
      age[static_cast<std::size_t>(i)] = 0;
      run.ever_infected[static_cast<std::size_t>(i)] = 1;
      ++i_count;
      --s_count;
    }
    if (!newly.empty()) {
      infected.insert(infected.end(), newly.begin(), newly.end());
      std::inplace_merge(infected.begin(),
                         infected.end() - static_cast<std::ptrdiff_t>(newly.size()),
                         infected.end());
    }
    run.compartments.push_back({s_count, i_count, r_count});
  }
  return run;
}

namespace {

double kahan_mean(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(xs.size());
}

double kahan_std(const std::vector<double>& xs, double mean) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    const double y = d - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::sqrt(sum / static_cast<double>(xs.size()));
}

}  // namespace

SirOutcome simulate(const Graph& g, const SeedSet& seeds, const SirConfig& cfg) {
  cfg.validate();
  const int n = g.node_count();
  std::vector<int> seed_idx;
  seed_idx.reserve(seeds.seeds.size());
  for (const std::string& label : seeds.seeds) seed_idx.push_back(g.require(label));

  const int reps = cfg.iterations;
  std::vector<std::pair<int, int>> results(static_cast<std::size_t>(reps));
  const int workers = resolve_jobs(cfg.jobs, reps);
  std::vector<std::vector<std::int64_t>> psi_counts(
      static_cast<std::size_t>(workers),
      std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));

  parallel_for(reps, cfg.jobs, [&](std::int64_t rep, int worker) {
    RngStream stream(cfg.rng_seed, static_cast<std::uint64_t>(rep));
    const SirRun run = run_sir_once(g, seed_idx, cfg, stream);
    int gamma = 0;
    auto& counts = psi_counts[static_cast<std::size_t>(worker)];
    for (int v = 0; v < n; ++v)
      if (run.ever_infected[static_cast<std::size_t>(v)]) {
        ++gamma;
        ++counts[static_cast<std::size_t>(v)];
      }
    results[static_cast<std::size_t>(rep)] = {gamma, run.tau};
  });

  SirOutcome out;
  out.iterations = reps;
  out.replications = std::move(results);
  std::vector<double> gammas(static_cast<std::size_t>(reps)), taus(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    gammas[static_cast<std::size_t>(r)] = out.replications[static_cast<std::size_t>(r)].first;
    taus[static_cast<std::size_t>(r)] = out.replications[static_cast<std::size_t>(r)].second;
  }
  out.gamma_mean = kahan_mean(gammas);
  out.gamma_std = kahan_std(gammas, out.gamma_mean);
  out.tau_mean = kahan_mean(taus);
  out.tau_std = kahan_std(taus, out.tau_mean);
  out.psi.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    std::int64_t total = 0;
    for (int w = 0; w < workers; ++w)
      total += psi_counts[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
    out.psi[static_cast<std::size_t>(v)] = static_cast<double>(total) / reps;
  }
  return out;
}

nlohmann::json outcome_to_json(const SirOutcome& outcome) {
  return {{"gamma_mean", outcome.gamma_mean}, {"gamma_std", outcome.gamma_std},
          {"tau_mean", outcome.tau_mean},     {"tau_std", outcome.tau_std},
          {"iterations", outcome.iterations}, {"psi", outcome.psi}};
}

}  // namespace gtacb
