#include "gtacb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gtacb/parallel.hpp"

namespace gtacb {

double jaccard(const SeedSet& a, const SeedSet& b) {
  if (a.seeds.empty() || b.seeds.empty())
    throw std::invalid_argument("jaccard requires non-empty seed sets");
  std::set<std::string> sa(a.seeds.begin(), a.seeds.end());
  std::set<std::string> sb(b.seeds.begin(), b.seeds.end());
  std::size_t inter = 0;
  for (const auto& s : sa) inter += sb.count(s);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::vector<double>> jaccard_matrix(std::span<const SeedSet> sets) {
  if (sets.size() < 2) throw std::invalid_argument("jaccard_matrix needs >= 2 seed sets");
  for (const SeedSet& s : sets)
    if (s.k() != sets[0].k())
      throw std::invalid_argument("jaccard_matrix requires equal K across seed sets");
  const std::size_t m = sets.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      out[i][j] = out[j][i] = jaccard(sets[i], sets[j]);
  return out;
}

double diffusion_speed(double gamma, int K, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("diffusion_speed requires tau > 0");
  return (gamma - K) / tau;
}

namespace {

// Content hash of a seed set, order-insensitive; identical seed sets share
// the same simulation stream regardless of which method produced them.
std::uint64_t seed_set_digest(const SeedSet& set) {
  std::vector<std::string> sorted = set.seeds;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& s : sorted) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(xs.size());
}

}  // namespace

ExperimentReport run_experiment_grid(const Graph& g, const ExperimentGrid& grid) {
  if (grid.methods.empty() || grid.k_values.empty() || grid.kappa_values.empty())
    throw std::invalid_argument("experiment grid must list methods, K values and kappa values");
  for (int k : grid.k_values)
    if (k < 1 || k > g.node_count())
      throw std::invalid_argument("grid K value out of range [1, n]");

  ExperimentReport report;
  report.methods = grid.methods;
  report.k_values = grid.k_values;
  report.kappa_values = grid.kappa_values;

  const std::size_t n_methods = grid.methods.size();
  const std::size_t n_k = grid.k_values.size();
  const std::size_t n_kappa = grid.kappa_values.size();

  report.seed_sets.resize(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m) {
    report.seed_sets[m].reserve(n_k);
    for (int k : grid.k_values)
      report.seed_sets[m].push_back(seeds_for_method(g, k, grid.methods[m], grid.seeding));
  }

  report.cells.resize(n_methods * n_k * n_kappa);
  parallel_for(static_cast<std::int64_t>(report.cells.size()), grid.jobs,
               [&](std::int64_t idx, int) {
                 const std::size_t m = static_cast<std::size_t>(idx) / (n_k * n_kappa);
                 const std::size_t ki = static_cast<std::size_t>(idx) / n_kappa % n_k;
                 const std::size_t qi = static_cast<std::size_t>(idx) % n_kappa;
                 const SeedSet& seeds = report.seed_sets[m][ki];

                 SirConfig cfg = grid.sir;
                 cfg.kappa = grid.kappa_values[qi];
                 cfg.jobs = 1;  // cells are already parallel
                 cfg.rng_seed = derive_seed(grid.sir.rng_seed,
                                            static_cast<std::uint64_t>(grid.k_values[ki]), qi,
                                            seed_set_digest(seeds));
                 const SirOutcome out = simulate(g, seeds, cfg);

                 CellRecord& cell = report.cells[static_cast<std::size_t>(idx)];
                 cell.method = grid.methods[m];
                 cell.k = grid.k_values[ki];
                 cell.kappa = grid.kappa_values[qi];
                 cell.gamma_mean = out.gamma_mean;
                 cell.gamma_std = out.gamma_std;
                 cell.gamma_pct = out.gamma_mean / g.node_count();
                 cell.tau_mean = out.tau_mean;
                 cell.tau_std = out.tau_std;
                 cell.eta = diffusion_speed(out.gamma_mean, grid.k_values[ki], out.tau_mean);
               });

  for (std::size_t m = 0; m < n_methods; ++m) {
    std::vector<double> pct, tau, eta;
    for (std::size_t i = m * n_k * n_kappa; i < (m + 1) * n_k * n_kappa; ++i) {
      pct.push_back(report.cells[i].gamma_pct);
      tau.push_back(report.cells[i].tau_mean);
      eta.push_back(report.cells[i].eta);
    }
    report.summary.push_back({grid.methods[m], mean_of(pct), mean_of(tau), mean_of(eta)});
  }

  report.jc.reserve(n_k);
  for (std::size_t ki = 0; ki < n_k; ++ki) {
    std::vector<SeedSet> sets;
    sets.reserve(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) sets.push_back(report.seed_sets[m][ki]);
    if (sets.size() >= 2) {
      report.jc.push_back(jaccard_matrix(sets));
    } else {
      report.jc.push_back({{1.0}});
    }
  }
  return report;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellRecord& c : report.cells)
    cells.push_back({{"method", c.method},
                     {"K", c.k},
                     {"kappa", c.kappa},
                     {"gamma_mean", c.gamma_mean},
                     {"gamma_std", c.gamma_std},
                     {"gamma_pct", c.gamma_pct},
                     {"tau_mean", c.tau_mean},
                     {"tau_std", c.tau_std},
                     {"eta", c.eta}});
  nlohmann::json summary = nlohmann::json::array();
  for (const MethodSummary& s : report.summary)
    summary.push_back({{"method", s.method},
                       {"mean_gamma_pct", s.mean_gamma_pct},
                       {"mean_tau", s.mean_tau},
                       {"mean_eta", s.mean_eta}});
  nlohmann::json seeds = nlohmann::json::array();
  for (std::size_t m = 0; m < report.methods.size(); ++m)
    for (std::size_t ki = 0; ki < report.k_values.size(); ++ki)
      seeds.push_back(seed_set_to_json(report.seed_sets[m][ki]));
  return {{"methods", report.methods}, {"k_values", report.k_values},
          {"kappa_values", report.kappa_values}, {"seed_sets", seeds},
          {"cells", cells}, {"summary", summary}, {"jaccard", report.jc}};
}

void write_summary_csv(const ExperimentReport& report, const std::string& metric,
                       std::ostream& out) {
  out << "method," << metric << '\n';
  char buf[32];
  for (const MethodSummary& s : report.summary) {
    double value = 0.0;
    if (metric == "mean_gamma_pct") value = s.mean_gamma_pct;
    else if (metric == "mean_tau") value = s.mean_tau;
    else if (metric == "mean_eta") value = s.mean_eta;
    else throw std::invalid_argument("unknown summary metric '" + metric + "'");
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    out << s.method << ',' << buf << '\n';
  }
}

void write_cells_csv(const ExperimentReport& report, std::ostream& out) {
  out << "method,K,kappa,gamma,tau,eta\n";
  char buf[96];
  for (const CellRecord& c : report.cells) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g", c.kappa, c.gamma_mean, c.tau_mean,
                  c.eta);
    out << c.method << ',' << c.k << ',' << buf << '\n';
  }
}

void write_jc_csv(const ExperimentReport& report, int k_index, std::ostream& out) {
  const auto& matrix = report.jc.at(static_cast<std::size_t>(k_index));
  out << "method";
  for (const std::string& m : report.methods) out << ',' << m;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << report.methods[i];
    for (double v : matrix[i]) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::pair<Graph, std::vector<int>> generate_modular_graph(int n, int c, double p, double r,
                                                          std::uint64_t rng_seed) {
  if (n < 1 || c < 1 || c > n) throw std::invalid_argument("need n >= c >= 1");
  if (!(p >= 0.0 && p <= 1.0) || !(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("p and r must lie in [0,1]");

  // near-equal planted modules via rounded boundaries
  std::vector<int> module(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(c), 0);
  for (int v = 0; v < n; ++v) {
    int m = static_cast<int>(static_cast<std::int64_t>(v) * c / n);
    module[static_cast<std::size_t>(v)] = m;
    size[static_cast<std::size_t>(m)]++;
  }

  // target average degree z = p(n-1); r of it lands on intra-module pairs
  const double z = p * (n - 1);
  if (c == n && r * z > 0.0)
    throw std::invalid_argument(
        "infeasible: intra-module edges demanded but every module is a single node");

  const double mbar = static_cast<double>(n) / c;
  const double q_out =
      c == 1 ? 0.0 : std::min(1.0, (1.0 - r) * z / (n - mbar));
  std::vector<double> q_in(static_cast<std::size_t>(c), 0.0);
  for (int m = 0; m < c; ++m) {
    const int sz = size[static_cast<std::size_t>(m)];
    if (sz < 2) continue;
    // with one module every edge is intra, so the full degree budget applies
    const double share = c == 1 ? z : r * z;
    q_in[static_cast<std::size_t>(m)] = std::min(1.0, share / (sz - 1));
  }

  RngStream stream(rng_seed, 0);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) labels.push_back(std::to_string(v));
  std::vector<std::pair<std::pair<int, int>, double>> arcs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same = module[static_cast<std::size_t>(i)] == module[static_cast<std::size_t>(j)];
      const double q = same ? q_in[static_cast<std::size_t>(module[static_cast<std::size_t>(i)])]
                            : q_out;
      if (q > 0.0 && stream.uniform01() < q) {
        arcs.push_back({{i, j}, 1.0});
        arcs.push_back({{j, i}, 1.0});
      }
    }
  return {Graph::from_arcs(std::move(labels), std::move(arcs), /*directed=*/false),
          std::move(module)};
}

}  // namespace gtacb
