#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gtacb/harness.hpp"
#include "gtacb/rng.hpp"
#include "gtacb/sir.hpp"
#include "oracles.hpp"

using namespace gtacb;

namespace {

Graph parse(const std::string& text, bool directed) {
  std::istringstream in(text);
  return parse_edge_list(in, directed).first;
}

SeedSet seeds_of(std::vector<std::string> labels) {
  SeedSet s;
  s.method = "fixed";
  s.seeds = std::move(labels);
  s.provenance.assign(s.seeds.size(), SeedProvenance{});
  return s;
}

}  // namespace

TEST_CASE("transmission probabilities") {
  SirConfig cfg;
  cfg.L = 2;
  cfg.alpha = {0.3, 0.15};

  cfg.kappa = 0.0;
  CHECK(edge_attempt_probability(1.0, 1, cfg) == 0.0);
  CHECK(edge_attempt_probability(0.5, 2, cfg) == 0.0);

  cfg.kappa = 0.5;
  CHECK(edge_attempt_probability(1.0, 1, cfg) == doctest::Approx(0.15));
  const std::vector<std::pair<double, int>> one = {{1.0, 1}};
  cfg.mode = TransmissionMode::PerEdge;
  CHECK(combined_infection_probability(one, cfg) == doctest::Approx(0.15));
  cfg.mode = TransmissionMode::SummedClamped;
  CHECK(combined_infection_probability(one, cfg) == doctest::Approx(0.15));

  // two unit-weight age-1 neighbors at kappa=1: the modes diverge
  cfg.kappa = 1.0;
  const std::vector<std::pair<double, int>> two = {{1.0, 1}, {1.0, 1}};
  cfg.mode = TransmissionMode::PerEdge;
  CHECK(combined_infection_probability(two, cfg) == doctest::Approx(0.51).epsilon(1e-12));
  cfg.mode = TransmissionMode::SummedClamped;
  CHECK(combined_infection_probability(two, cfg) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("kappa zero leaves only the seeds infected for L periods") {
  const auto [g, planted] = generate_modular_graph(15, 2, 0.4, 0.8, 1);
  SirConfig cfg;
  cfg.L = 3;
  cfg.alpha = {0.3, 0.2, 0.1};
  cfg.kappa = 0.0;
  cfg.iterations = 20;
  const SeedSet seeds = seeds_of({"1", "5"});
  const SirOutcome out = simulate(g, seeds, cfg);
  CHECK(out.gamma_mean == 2.0);
  CHECK(out.gamma_std == 0.0);
  CHECK(out.tau_mean == 3.0);
  CHECK(out.tau_std == 0.0);
  for (int v = 0; v < g.node_count(); ++v) {
    const bool is_seed = g.label(v) == "1" || g.label(v) == "5";
    CHECK(out.psi[static_cast<std::size_t>(v)] == (is_seed ? 1.0 : 0.0));
  }
}

TEST_CASE("deterministic chain infects everything in three periods") {
  const Graph g = parse("1 2\n2 3\n", true);
  SirConfig cfg;
  cfg.L = 1;
  cfg.alpha = {1.0};
  cfg.kappa = 1.0;
  cfg.iterations = 50;
  const SirOutcome out = simulate(g, seeds_of({"1"}), cfg);
  CHECK(out.gamma_mean == 3.0);
  CHECK(out.gamma_std == 0.0);
  CHECK(out.tau_mean == 3.0);
  CHECK(out.tau_std == 0.0);
  for (double p : out.psi) CHECK(p == 1.0);
}

TEST_CASE("single run on the chain, traced by hand") {
  const Graph g = parse("1 2\n2 3\n", true);
  SirConfig cfg;
  cfg.L = 1;
  cfg.alpha = {1.0};
  cfg.kappa = 1.0;
  RngStream stream(9, 0);
  const std::vector<int> seeds = {g.require("1")};
  const SirRun run = run_sir_once(g, seeds, cfg, stream);
  CHECK(run.tau == 3);
  // compartments: t0 (2,1,0) -> (1,1,1) -> (0,1,2) -> (0,0,3)
  REQUIRE(run.compartments.size() == 4);
  CHECK(run.compartments[0] == std::array<int, 3>{2, 1, 0});
  CHECK(run.compartments[1] == std::array<int, 3>{1, 1, 1});
  CHECK(run.compartments[2] == std::array<int, 3>{0, 1, 2});
  CHECK(run.compartments[3] == std::array<int, 3>{0, 0, 3});
}

TEST_CASE("a disconnected seed only infects itself") {
  std::istringstream in("*Vertices 3\n*Edges\n1 2\n");
  const Graph g = parse_pajek(in).first;
  SirConfig cfg;
  cfg.L = 2;
  cfg.alpha = {0.3, 0.15};
  cfg.kappa = 1.0;
  RngStream stream(0, 0);
  const std::vector<int> seeds = {g.require("3")};
  const SirRun run = run_sir_once(g, seeds, cfg, stream);
  CHECK(run.tau == 2);
  int ever = 0;
  for (auto f : run.ever_infected) ever += f;
  CHECK(ever == 1);
}

TEST_CASE("conservation and progressivity hold every period") {
  const auto [g, planted] = generate_modular_graph(40, 2, 0.25, 0.85, 17);
  SirConfig cfg;
  cfg.kappa = 0.7;
  const int n = g.node_count();
  for (int rep = 0; rep < 30; ++rep) {
    RngStream stream(55, static_cast<std::uint64_t>(rep));
    const std::vector<int> seeds = {0, 7};
    const SirRun run = run_sir_once(g, seeds, cfg, stream);
    int prev_r = 0;
    int prev_s = n;
    for (const auto& [s, i, r] : run.compartments) {
      CHECK(s + i + r == n);
      CHECK(r >= prev_r);  // recovered never leaves
      CHECK(s <= prev_s);  // susceptible never returns
      prev_r = r;
      prev_s = s;
    }
    CHECK(run.compartments.back()[1] == 0);
    CHECK(run.tau >= cfg.L);
  }
}

TEST_CASE("modes coincide on a directed chain") {
  // every susceptible node has at most one infectious in-neighbor, so the
  // two transmission modes draw identical trials
  const Graph g = parse("1 2\n2 3\n3 4\n4 5\n", true);
  SirConfig cfg;
  cfg.L = 2;
  cfg.alpha = {0.6, 0.3};
  cfg.kappa = 0.9;
  const std::vector<int> seeds = {g.require("1")};
  for (int rep = 0; rep < 40; ++rep) {
    RngStream s1(4, static_cast<std::uint64_t>(rep));
    RngStream s2(4, static_cast<std::uint64_t>(rep));
    SirConfig per = cfg;
    per.mode = TransmissionMode::PerEdge;
    SirConfig summed = cfg;
    summed.mode = TransmissionMode::SummedClamped;
    const SirRun a = run_sir_once(g, seeds, per, s1);
    const SirRun b = run_sir_once(g, seeds, summed, s2);
    CHECK(a.tau == b.tau);
    CHECK(a.ever_infected == b.ever_infected);
  }
}

TEST_CASE("simulate is deterministic and independent of worker count") {
  const auto [g, planted] = generate_modular_graph(30, 2, 0.3, 0.85, 23);
  SirConfig cfg;
  cfg.kappa = 0.6;
  cfg.iterations = 100;
  cfg.rng_seed = 99;
  const SeedSet seeds = seeds_of({"1", "2", "17"});
  cfg.jobs = 1;
  const SirOutcome a = simulate(g, seeds, cfg);
  cfg.jobs = 4;
  const SirOutcome b = simulate(g, seeds, cfg);
  CHECK(a.gamma_mean == b.gamma_mean);
  CHECK(a.gamma_std == b.gamma_std);
  CHECK(a.tau_mean == b.tau_mean);
  CHECK(a.psi == b.psi);
  CHECK(a.replications == b.replications);
}

TEST_CASE("outcome invariants on random runs") {
  const auto [g, planted] = generate_modular_graph(25, 2, 0.3, 0.8, 31);
  SirConfig cfg;
  cfg.kappa = 0.5;
  cfg.iterations = 60;
  const SeedSet seeds = seeds_of({"3", "12", "20"});
  const SirOutcome out = simulate(g, seeds, cfg);
  CHECK(out.gamma_mean >= 3.0);
  CHECK(out.gamma_mean <= g.node_count());
  CHECK(out.tau_mean >= cfg.L);
  for (const std::string& s : seeds.seeds)
    CHECK(out.psi[static_cast<std::size_t>(g.require(s))] == 1.0);
  for (double p : out.psi) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("gamma mean grows with kappa within sampling error") {
  const auto [g, planted] = generate_modular_graph(60, 3, 0.15, 0.8, 47);
  const SeedSet seeds = seeds_of({"1", "25", "45"});
  double prev_mean = 0.0, prev_se = 0.0;
  bool first = true;
  for (double kappa : {0.0, 0.5, 1.0}) {
    SirConfig cfg;
    cfg.kappa = kappa;
    cfg.iterations = 300;
    cfg.rng_seed = 7;
    const SirOutcome out = simulate(g, seeds, cfg);
    const double se = out.gamma_std / std::sqrt(static_cast<double>(cfg.iterations));
    if (!first)
      CHECK(out.gamma_mean >= prev_mean - 2.0 * std::sqrt(se * se + prev_se * prev_se));
    prev_mean = out.gamma_mean;
    prev_se = se;
    first = false;
  }
}

TEST_CASE("outcome json carries the aggregate fields") {
  const Graph g = parse("1 2\n2 3\n", true);
  SirConfig cfg;
  cfg.L = 1;
  cfg.alpha = {1.0};
  cfg.iterations = 5;
  const SirOutcome out = simulate(g, seeds_of({"1"}), cfg);
  const auto doc = outcome_to_json(out);
  CHECK(doc.at("gamma_mean").get<double>() == 3.0);
  CHECK(doc.at("tau_mean").get<double>() == 3.0);
  CHECK(doc.at("iterations").get<int>() == 5);
  CHECK(doc.at("psi").size() == 3);
}

TEST_CASE("unknown seed labels are rejected") {
  const Graph g = parse("1 2\n", true);
  SirConfig cfg;
  CHECK_THROWS_AS(simulate(g, seeds_of({"1", "zz"}), cfg), std::out_of_range);
}

TEST_CASE("configuration validation") {
  SirConfig cfg;
  cfg.L = 2;
  cfg.alpha = {0.3};  // wrong length
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.alpha = {0.3, 0.15};
  cfg.kappa = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.kappa = 0.5;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.iterations = 10;
  cfg.alpha = {0.3, 1.15};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.alpha = {0.3, 0.15};
  CHECK_NOTHROW(cfg.validate());
}
