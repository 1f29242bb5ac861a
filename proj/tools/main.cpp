#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gtacb/centrality.hpp"
#include "gtacb/community.hpp"
#include "gtacb/graph.hpp"
#include "gtacb/harness.hpp"
#include "gtacb/seeding.hpp"
#include "gtacb/sir.hpp"
#include "gtacb/topsis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Every run drops a manifest next to its outputs; re-running with the same
// parameters reproduces all files byte-identically. Scheduling width
// (--jobs) is deliberately left out: it never affects results.
void write_manifest(const fs::path& outdir, const std::string& command, json parameters,
                    std::uint64_t rng_seed, const std::vector<fs::path>& inputs,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["tool"] = "gtacb";
  manifest["version"] = kToolVersion;
  manifest["command"] = command;
  manifest["parameters"] = std::move(parameters);
  manifest["rng_seed"] = rng_seed;
  json in_list = json::array();
  for (const fs::path& p : inputs)
    in_list.push_back({{"path", p.string()}, {"fnv1a64", fnv1a64_file(p)}});
  manifest["inputs"] = std::move(in_list);
  manifest["outputs"] = outputs;
  write_text_file(outdir / "manifest.json", manifest.dump(2) + "\n");
}

struct GraphArgs {
  std::string path;
  std::string format = "auto";  // auto | edgelist | pajek
  bool directed = false;
  bool ignore_weights = false;
  bool no_normalize = false;
};

void add_graph_options(CLI::App* cmd, GraphArgs& args) {
  cmd->add_option("-g,--graph", args.path, "graph file (edge list or Pajek)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", args.format, "input format")
      ->check(CLI::IsMember({"auto", "edgelist", "pajek"}))
      ->capture_default_str();
  cmd->add_flag("--directed", args.directed,
                "treat edge-list lines as directed arcs (default: symmetrize)");
  cmd->add_flag("--ignore-weights", args.ignore_weights,
                "ignore the weight column, use 1.0 everywhere");
  cmd->add_flag("--no-normalize", args.no_normalize,
                "keep raw weights instead of dividing by the maximum");
}

std::pair<gtacb::Graph, gtacb::IngestReport> load_graph(const GraphArgs& args) {
  std::string format = args.format;
  if (format == "auto") {
    const std::string ext = fs::path(args.path).extension().string();
    format = (ext == ".net" || ext == ".paj") ? "pajek" : "edgelist";
  }
  std::ifstream in(args.path);
  if (!in) throw std::runtime_error("cannot open graph file: " + args.path);
  auto [g, report] = format == "pajek"
                         ? gtacb::parse_pajek(in)
                         : gtacb::parse_edge_list(in, args.directed, !args.ignore_weights);
  if (!args.no_normalize && g.arc_count() > 0) {
    double scale = 1.0;
    g = gtacb::normalize_weights(g, &scale);
    report.weight_scale = scale;
  }
  return {std::move(g), report};
}

json graph_params(const GraphArgs& args) {
  return {{"graph", args.path},         {"format", args.format},
          {"directed", args.directed},  {"ignore_weights", args.ignore_weights},
          {"no_normalize", args.no_normalize}};
}

fs::path prepare_outdir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

int run_cli(int argc, char** argv) {
  CLI::App app{"gtacb: community-aware influence maximization and SIR evaluation"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "",
                 "key=value defaults, one [section] per subcommand; give it "
                 "before the subcommand; explicit flags win");
  app.require_subcommand(1);

  // ---- ingest ----------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "parse a graph and write its canonical form");
  GraphArgs ingest_graph;
  std::string ingest_out = ".";
  add_graph_options(ingest, ingest_graph);
  ingest->add_option("-o,--out", ingest_out, "output directory")->capture_default_str();
  ingest->callback([&] {
    auto [g, report] = load_graph(ingest_graph);
    const fs::path dir = prepare_outdir(ingest_out);
    std::ostringstream edges;
    gtacb::write_edge_list(g, edges);
    write_text_file(dir / "graph.edges", edges.str());
    json rj = {{"nodes", g.node_count()},
               {"arcs", g.arc_count()},
               {"records_read", report.records_read},
               {"arcs_merged", report.arcs_merged},
               {"self_loops_dropped", report.self_loops_dropped},
               {"was_symmetrized", report.was_symmetrized},
               {"weight_scale", report.weight_scale}};
    write_text_file(dir / "ingest_report.json", rj.dump(2) + "\n");
    write_manifest(dir, "ingest", graph_params(ingest_graph), 0, {ingest_graph.path},
                   {"graph.edges", "ingest_report.json"});
  });

  // ---- centrality ------------------------------------------------------
  auto* centrality = app.add_subcommand("centrality", "compute DC, CC, BC and PR per node");
  GraphArgs cent_graph;
  std::string cent_out = ".";
  gtacb::PagerankOptions cent_pr;
  add_graph_options(centrality, cent_graph);
  centrality->add_option("-o,--out", cent_out, "output directory")->capture_default_str();
  centrality->add_option("--damping", cent_pr.damping, "PageRank damping factor")
      ->capture_default_str();
  centrality->add_option("--tol", cent_pr.tol, "PageRank L1 tolerance")->capture_default_str();
  centrality->add_option("--max-iter", cent_pr.max_iter, "PageRank iteration cap")
      ->capture_default_str();
  centrality->callback([&] {
    auto [g, report] = load_graph(cent_graph);
    const auto table = gtacb::centrality_table(g, cent_pr);
    const fs::path dir = prepare_outdir(cent_out);
    write_text_file(dir / "centrality.csv",
                    csv_of([&](std::ostream& s) { gtacb::write_centrality_csv(table, s); }));
    json params = graph_params(cent_graph);
    params["damping"] = cent_pr.damping;
    params["tol"] = cent_pr.tol;
    params["max_iter"] = cent_pr.max_iter;
    write_manifest(dir, "centrality", params, 0, {cent_graph.path}, {"centrality.csv"});
  });

  // ---- communities -----------------------------------------------------
  auto* communities = app.add_subcommand("communities", "spectral K-way partitioning");
  GraphArgs comm_graph;
  std::string comm_out = ".";
  int comm_k = 2;
  gtacb::CommunityOptions comm_opts;
  add_graph_options(communities, comm_graph);
  communities->add_option("-o,--out", comm_out, "output directory")->capture_default_str();
  communities->add_option("-k,--k-target", comm_k, "number of communities to look for")
      ->required();
  communities->add_option("--restarts", comm_opts.restarts, "k-means restarts")
      ->capture_default_str();
  communities->add_option("--seed", comm_opts.rng_seed, "RNG seed")->capture_default_str();
  communities->callback([&] {
    auto [g, report] = load_graph(comm_graph);
    const auto part = gtacb::detect_communities(g, comm_k, comm_opts);
    const fs::path dir = prepare_outdir(comm_out);
    write_text_file(dir / "communities.csv", csv_of([&](std::ostream& s) {
                      gtacb::write_partition_csv(g, part, s);
                    }));
    json summary = {{"k_target", comm_k},
                    {"communities", part.community_count},
                    {"sizes", part.sizes},
                    {"cut_cost", gtacb::cut_cost(g, part)}};
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    json params = graph_params(comm_graph);
    params["k_target"] = comm_k;
    params["restarts"] = comm_opts.restarts;
    write_manifest(dir, "communities", params, comm_opts.rng_seed, {comm_graph.path},
                   {"communities.csv", "summary.json"});
  });

  // ---- seeds -----------------------------------------------------------
  auto* seeds = app.add_subcommand("seeds", "select K seed nodes by a given method");
  GraphArgs seeds_graph;
  std::string seeds_out = ".";
  std::string seeds_method = "gtacb";
  std::string seeds_partition;
  int seeds_k = 1;
  std::vector<double> seeds_weights;
  gtacb::SeedingOptions seeding;
  add_graph_options(seeds, seeds_graph);
  seeds->add_option("-o,--out", seeds_out, "output directory")->capture_default_str();
  seeds->add_option("-K,--K", seeds_k, "number of seeds")->required();
  seeds->add_option("--method", seeds_method, "gtacb | dc | cc | bc | pr | topsis")
      ->capture_default_str();
  seeds->add_option("--weights", seeds_weights,
                    "TOPSIS weights for dc,cc,bc,pr (default: equal)")
      ->delimiter(',')
      ->expected(4);
  seeds->add_option("--restarts", seeding.community.restarts, "community detection restarts")
      ->capture_default_str();
  seeds->add_option("--seed", seeding.community.rng_seed, "RNG seed")->capture_default_str();
  seeds->add_option("--communities", seeds_partition,
                    "node,community CSV replacing the built-in detector (gtacb only)")
      ->check(CLI::ExistingFile);
  seeds->callback([&] {
    auto [g, report] = load_graph(seeds_graph);
    if (!seeds_weights.empty()) seeding.weights = seeds_weights;
    gtacb::SeedSet set;
    if (seeds_method == "gtacb" && !seeds_partition.empty()) {
      std::ifstream pin(seeds_partition);
      const auto part = gtacb::read_partition_csv(g, pin);
      set = gtacb::gtacb_seeds_from_partition(g, seeds_k, part, seeding);
    } else {
      set = gtacb::seeds_for_method(g, seeds_k, seeds_method, seeding);
    }
    const fs::path dir = prepare_outdir(seeds_out);
    json doc = gtacb::seed_set_to_json(set);
    doc["params"] = {{"weights", seeding.weights},
                     {"restarts", seeding.community.restarts},
                     {"rng_seed", seeding.community.rng_seed}};
    write_text_file(dir / "seeds.json", doc.dump(2) + "\n");
    json params = graph_params(seeds_graph);
    params["K"] = seeds_k;
    params["method"] = seeds_method;
    params["weights"] = seeding.weights;
    params["restarts"] = seeding.community.restarts;
    std::vector<fs::path> inputs = {seeds_graph.path};
    if (!seeds_partition.empty()) {
      params["communities"] = seeds_partition;
      inputs.push_back(seeds_partition);
    }
    write_manifest(dir, "seeds", params, seeding.community.rng_seed, inputs, {"seeds.json"});
  });

  // ---- simulate --------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo SIR evaluation of a seed set");
  GraphArgs sim_graph;
  std::string sim_out = ".";
  std::string sim_seeds_file;
  std::string sim_mode = "per_edge";
  bool sim_trace = false;
  gtacb::SirConfig sim_cfg;
  add_graph_options(simulate, sim_graph);
  simulate->add_option("-o,--out", sim_out, "output directory")->capture_default_str();
  simulate->add_option("--seeds", sim_seeds_file, "seed set (JSON or one label per line)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--L", sim_cfg.L, "infectious periods per node")->capture_default_str();
  simulate->add_option("--alpha", sim_cfg.alpha, "per-age infectiousness rates")
      ->delimiter(',');
  simulate->add_option("--kappa", sim_cfg.kappa, "relative infectiousness in [0,1]")
      ->capture_default_str();
  simulate->add_option("--iters", sim_cfg.iterations, "Monte Carlo replications")
      ->capture_default_str();
  simulate->add_option("--seed", sim_cfg.rng_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--mode", sim_mode, "per_edge | summed_clamped")
      ->check(CLI::IsMember({"per_edge", "summed_clamped"}))
      ->capture_default_str();
  simulate->add_option("--jobs", sim_cfg.jobs, "parallel workers (0 = all cores)")
      ->capture_default_str();
  simulate->add_flag("--trace", sim_trace, "also write per-replication trace.csv");
  simulate->callback([&] {
    sim_cfg.mode = sim_mode == "per_edge" ? gtacb::TransmissionMode::PerEdge
                                          : gtacb::TransmissionMode::SummedClamped;
    sim_cfg.validate();  // reports --alpha/--L mismatches before any work
    auto [g, report] = load_graph(sim_graph);
    std::ifstream sin(sim_seeds_file);
    const gtacb::SeedSet set = gtacb::read_seed_set(sin);
    const gtacb::SirOutcome outcome = gtacb::simulate(g, set, sim_cfg);
    const fs::path dir = prepare_outdir(sim_out);
    write_text_file(dir / "outcome.json", gtacb::outcome_to_json(outcome).dump(2) + "\n");
    std::vector<std::string> outputs = {"outcome.json"};
    if (sim_trace) {
      std::ostringstream t;
      t << "iter,gamma,tau\n";
      for (std::size_t i = 0; i < outcome.replications.size(); ++i)
        t << i << ',' << outcome.replications[i].first << ','
          << outcome.replications[i].second << '\n';
      write_text_file(dir / "trace.csv", t.str());
      outputs.push_back("trace.csv");
    }
    json params = graph_params(sim_graph);
    params["seeds"] = sim_seeds_file;
    params["L"] = sim_cfg.L;
    params["alpha"] = sim_cfg.alpha;
    params["kappa"] = sim_cfg.kappa;
    params["iters"] = sim_cfg.iterations;
    params["mode"] = sim_mode;
    write_manifest(dir, "simulate", params, sim_cfg.rng_seed,
                   {sim_graph.path, sim_seeds_file}, outputs);
  });

  // ---- compare ---------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare", "sweep methods over a (K, kappa) grid and summarize the outcomes");
  GraphArgs cmp_graph;
  std::string cmp_out = ".";
  std::string cmp_mode = "per_edge";
  std::vector<double> cmp_weights;
  gtacb::ExperimentGrid grid;
  grid.methods = {"gtacb", "dc", "cc", "bc", "pr", "topsis"};
  add_graph_options(compare, cmp_graph);
  compare->add_option("-o,--out", cmp_out, "output directory")->capture_default_str();
  compare->add_option("--methods", grid.methods, "seed selection methods")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--K", grid.k_values, "seed set sizes")->delimiter(',')->required();
  compare->add_option("--kappa", grid.kappa_values, "relative infectiousness values")
      ->delimiter(',')
      ->required();
  compare->add_option("--L", grid.sir.L, "infectious periods per node")->capture_default_str();
  compare->add_option("--alpha", grid.sir.alpha, "per-age infectiousness rates")
      ->delimiter(',');
  compare->add_option("--iters", grid.sir.iterations, "replications per cell")
      ->capture_default_str();
  compare->add_option("--seed", grid.sir.rng_seed, "RNG seed")->capture_default_str();
  compare->add_option("--mode", cmp_mode, "per_edge | summed_clamped")
      ->check(CLI::IsMember({"per_edge", "summed_clamped"}))
      ->capture_default_str();
  compare->add_option("--weights", cmp_weights, "TOPSIS weights for dc,cc,bc,pr")
      ->delimiter(',')
      ->expected(4);
  compare->add_option("--restarts", grid.seeding.community.restarts,
                      "community detection restarts")
      ->capture_default_str();
  compare->add_option("--jobs", grid.jobs, "parallel cell workers (0 = all cores)")
      ->capture_default_str();
  compare->callback([&] {
    grid.sir.mode = cmp_mode == "per_edge" ? gtacb::TransmissionMode::PerEdge
                                           : gtacb::TransmissionMode::SummedClamped;
    gtacb::SirConfig probe = grid.sir;
    probe.kappa = 0.0;
    probe.validate();
    if (!cmp_weights.empty()) grid.seeding.weights = cmp_weights;
    grid.seeding.community.rng_seed = grid.sir.rng_seed;
    auto [g, report] = load_graph(cmp_graph);
    const gtacb::ExperimentReport rep = gtacb::run_experiment_grid(g, grid);

    const fs::path dir = prepare_outdir(cmp_out);
    std::vector<std::string> outputs;
    write_text_file(dir / "report.json", gtacb::report_to_json(rep).dump(2) + "\n");
    outputs.push_back("report.json");
    const std::pair<const char*, const char*> tables[] = {
        {"summary_gamma_pct.csv", "mean_gamma_pct"},
        {"summary_tau.csv", "mean_tau"},
        {"summary_eta.csv", "mean_eta"}};
    for (const auto& [file, metric] : tables) {
      write_text_file(dir / file, csv_of([&](std::ostream& s) {
                        gtacb::write_summary_csv(rep, metric, s);
                      }));
      outputs.push_back(file);
    }
    write_text_file(dir / "cells.csv",
                    csv_of([&](std::ostream& s) { gtacb::write_cells_csv(rep, s); }));
    outputs.push_back("cells.csv");
    for (std::size_t ki = 0; ki < rep.k_values.size(); ++ki) {
      const std::string name = "jc_K" + std::to_string(rep.k_values[ki]) + ".csv";
      write_text_file(dir / name, csv_of([&](std::ostream& s) {
                        gtacb::write_jc_csv(rep, static_cast<int>(ki), s);
                      }));
      outputs.push_back(name);
    }
    json params = graph_params(cmp_graph);
    params["methods"] = grid.methods;
    params["K"] = grid.k_values;
    params["kappa"] = grid.kappa_values;
    params["L"] = grid.sir.L;
    params["alpha"] = grid.sir.alpha;
    params["iters"] = grid.sir.iterations;
    params["mode"] = cmp_mode;
    params["weights"] = grid.seeding.weights;
    params["restarts"] = grid.seeding.community.restarts;
    write_manifest(dir, "compare", params, grid.sir.rng_seed, {cmp_graph.path}, outputs);
  });

  // ---- generate --------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "synthesize a planted modular graph");
  std::string gen_out = ".";
  int gen_n = 20, gen_c = 2;
  double gen_p = 0.3, gen_r = 0.9;
  std::uint64_t gen_seed = 0;
  generate->add_option("-o,--out", gen_out, "output directory")->capture_default_str();
  generate->add_option("-n,--n", gen_n, "node count")->capture_default_str();
  generate->add_option("-c,--c", gen_c, "planted module count")->capture_default_str();
  generate->add_option("-p,--p", gen_p, "overall edge density")->capture_default_str();
  generate->add_option("-r,--r", gen_r, "intra-module edge fraction")->capture_default_str();
  generate->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  generate->callback([&] {
    const auto [g, planted] = gtacb::generate_modular_graph(gen_n, gen_c, gen_p, gen_r, gen_seed);
    const fs::path dir = prepare_outdir(gen_out);
    std::ostringstream edges;
    gtacb::write_edge_list(g, edges);
    write_text_file(dir / "graph.edges", edges.str());
    std::ostringstream planted_csv;
    planted_csv << "node,community\n";
    for (int v = 0; v < g.node_count(); ++v)
      planted_csv << g.label(v) << ',' << planted[static_cast<std::size_t>(v)] << '\n';
    write_text_file(dir / "planted.csv", planted_csv.str());
    json params = {{"n", gen_n}, {"c", gen_c}, {"p", gen_p}, {"r", gen_r}};
    write_manifest(dir, "generate", params, gen_seed, {}, {"graph.edges", "planted.csv"});
  });

  // config files address subcommand options through one [section] per
  // subcommand; command-line flags still override file values
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->configurable(true);

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
