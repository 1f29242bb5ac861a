#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

// The binary path arrives through the environment (set by ctest).
const char* cli_path() { return std::getenv("GTACB_CLI"); }

int run(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("gtacb_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli end to end") {
  if (!cli_path()) {
    MESSAGE("GTACB_CLI not set; skipping CLI tests");
    return;
  }
  TempDir tmp("e2e");
  const std::string gen_dir = (tmp.path / "gen").string();
  REQUIRE(run("generate -n 24 -c 2 -p 0.3 -r 0.9 --seed 5 -o " + gen_dir) == 0);
  const std::string graph = gen_dir + "/graph.edges";
  REQUIRE(fs::exists(graph));
  REQUIRE(fs::exists(gen_dir + "/planted.csv"));
  REQUIRE(fs::exists(gen_dir + "/manifest.json"));

  SUBCASE("ingest reports and canonicalizes") {
    const std::string out = (tmp.path / "ingest").string();
    REQUIRE(run("ingest -g " + graph + " -o " + out) == 0);
    const auto report = nlohmann::json::parse(slurp(out + "/ingest_report.json"));
    CHECK(report.at("nodes").get<int>() == 24);
    CHECK(report.at("self_loops_dropped").get<int>() == 0);
    const auto manifest = nlohmann::json::parse(slurp(out + "/manifest.json"));
    CHECK(manifest.at("command") == "ingest");
    CHECK(manifest.at("inputs").size() == 1);
  }

  SUBCASE("centrality csv has a row per node") {
    const std::string out = (tmp.path / "cent").string();
    REQUIRE(run("centrality -g " + graph + " -o " + out) == 0);
    const std::string csv = slurp(out + "/centrality.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
  }

  SUBCASE("seeds command produces K distinct nodes") {
    const std::string out = (tmp.path / "seeds").string();
    REQUIRE(run("seeds -g " + graph + " -K 4 --method gtacb --seed 42 -o " + out) == 0);
    const auto doc = nlohmann::json::parse(slurp(out + "/seeds.json"));
    CHECK(doc.at("K").get<int>() == 4);
    CHECK(doc.at("seeds").size() == 4);
    CHECK(doc.at("method") == "gtacb");
  }

  SUBCASE("simulate runs are reproducible") {
    const std::string seeds_dir = (tmp.path / "s2").string();
    REQUIRE(run("seeds -g " + graph + " -K 3 --method dc -o " + seeds_dir) == 0);
    const std::string sim = " simulate -g " + graph + " --seeds " + seeds_dir +
                            "/seeds.json --L 2 --alpha 0.3,0.15 --kappa 0.5 --iters 120 "
                            "--seed 7 -o ";
    const std::string out1 = (tmp.path / "sim1").string();
    const std::string out2 = (tmp.path / "sim2").string();
    REQUIRE(run(sim + out1 + " --trace") == 0);
    REQUIRE(run(sim + out2 + " --jobs 2") == 0);
    CHECK(slurp(out1 + "/outcome.json") == slurp(out2 + "/outcome.json"));
    const std::string trace = slurp(out1 + "/trace.csv");
    CHECK(trace.rfind("iter,gamma,tau\n", 0) == 0);
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 121);  // header + 120 reps
  }

  SUBCASE("alpha length must match L before any work happens") {
    const std::string seeds_dir = (tmp.path / "s3").string();
    REQUIRE(run("seeds -g " + graph + " -K 2 --method pr -o " + seeds_dir) == 0);
    CHECK(run("simulate -g " + graph + " --seeds " + seeds_dir +
              "/seeds.json --L 3 --alpha 0.3,0.15 --kappa 0.5 --iters 5 -o " +
              (tmp.path / "bad").string()) != 0);
  }

  SUBCASE("unknown inputs fail with nonzero status") {
    CHECK(run("seeds -g /nonexistent.edges -K 2") != 0);
    CHECK(run("seeds -g " + graph + " -K 999 --method dc -o " + (tmp.path / "x").string()) != 0);
    CHECK(run("nonsense") != 0);
  }

  SUBCASE("config file supplies defaults, flags override") {
    const fs::path cfg = tmp.path / "run.ini";
    {
      std::ofstream out(cfg);
      out << "[seeds]\nK=3\nmethod=dc\n";
    }
    const std::string out = (tmp.path / "cfgout").string();
    REQUIRE(run("--config " + cfg.string() + " seeds -g " + graph + " -o " + out) == 0);
    const auto doc = nlohmann::json::parse(slurp(out + "/seeds.json"));
    CHECK(doc.at("K").get<int>() == 3);
    CHECK(doc.at("method") == "dc");

    const std::string out2 = (tmp.path / "cfgout2").string();
    REQUIRE(run("--config " + cfg.string() + " seeds -g " + graph + " --method pr -o " +
                out2) == 0);
    const auto doc2 = nlohmann::json::parse(slurp(out2 + "/seeds.json"));
    CHECK(doc2.at("K").get<int>() == 3);
    CHECK(doc2.at("method") == "pr");  // command line wins
  }
}
