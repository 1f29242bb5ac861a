#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "gtacb/rng.hpp"
#include "gtacb/topsis.hpp"
#include "oracles.hpp"

using namespace gtacb;

namespace {

DecisionMatrix matrix(std::vector<std::vector<double>> values,
                      std::vector<Direction> directions = {},
                      std::vector<double> weights = {}) {
  DecisionMatrix dm;
  const std::size_t m = values.size();
  const std::size_t p = values.front().size();
  for (std::size_t i = 0; i < m; ++i) dm.alternatives.push_back("n" + std::to_string(i + 1));
  for (std::size_t j = 0; j < p; ++j) dm.criteria.push_back("c" + std::to_string(j + 1));
  dm.values = std::move(values);
  dm.directions = directions.empty() ? std::vector<Direction>(p, Direction::Benefit)
                                     : std::move(directions);
  dm.weights = weights.empty() ? equal_weights(static_cast<int>(p)) : std::move(weights);
  return dm;
}

double closeness_of(const TopsisRanking& r, const std::string& alt) {
  for (const auto& e : r.entries)
    if (e.alternative == alt) return e.closeness;
  FAIL("alternative not found");
  return 0.0;
}

DecisionMatrix random_matrix(RngStream& rng, std::size_t m, std::size_t p,
                             bool random_directions = false) {
  std::vector<std::vector<double>> values(m, std::vector<double>(p));
  for (auto& row : values)
    for (double& x : row) x = 0.05 + 10.0 * rng.uniform01();
  std::vector<Direction> dirs(p, Direction::Benefit);
  if (random_directions)
    for (auto& d : dirs) d = rng.uniform01() < 0.5 ? Direction::Benefit : Direction::Cost;
  return matrix(std::move(values), std::move(dirs));
}

}  // namespace

TEST_CASE("two alternatives on one benefit criterion hit the endpoints") {
  const auto r = topsis_rank(matrix({{2.0}, {1.0}}));
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].alternative == "n1");
  CHECK(r.entries[0].closeness == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.entries[1].alternative == "n2");
  CHECK(r.entries[1].closeness == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dominant row scores 1 and dominated row scores 0") {
  RngStream rng(3, 0);
  for (int round = 0; round < 25; ++round) {
    auto dm = random_matrix(rng, 6, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      double hi = 0.0, lo = 1e30;
      for (std::size_t i = 0; i < 6; ++i) {
        hi = std::max(hi, dm.values[i][j]);
        lo = std::min(lo, dm.values[i][j]);
      }
      dm.values[0][j] = hi + 1.0;  // strictly dominates
      dm.values[1][j] = lo * 0.5;  // strictly dominated
    }
    const auto r = topsis_rank(dm);
    CHECK(r.entries.front().alternative == "n1");
    CHECK(std::abs(r.entries.front().closeness - 1.0) <= 1e-12);
    CHECK(r.entries.back().alternative == "n2");
    CHECK(std::abs(r.entries.back().closeness - 0.0) <= 1e-12);
  }
}

TEST_CASE("3x2 matrix against the step-by-step recomputation") {
  const auto dm = matrix({{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
  const auto r = topsis_rank(dm);
  // frozen expectations: the full row is its own ideal, the others tie at 1/2
  CHECK(closeness_of(r, "n3") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(closeness_of(r, "n1") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(closeness_of(r, "n2") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.entries[0].alternative == "n3");
  CHECK(r.entries[1].alternative == "n1");  // tie broken by label
  CHECK(r.entries[2].alternative == "n2");

  const auto ref = oracle::topsis_steps(dm);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(closeness_of(r, dm.alternatives[i]) - ref.c_star[i]) <= 1e-12);
}

TEST_CASE("matches the oracle on random matrices with mixed directions") {
  RngStream rng(17, 0);
  for (int round = 0; round < 50; ++round) {
    const auto dm = random_matrix(rng, 2 + rng.below(8), 1 + rng.below(5), true);
    const auto r = topsis_rank(dm);
    const auto ref = oracle::topsis_steps(dm);
    for (std::size_t i = 0; i < dm.alternatives.size(); ++i)
      CHECK(std::abs(closeness_of(r, dm.alternatives[i]) - ref.c_star[i]) <= 1e-12);
  }
}

TEST_CASE("flipping a direction swaps ideal and anti-ideal for that column") {
  RngStream rng(19, 0);
  auto dm = random_matrix(rng, 5, 3);
  const auto before = oracle::topsis_steps(dm);
  dm.directions[1] = Direction::Cost;
  const auto after = oracle::topsis_steps(dm);
  CHECK(after.ideal[1] == before.anti[1]);
  CHECK(after.anti[1] == before.ideal[1]);
  // implementation agrees with the recomputation after the flip
  const auto r = topsis_rank(dm);
  for (std::size_t i = 0; i < dm.alternatives.size(); ++i)
    CHECK(std::abs(closeness_of(r, dm.alternatives[i]) - after.c_star[i]) <= 1e-12);
}

TEST_CASE("column scale invariance") {
  RngStream rng(5, 0);
  for (int round = 0; round < 200; ++round) {
    auto dm = random_matrix(rng, 2 + rng.below(10), 1 + rng.below(4));
    const auto base = topsis_rank(dm);
    const std::size_t j = rng.below(dm.criteria.size());
    const double scale = 0.01 + 100.0 * rng.uniform01();
    for (auto& row : dm.values) row[j] *= scale;
    const auto scaled = topsis_rank(dm);
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
      CHECK(base.entries[i].alternative == scaled.entries[i].alternative);
      CHECK(std::abs(base.entries[i].closeness - scaled.entries[i].closeness) <= 1e-12);
    }
  }
}

TEST_CASE("raising a benefit value never lowers the rank") {
  RngStream rng(7, 0);
  for (int round = 0; round < 100; ++round) {
    auto dm = random_matrix(rng, 5, 3);
    const auto before = topsis_rank(dm);
    const std::size_t target = rng.below(5);
    const std::string name = dm.alternatives[target];
    const auto pos = [&](const TopsisRanking& r) {
      for (std::size_t i = 0; i < r.entries.size(); ++i)
        if (r.entries[i].alternative == name) return i;
      return std::size_t{99};
    };
    dm.values[target][rng.below(3)] += 5.0;
    const auto after = topsis_rank(dm);
    CHECK(pos(after) <= pos(before));
  }
}

TEST_CASE("permuting rows permutes the ranking") {
  RngStream rng(11, 0);
  auto dm = random_matrix(rng, 7, 4);
  const auto base = topsis_rank(dm);
  std::rotate(dm.alternatives.begin(), dm.alternatives.begin() + 3, dm.alternatives.end());
  std::rotate(dm.values.begin(), dm.values.begin() + 3, dm.values.end());
  const auto rotated = topsis_rank(dm);
  REQUIRE(base.entries.size() == rotated.entries.size());
  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    CHECK(base.entries[i].alternative == rotated.entries[i].alternative);
    CHECK(base.entries[i].closeness == doctest::Approx(rotated.entries[i].closeness));
  }
}

TEST_CASE("identical rows all score one half") {
  const auto r = topsis_rank(matrix({{3.0, 2.0}, {3.0, 2.0}, {3.0, 2.0}}));
  for (const auto& e : r.entries) CHECK(e.closeness == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a single alternative is its own ideal") {
  const auto r = topsis_rank(matrix({{4.0, 1.0}}));
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].closeness == 1.0);
}

TEST_CASE("equal weights") {
  CHECK(equal_weights(4) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK(equal_weights(1) == std::vector<double>{1.0});
  const auto w3 = equal_weights(3);
  double sum = 0.0;
  for (double w : w3) sum += w;
  CHECK(sum == 1.0);
  CHECK_THROWS_AS(equal_weights(0), std::invalid_argument);
}

TEST_CASE("ranking json export") {
  const auto r = topsis_rank(matrix({{2.0}, {1.0}}));
  const auto doc = ranking_to_json(r);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0].at("node") == "n1");
  CHECK(doc[0].at("c_star").get<double>() == 1.0);
  CHECK(doc[1].at("s_minus").get<double>() == 0.0);
  CHECK(doc[0].contains("s_plus"));
}

TEST_CASE("validation errors") {
  auto all_zero = matrix({{0.0, 1.0}, {0.0, 2.0}});
  try {
    topsis_rank(all_zero);
    FAIL("expected error on all-zero column");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("c1") != std::string::npos);
  }
  auto nan = matrix({{1.0}, {std::nan("")}});
  CHECK_THROWS_AS(topsis_rank(nan), std::invalid_argument);
  auto bad_weights = matrix({{1.0}, {2.0}});
  bad_weights.weights = {0.7};
  CHECK_THROWS_AS(topsis_rank(bad_weights), std::invalid_argument);
}
