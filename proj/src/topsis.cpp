#include "gtacb/topsis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gtacb/graph.hpp"

namespace gtacb {

namespace {

void validate(const DecisionMatrix& dm) {
  const std::size_t m = dm.alternatives.size();
  const std::size_t p = dm.criteria.size();
  if (m < 1) throw std::invalid_argument("decision matrix needs at least one alternative");
  if (p < 1) throw std::invalid_argument("decision matrix needs at least one criterion");
  if (dm.values.size() != m || dm.directions.size() != p || dm.weights.size() != p)
    throw std::invalid_argument("decision matrix shape mismatch");
  double wsum = 0.0;
  for (double w : dm.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("criterion weights must be non-negative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("criterion weights must sum to 1");
  for (const auto& row : dm.values) {
    if (row.size() != p) throw std::invalid_argument("decision matrix row length mismatch");
    for (double x : row)
      if (!std::isfinite(x)) throw std::invalid_argument("decision matrix has non-finite value");
  }
}

}  // namespace

TopsisRanking topsis_rank(const DecisionMatrix& dm) {
  validate(dm);
  const std::size_t m = dm.alternatives.size();
  const std::size_t p = dm.criteria.size();

  TopsisRanking ranking;
  ranking.entries.reserve(m);

  if (m == 1) {
    // a lone alternative is its own ideal
    ranking.entries.push_back({dm.alternatives[0], 1.0, 0.0, 0.0});
    return ranking;
  }

  std::vector<double> norm(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += dm.values[i][j] * dm.values[i][j];
    if (ss == 0.0)
      throw std::invalid_argument("criterion '" + dm.criteria[j] +
                                  "' is all-zero; vector normalization undefined");
    norm[j] = std::sqrt(ss);
  }

  // weighted normalized matrix and per-column ideals
  std::vector<std::vector<double>> t(m, std::vector<double>(p));
  std::vector<double> ideal(p), anti(p);
  for (std::size_t j = 0; j < p; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      t[i][j] = dm.weights[j] * dm.values[i][j] / norm[j];
      lo = std::min(lo, t[i][j]);
      hi = std::max(hi, t[i][j]);
    }
    const bool benefit = dm.directions[j] == Direction::Benefit;
    ideal[j] = benefit ? hi : lo;
    anti[j] = benefit ? lo : hi;
  }

  for (std::size_t i = 0; i < m; ++i) {
    double dp = 0.0, dn = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      dp += (t[i][j] - ideal[j]) * (t[i][j] - ideal[j]);
      dn += (t[i][j] - anti[j]) * (t[i][j] - anti[j]);
    }
    const double s_plus = std::sqrt(dp);
    const double s_minus = std::sqrt(dn);
    const double denom = s_plus + s_minus;
    const double closeness = denom == 0.0 ? 0.5 : s_minus / denom;
    ranking.entries.push_back({dm.alternatives[i], closeness, s_plus, s_minus});
  }

  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const TopsisEntry& a, const TopsisEntry& b) {
              if (a.closeness != b.closeness) return a.closeness > b.closeness;
              return label_less(a.alternative, b.alternative);
            });
  return ranking;
}

std::vector<double> equal_weights(int p) {
  if (p < 1) throw std::invalid_argument("equal_weights requires p >= 1");
  return std::vector<double>(static_cast<std::size_t>(p), 1.0 / p);
}

nlohmann::json ranking_to_json(const TopsisRanking& ranking) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TopsisEntry& e : ranking.entries)
    arr.push_back({{"node", e.alternative},
                   {"c_star", e.closeness},
                   {"s_plus", e.s_plus},
                   {"s_minus", e.s_minus}});
  return arr;
}

}  // namespace gtacb
