#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace gtacb {

enum class Direction { Benefit, Cost };

struct DecisionMatrix {
  std::vector<std::string> alternatives;     // m rows
  std::vector<std::string> criteria;         // p columns
  std::vector<std::vector<double>> values;   // m x p
  std::vector<Direction> directions;         // per criterion
  std::vector<double> weights;               // non-negative, sum 1
};

struct TopsisEntry {
  std::string alternative;
  double closeness;  // C* in [0,1]
  double s_plus;
  double s_minus;
};

// Entries sorted by closeness descending; ties broken by ascending
// alternative label.
struct TopsisRanking {
  std::vector<TopsisEntry> entries;
};

// Vector-normalize columns, weight them, measure Euclidean distances to the
// ideal and anti-ideal points, score C* = S- / (S- + S+). A single
// alternative scores 1; rows equidistant at zero from both ideals (all
// alternatives identical) score 0.5.
TopsisRanking topsis_rank(const DecisionMatrix& dm);

std::vector<double> equal_weights(int p);

nlohmann::json ranking_to_json(const TopsisRanking& ranking);

}  // namespace gtacb
