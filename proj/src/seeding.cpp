#include "gtacb/seeding.hpp"

#include <algorithm>
#include <istream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gtacb {

std::vector<int> allocation_quotas(int K, int H) {
  if (K < 1 || H < 1) throw std::invalid_argument("allocation_quotas requires K, H >= 1");
  const int floor_share = K / H;
  const int remainder = K % H;
  std::vector<int> quotas(static_cast<std::size_t>(H), floor_share);
  for (int h = 0; h < remainder; ++h) quotas[static_cast<std::size_t>(h)]++;
  return quotas;
}

DecisionMatrix centrality_decision_matrix(const CentralityTable& table,
                                          const std::vector<double>& weights) {
  if (weights.size() != 4)
    throw std::invalid_argument("expected one weight per centrality attribute (4)");
  const char* names[4] = {"dc", "cc", "bc", "pr"};
  const std::vector<double>* columns[4] = {&table.dc, &table.cc, &table.bc, &table.pr};

  // A measure that is zero for every node (bc on a clique, cc on an arcless
  // community) carries no information and would break vector normalization;
  // such columns are dropped and the remaining weights renormalized.
  std::vector<int> keep;
  double weight_sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    const bool informative =
        std::any_of(columns[j]->begin(), columns[j]->end(), [](double x) { return x != 0.0; });
    if (informative) {
      keep.push_back(j);
      weight_sum += weights[static_cast<std::size_t>(j)];
    }
  }
  if (keep.empty() || weight_sum <= 0.0)
    throw std::invalid_argument("no informative centrality attribute with positive weight");

  DecisionMatrix dm;
  dm.alternatives = table.nodes;
  for (int j : keep) {
    dm.criteria.push_back(names[j]);
    dm.directions.push_back(Direction::Benefit);
    dm.weights.push_back(weights[static_cast<std::size_t>(j)] / weight_sum);
  }
  dm.values.reserve(table.nodes.size());
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    std::vector<double> row;
    row.reserve(keep.size());
    for (int j : keep) row.push_back((*columns[j])[i]);
    dm.values.push_back(std::move(row));
  }
  return dm;
}

namespace {

// Community rankings are computed once; the wrap pass reuses them.
TopsisRanking rank_community(const Graph& g, const std::vector<int>& members,
                             const SeedingOptions& opts) {
  const Graph sub = induced_subgraph(g, members);
  const CentralityTable table = centrality_table(sub, opts.pagerank);
  return topsis_rank(centrality_decision_matrix(table, opts.weights));
}

}  // namespace

SeedSet gtacb_seeds_from_partition(const Graph& g, int K, const Partition& part,
                                   const SeedingOptions& opts) {
  if (K < 1 || K > g.node_count())
    throw std::invalid_argument("K must lie in [1, n]");
  if (static_cast<int>(part.assignment.size()) != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");

  const int H = part.community_count;
  const std::vector<int> quotas = allocation_quotas(K, H);

  std::vector<TopsisRanking> rankings(static_cast<std::size_t>(H));
  std::vector<int> taken(static_cast<std::size_t>(H), 0);
  SeedSet set;
  set.method = "gtacb";

  const auto take_from = [&](int h, int count) {
    const auto& entries = rankings[static_cast<std::size_t>(h)].entries;
    int used = 0;
    while (used < count && taken[static_cast<std::size_t>(h)] < static_cast<int>(entries.size())) {
      const TopsisEntry& e =
          entries[static_cast<std::size_t>(taken[static_cast<std::size_t>(h)]++)];
      set.seeds.push_back(e.alternative);
      set.provenance.push_back({h, e.closeness});
      ++used;
    }
    return used;
  };

  int need = K;
  for (int h = 0; h < H && need > 0; ++h) {
    rankings[static_cast<std::size_t>(h)] = rank_community(g, part.members[static_cast<std::size_t>(h)], opts);
    need -= take_from(h, std::min(need, quotas[static_cast<std::size_t>(h)]));
  }
  // shortfall spill: walk the communities once more in size order
  for (int h = 0; h < H && need > 0; ++h) need -= take_from(h, need);

  if (need > 0) throw std::logic_error("seed allocation underflow");  // K <= n rules this out
  return set;
}

SeedSet gtacb_seeds(const Graph& g, int K, const SeedingOptions& opts) {
  if (K < 1 || K > g.node_count())
    throw std::invalid_argument("K must lie in [1, n]");
  const Partition part = detect_communities(g, K, opts.community);
  return gtacb_seeds_from_partition(g, K, part, opts);
}

BaselineMethod baseline_method_from_name(const std::string& name) {
  if (name == "dc") return BaselineMethod::Dc;
  if (name == "cc") return BaselineMethod::Cc;
  if (name == "bc") return BaselineMethod::Bc;
  if (name == "pr") return BaselineMethod::Pr;
  if (name == "topsis") return BaselineMethod::Topsis;
  throw std::invalid_argument("unknown method '" + name + "'");
}

SeedSet baseline_seeds(const Graph& g, int K, BaselineMethod method,
                       const SeedingOptions& opts) {
  if (K < 1 || K > g.node_count())
    throw std::invalid_argument("K must lie in [1, n]");
  const CentralityTable table = centrality_table(g, opts.pagerank);

  SeedSet set;
  if (method == BaselineMethod::Topsis) {
    set.method = "topsis";
    const TopsisRanking ranking =
        topsis_rank(centrality_decision_matrix(table, opts.weights));
    for (int i = 0; i < K; ++i) {
      const TopsisEntry& e = ranking.entries[static_cast<std::size_t>(i)];
      set.seeds.push_back(e.alternative);
      set.provenance.push_back({-1, e.closeness});
    }
    return set;
  }

  const std::vector<double>* values = nullptr;
  switch (method) {
    case BaselineMethod::Dc: set.method = "dc"; values = &table.dc; break;
    case BaselineMethod::Cc: set.method = "cc"; values = &table.cc; break;
    case BaselineMethod::Bc: set.method = "bc"; values = &table.bc; break;
    case BaselineMethod::Pr: set.method = "pr"; values = &table.pr; break;
    case BaselineMethod::Topsis: break;
  }
  std::vector<int> order(table.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = (*values)[static_cast<std::size_t>(a)];
    const double vb = (*values)[static_cast<std::size_t>(b)];
    if (va != vb) return va > vb;
    return label_less(table.nodes[static_cast<std::size_t>(a)],
                      table.nodes[static_cast<std::size_t>(b)]);
  });
  for (int i = 0; i < K; ++i) {
    const int idx = order[static_cast<std::size_t>(i)];
    set.seeds.push_back(table.nodes[static_cast<std::size_t>(idx)]);
    set.provenance.push_back({-1, (*values)[static_cast<std::size_t>(idx)]});
  }
  return set;
}

SeedSet seeds_for_method(const Graph& g, int K, const std::string& method,
                         const SeedingOptions& opts) {
  if (method == "gtacb") return gtacb_seeds(g, K, opts);
  return baseline_seeds(g, K, baseline_method_from_name(method), opts);
}

nlohmann::json seed_set_to_json(const SeedSet& set) {
  nlohmann::json provenance = nlohmann::json::array();
  for (std::size_t i = 0; i < set.seeds.size(); ++i) {
    nlohmann::json entry = {{"node", set.seeds[i]}, {"score", set.provenance[i].score}};
    if (set.provenance[i].community >= 0) entry["community"] = set.provenance[i].community;
    provenance.push_back(std::move(entry));
  }
  return {{"method", set.method},
          {"K", set.k()},
          {"seeds", set.seeds},
          {"provenance", std::move(provenance)}};
}

SeedSet read_seed_set(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  SeedSet set;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const nlohmann::json doc = nlohmann::json::parse(text);
    set.method = doc.value("method", "imported");
    for (const auto& s : doc.at("seeds")) set.seeds.push_back(s.get<std::string>());
  } else {
    set.method = "imported";
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto eol = text.find('\n', pos);
      std::string line = text.substr(pos, eol == std::string::npos ? eol : eol - pos);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty() && line[0] != '#') set.seeds.push_back(line);
      if (eol == std::string::npos) break;
      pos = eol + 1;
    }
  }
  if (set.seeds.empty()) throw std::invalid_argument("seed set is empty");
  std::vector<std::string> unique_check = set.seeds;
  std::sort(unique_check.begin(), unique_check.end());
  if (std::adjacent_find(unique_check.begin(), unique_check.end()) != unique_check.end())
    throw std::invalid_argument("seed set contains duplicate nodes");
  set.provenance.assign(set.seeds.size(), SeedProvenance{});
  return set;
}

}  // namespace gtacb
