#include "gtacb/community.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include <Eigen/Dense>

#include "gtacb/rng.hpp"

namespace gtacb {

Partition Partition::from_assignment(std::vector<int> assignment) {
  Partition p;
  p.assignment = std::move(assignment);
  int max_idx = -1;
  for (int c : p.assignment) {
    if (c < 0) throw std::invalid_argument("partition assignment has unassigned node");
    max_idx = std::max(max_idx, c);
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(max_idx + 1));
  for (std::size_t v = 0; v < p.assignment.size(); ++v)
    groups[static_cast<std::size_t>(p.assignment[v])].push_back(static_cast<int>(v));
  // drop empty groups, order by decreasing size (ties: smallest member first)
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  p.members = std::move(groups);
  p.community_count = static_cast<int>(p.members.size());
  p.sizes.resize(p.members.size());
  for (std::size_t c = 0; c < p.members.size(); ++c) {
    p.sizes[c] = static_cast<int>(p.members[c].size());
    for (int v : p.members[c]) p.assignment[static_cast<std::size_t>(v)] = static_cast<int>(c);
  }
  return p;
}

double cut_cost(const Graph& g, const Partition& p) {
  if (static_cast<int>(p.assignment.size()) != g.node_count())
    throw std::invalid_argument("partition does not cover the graph's node set");
  double cost = 0.0;
  g.for_each_arc([&](int s, int d, double w) {
    if (p.assignment[static_cast<std::size_t>(s)] != p.assignment[static_cast<std::size_t>(d)])
      cost += w;
  });
  return cost;
}

EigensolverError::EigensolverError(double res, int iters)
    : std::runtime_error("eigensolver did not converge after " + std::to_string(iters) +
                         " iterations (residual " + std::to_string(res) + ")"),
      residual(res),
      iterations(iters) {}

namespace {

struct SymCsr {
  std::vector<std::int64_t> off;
  std::vector<Arc> arcs;
};

// W~ = (W + W^T) / 2 as CSR, diagonal-free.
SymCsr symmetrized_adjacency(const Graph& g) {
  const int n = g.node_count();
  std::map<std::pair<int, int>, double> acc;
  g.for_each_arc([&](int s, int d, double w) {
    acc[{s, d}] += w / 2.0;
    acc[{d, s}] += w / 2.0;
  });
  SymCsr m;
  m.off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [key, w] : acc) m.off[static_cast<std::size_t>(key.first) + 1]++;
  for (int v = 0; v < n; ++v)
    m.off[static_cast<std::size_t>(v) + 1] += m.off[static_cast<std::size_t>(v)];
  m.arcs.reserve(acc.size());
  for (const auto& [key, w] : acc) m.arcs.push_back({key.second, w});
  return m;
}

// Leading eigenvectors of B = I + D^{-1/2} W~ D^{-1/2} via block subspace
// iteration with Rayleigh-Ritz extraction. Returns the n x k embedding.
Eigen::MatrixXd spectral_embedding(const SymCsr& adj, int n, int k,
                                   const CommunityOptions& opts) {
  // oversampling widens the spectral gap the iteration converges through,
  // which matters when the top of the spectrum is nearly degenerate
  const int block = std::min(n, k + std::max(4, k / 2));

  std::vector<double> dinv_sqrt(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    double deg = 0.0;
    for (std::int64_t i = adj.off[static_cast<std::size_t>(v)];
         i < adj.off[static_cast<std::size_t>(v) + 1]; ++i)
      deg += adj.arcs[static_cast<std::size_t>(i)].weight;
    if (deg > 0.0) dinv_sqrt[static_cast<std::size_t>(v)] = 1.0 / std::sqrt(deg);
  }

  const auto apply = [&](const Eigen::MatrixXd& x) {
    Eigen::MatrixXd y = x;  // identity shift keeps the spectrum in [0, 2]
    for (int v = 0; v < n; ++v) {
      const double dv = dinv_sqrt[static_cast<std::size_t>(v)];
      if (dv == 0.0) continue;
      for (std::int64_t i = adj.off[static_cast<std::size_t>(v)];
           i < adj.off[static_cast<std::size_t>(v) + 1]; ++i) {
        const Arc& a = adj.arcs[static_cast<std::size_t>(i)];
        y.row(v) += dv * a.weight * dinv_sqrt[static_cast<std::size_t>(a.node)] *
                    x.row(a.node);
      }
    }
    return y;
  };

  RngStream init_stream(opts.rng_seed, /*stream=*/0x5eedful);
  const auto orthonormalize = [&](Eigen::MatrixXd& x) {
    // modified Gram-Schmidt; degenerate columns are re-drawn from the stream
    for (int j = 0; j < x.cols(); ++j) {
      for (int attempt = 0;; ++attempt) {
        for (int i = 0; i < j; ++i) x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
        const double nrm = x.col(j).norm();
        if (nrm > 1e-10 || attempt >= 8) {
          x.col(j) /= nrm > 0.0 ? nrm : 1.0;
          break;
        }
        for (int r = 0; r < n; ++r) x(r, j) = init_stream.uniform01() - 0.5;
      }
    }
  };

  Eigen::MatrixXd basis(n, block);
  for (int j = 0; j < block; ++j)
    for (int r = 0; r < n; ++r) basis(r, j) = init_stream.uniform01() - 0.5;
  orthonormalize(basis);

  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.eig_max_iter; ++iter) {
    const Eigen::MatrixXd image = apply(basis);
    Eigen::MatrixXd projected = basis.transpose() * image;
    projected = 0.5 * (projected + projected.transpose().eval());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected);
    if (es.info() != Eigen::Success) throw EigensolverError(residual, iter);

    // Ritz pairs ordered by decreasing eigenvalue
    Eigen::MatrixXd ritz(n, k);
    residual = 0.0;
    for (int j = 0; j < k; ++j) {
      const int col = block - 1 - j;
      const Eigen::VectorXd u = basis * es.eigenvectors().col(col);
      const Eigen::VectorXd bu = image * es.eigenvectors().col(col);
      residual = std::max(residual, (bu - es.eigenvalues()(col) * u).norm());
      ritz.col(j) = u;
    }
    if (residual <= opts.eig_tol) return ritz;

    basis = image;
    orthonormalize(basis);
  }
  throw EigensolverError(residual, opts.eig_max_iter);
}

// Boundary polish for k-means partitions: moving v from community a to b
// changes the directed cut by 2 * (w~(v, a) - w~(v, b)) on the halved
// symmetric weights, so descent only needs per-community incident weights.
// Moves never empty a community.
class CutRefiner {
 public:
  CutRefiner(const SymCsr& adj, int n, int k, std::vector<int> assign)
      : adj_(adj), n_(n), k_(k), assign_(std::move(assign)),
        incident_(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0),
        sizes_(static_cast<std::size_t>(k), 0) {
    for (int v = 0; v < n_; ++v) {
      sizes_[static_cast<std::size_t>(assign_[static_cast<std::size_t>(v)])]++;
      for (std::int64_t i = adj_.off[static_cast<std::size_t>(v)];
           i < adj_.off[static_cast<std::size_t>(v) + 1]; ++i) {
        const Arc& a = adj_.arcs[static_cast<std::size_t>(i)];
        weight_to(v, assign_[static_cast<std::size_t>(a.node)]) += a.weight;
      }
    }
  }

  // strictly improving single-node moves until a fixed point
  void greedy_sweeps(int max_sweeps) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      bool moved = false;
      for (int v = 0; v < n_; ++v) {
        const int from = assign_[static_cast<std::size_t>(v)];
        if (sizes_[static_cast<std::size_t>(from)] <= 1) continue;
        int best = from;
        for (int c = 0; c < k_; ++c)
          if (weight_to(v, c) > weight_to(v, best)) best = c;
        if (best != from) {
          move(v, best);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }

  std::vector<int> take() { return std::move(assign_); }

 private:
  double& weight_to(int v, int c) {
    return incident_[static_cast<std::size_t>(v) * static_cast<std::size_t>(k_) +
                     static_cast<std::size_t>(c)];
  }

  void move(int v, int to) {
    const int from = assign_[static_cast<std::size_t>(v)];
    if (from == to) return;
    for (std::int64_t i = adj_.off[static_cast<std::size_t>(v)];
         i < adj_.off[static_cast<std::size_t>(v) + 1]; ++i) {
      const Arc& a = adj_.arcs[static_cast<std::size_t>(i)];
      weight_to(a.node, from) -= a.weight;
      weight_to(a.node, to) += a.weight;
    }
    assign_[static_cast<std::size_t>(v)] = to;
    sizes_[static_cast<std::size_t>(from)]--;
    sizes_[static_cast<std::size_t>(to)]++;
  }

  const SymCsr& adj_;
  int n_, k_;
  std::vector<int> assign_;
  std::vector<double> incident_;
  std::vector<int> sizes_;
};

struct KmeansResult {
  std::vector<int> assignment;
};

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, int max_iter, RngStream& stream) {
  const int n = static_cast<int>(points.rows());
  const int dims = static_cast<int>(points.cols());
  Eigen::MatrixXd centers(k, dims);

  // farthest-point initialization; ties go to the lowest index
  std::vector<double> min_d(static_cast<std::size_t>(n),
                            std::numeric_limits<double>::infinity());
  const int first = static_cast<int>(stream.below(static_cast<std::uint64_t>(n)));
  centers.row(0) = points.row(first);
  for (int c = 1; c < k; ++c) {
    int best = 0;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = (points.row(i) - centers.row(c - 1)).squaredNorm();
      if (d < min_d[static_cast<std::size_t>(i)]) min_d[static_cast<std::size_t>(i)] = d;
      if (min_d[static_cast<std::size_t>(i)] > best_d) {
        best_d = min_d[static_cast<std::size_t>(i)];
        best = i;
      }
    }
    centers.row(c) = points.row(best);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dims);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
      counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]++;
    }
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
    // empty clusters keep their previous center
  }
  return {std::move(assign)};
}

}  // namespace

Partition detect_communities(const Graph& g, int k_target, const CommunityOptions& opts) {
  const int n = g.node_count();
  if (k_target < 1 || k_target > n)
    throw std::invalid_argument("k_target must lie in [1, n]");
  if (opts.restarts < 1) throw std::invalid_argument("restarts must be >= 1");

  if (k_target == 1)
    return Partition::from_assignment(std::vector<int>(static_cast<std::size_t>(n), 0));

  Partition best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool have_best = false;
  const auto consider = [&](Partition cand) {
    const double cost = cut_cost(g, cand);
    if (!have_best || cost < best_cost) {
      best = std::move(cand);
      best_cost = cost;
      have_best = true;
    }
  };

  // A graph that splits into exactly k components admits a unique zero-cost
  // partition; feed it into the best-of selection ahead of the restarts.
  const auto [comp, comp_count] = connected_components(g);
  if (comp_count == k_target) consider(Partition::from_assignment(comp));

  const SymCsr adj = symmetrized_adjacency(g);
  Eigen::MatrixXd embedding = spectral_embedding(adj, n, k_target, opts);
  for (int i = 0; i < n; ++i) {
    const double nrm = embedding.row(i).norm();
    if (nrm > 0.0) embedding.row(i) /= nrm;
  }

  for (int r = 0; r < opts.restarts; ++r) {
    RngStream stream(opts.rng_seed, /*stream=*/1 + static_cast<std::uint64_t>(r));
    const KmeansResult km = kmeans(embedding, k_target, opts.kmeans_max_iter, stream);
    CutRefiner refiner(adj, n, k_target, km.assignment);
    refiner.greedy_sweeps(100);
    consider(Partition::from_assignment(refiner.take()));
  }
  return best;
}

void write_partition_csv(const Graph& g, const Partition& p, std::ostream& out) {
  out << "node,community\n";
  for (int v = 0; v < g.node_count(); ++v)
    out << g.label(v) << ',' << p.assignment[static_cast<std::size_t>(v)] << '\n';
}

Partition read_partition_csv(const Graph& g, std::istream& in) {
  std::vector<int> assignment(static_cast<std::size_t>(g.node_count()), -1);
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("node,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("expected 'node,community'", line_no);
    const std::string label = line.substr(0, comma);
    int community = -1;
    const char* begin = line.data() + comma + 1;
    const auto res = std::from_chars(begin, line.data() + line.size(), community);
    if (res.ec != std::errc{} || community < 0)
      throw ParseError("invalid community index", line_no);
    assignment[static_cast<std::size_t>(g.require(label))] = community;
  }
  for (std::size_t v = 0; v < assignment.size(); ++v)
    if (assignment[v] < 0)
      throw std::invalid_argument("partition file misses node '" +
                                  g.label(static_cast<int>(v)) + "'");
  return Partition::from_assignment(std::move(assignment));
}

}  // namespace gtacb
