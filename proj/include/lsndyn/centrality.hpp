#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsndyn/detail/parallel.hpp"
#include "lsndyn/errors.hpp"
#include "lsndyn/graph.hpp"

namespace lsndyn {

enum class MetricKind { degree, in_degree, out_degree, closeness, betweenness };
enum class ClosenessVariant { harmonic, wf_corrected };
enum class NormalizationBase { per_network, aggregated_n };
enum class DegreeDirection { all, in, out };

inline std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::degree: return "degree";
    case MetricKind::in_degree: return "in_degree";
    case MetricKind::out_degree: return "out_degree";
    case MetricKind::closeness: return "closeness";
    case MetricKind::betweenness: return "betweenness";
  }
  return "?";
}

inline std::string_view to_string(ClosenessVariant v) {
  return v == ClosenessVariant::harmonic ? "harmonic" : "wf";
}

inline std::string_view to_string(NormalizationBase b) {
  return b == NormalizationBase::per_network ? "per-network" : "aggregated";
}

inline MetricKind parse_metric_kind(std::string_view s) {
  s = trim(s);
  for (auto k : {MetricKind::degree, MetricKind::in_degree, MetricKind::out_degree,
                 MetricKind::closeness, MetricKind::betweenness}) {
    if (s == to_string(k)) return k;
  }
  if (s == "in-degree") return MetricKind::in_degree;
  if (s == "out-degree") return MetricKind::out_degree;
  throw ConfigError("unknown metric '" + std::string(s) + "'");
}

inline ClosenessVariant parse_closeness_variant(std::string_view s) {
  if (s == "harmonic") return ClosenessVariant::harmonic;
  if (s == "wf" || s == "wf_corrected") return ClosenessVariant::wf_corrected;
  throw ConfigError("unknown closeness variant '" + std::string(s) + "'");
}

inline NormalizationBase parse_normalization_base(std::string_view s) {
  if (s == "per-network" || s == "per_network") return NormalizationBase::per_network;
  if (s == "aggregated" || s == "aggregated_n") return NormalizationBase::aggregated_n;
  throw ConfigError("unknown normalization base '" + std::string(s) + "'");
}

struct MetricSpec {
  MetricKind kind = MetricKind::degree;
  ClosenessVariant closeness_variant = ClosenessVariant::harmonic;
  NormalizationBase normalization_base = NormalizationBase::per_network;

  std::string name() const { return std::string(to_string(kind)); }

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Normalized scores for every node of one measured graph, in the graph's
/// node order. All values lie in [0,1].
struct CentralityScores {
  MetricSpec metric;
  std::size_t network_size = 0;  // normalization base actually used
  std::vector<ActorId> actors;
  std::vector<double> scores;

  std::optional<double> score(const ActorId& id) const {
    const auto it = std::lower_bound(actors.begin(), actors.end(), id);
    if (it == actors.end() || *it != id) return std::nullopt;
    return scores[static_cast<std::size_t>(it - actors.begin())];
  }

  /// Score of an actor, or 0 when the actor is not in the measured graph.
  double score_or_zero(const ActorId& id) const { return score(id).value_or(0.0); }
};

namespace detail {

inline void check_base(const Graph& g, std::size_t base_n) {
  if (base_n < 1) throw ConfigError("normalization base must be at least 1");
  if (base_n < g.node_count()) {
    throw ConfigError("normalization base " + std::to_string(base_n) +
                      " is smaller than the network size " + std::to_string(g.node_count()));
  }
}

inline CentralityScores make_scores(const Graph& g, MetricSpec spec, std::size_t base_n) {
  CentralityScores s;
  s.metric = spec;
  s.network_size = base_n;
  s.actors = g.nodes();
  s.scores.assign(g.node_count(), 0.0);
  return s;
}

inline double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Unweighted BFS from `source` along out-edges. Fills dist (kUnreached for
// unreachable nodes) and returns the visit order.
inline void bfs(const Graph& g, NodeIndex source, std::vector<std::uint32_t>& dist,
                std::vector<NodeIndex>& order) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  order.clear();
  dist[source] = 0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeIndex u = order[head];
    for (NodeIndex v : g.out_neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        order.push_back(v);
      }
    }
  }
}

inline constexpr std::size_t kSourceChunks = 64;

}  // namespace detail

/// deg(v) / (base_n - 1). In directed mode `all` counts distinct neighbors
/// in either direction, so the score stays within [0,1].
inline CentralityScores degree_centrality(const Graph& g, DegreeDirection direction,
                                          std::size_t base_n) {
  detail::check_base(g, base_n);
  MetricSpec spec;
  switch (direction) {
    case DegreeDirection::all: spec.kind = MetricKind::degree; break;
    case DegreeDirection::in: spec.kind = MetricKind::in_degree; break;
    case DegreeDirection::out: spec.kind = MetricKind::out_degree; break;
  }
  if (direction != DegreeDirection::all && !g.directed()) {
    throw ConfigError(std::string(to_string(spec.kind)) + " requires a directed graph");
  }
  auto s = detail::make_scores(g, spec, base_n);
  if (base_n < 2) return s;
  const double denom = static_cast<double>(base_n - 1);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    std::size_t deg = 0;
    switch (direction) {
      case DegreeDirection::all: deg = g.all_neighbors(v).size(); break;
      case DegreeDirection::in: deg = g.in_neighbors(v).size(); break;
      case DegreeDirection::out: deg = g.out_neighbors(v).size(); break;
    }
    s.scores[v] = detail::clamp_unit(static_cast<double>(deg) / denom);
  }
  return s;
}

/// Closeness over unweighted out-distances.
///
/// harmonic:      sum_{u != v} 1/d(v,u) / (base_n - 1), unreachable terms 0.
/// wf_corrected:  with k nodes reachable from v (v included),
///                ((k-1) / sum d) * ((k-1) / (base_n - 1)); 0 when k = 1.
inline CentralityScores closeness_centrality(const Graph& g, ClosenessVariant variant,
                                             std::size_t base_n) {
  detail::check_base(g, base_n);
  MetricSpec spec{MetricKind::closeness, variant, NormalizationBase::per_network};
  auto s = detail::make_scores(g, spec, base_n);
  const std::size_t n = g.node_count();
  if (base_n < 2 || n < 2) return s;
  const double denom = static_cast<double>(base_n - 1);

  const std::size_t chunks = std::min(detail::kSourceChunks, n);
  detail::for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<std::uint32_t> dist(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    const auto [begin, end] = detail::chunk_bounds(n, chunks, c);
    for (std::size_t src = begin; src < end; ++src) {
      detail::bfs(g, static_cast<NodeIndex>(src), dist, order);
      double value = 0.0;
      if (variant == ClosenessVariant::harmonic) {
        double inv_sum = 0.0;
        for (std::size_t i = 1; i < order.size(); ++i) inv_sum += 1.0 / dist[order[i]];
        value = inv_sum / denom;
      } else if (order.size() > 1) {
        std::uint64_t dist_sum = 0;
        for (std::size_t i = 1; i < order.size(); ++i) dist_sum += dist[order[i]];
        const double reach = static_cast<double>(order.size() - 1);
        value = (reach / static_cast<double>(dist_sum)) * (reach / denom);
      }
      s.scores[src] = detail::clamp_unit(value);
    }
  }, 1);
  return s;
}

/// Shortest-path betweenness by Brandes' dependency accumulation.
///
/// Raw pair-dependency sums are normalized by (base_n-1)(base_n-2)/2 for
/// undirected graphs and (base_n-1)(base_n-2) for directed ones; all
/// scores are 0 when base_n < 3. Sources are split into a fixed number of
/// chunks whose partial sums are added in chunk order, so results do not
/// depend on the thread count.
inline CentralityScores betweenness_centrality(const Graph& g, std::size_t base_n) {
  detail::check_base(g, base_n);
  MetricSpec spec{MetricKind::betweenness, ClosenessVariant::harmonic,
                  NormalizationBase::per_network};
  auto s = detail::make_scores(g, spec, base_n);
  const std::size_t n = g.node_count();
  if (base_n < 3 || n < 3) return s;

  const std::size_t chunks = std::min(detail::kSourceChunks, n);
  std::vector<std::vector<double>> partial(chunks);
  detail::for_each_chunk(chunks, [&](std::size_t c) {
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    const auto [begin, end] = detail::chunk_bounds(n, chunks, c);
    for (std::size_t src = begin; src < end; ++src) {
      detail::bfs(g, static_cast<NodeIndex>(src), dist, order);
      for (NodeIndex v : order) sigma[v] = 0.0;
      sigma[src] = 1.0;
      for (NodeIndex u : order) {
        for (NodeIndex v : g.out_neighbors(u)) {
          if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
      }
      for (NodeIndex v : order) delta[v] = 0.0;
      // Predecessors of w are its in-neighbors one BFS level closer.
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeIndex w = *it;
        for (NodeIndex v : g.in_neighbors(w)) {
          if (dist[v] != detail::kUnreached && dist[v] + 1 == dist[w]) {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
          }
        }
        if (w != src) acc[w] += delta[w];
      }
    }
    partial[c] = std::move(acc);
  }, 1);

  std::vector<double> raw(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) raw[v] += p[v];
  }
  // Undirected accumulation visits every pair from both ends, which cancels
  // the /2 of the undirected pair count. Both modes divide by (b-1)(b-2).
  const double b = static_cast<double>(base_n);
  const double norm = (b - 1.0) * (b - 2.0);
  for (std::size_t v = 0; v < n; ++v) {
    s.scores[v] = detail::clamp_unit(raw[v] / norm);
  }
  return s;
}

/// Dispatches on spec.kind. The normalization base is the measured graph's
/// own size (per_network) or the aggregated network size.
inline CentralityScores compute_metric(const Graph& g, const MetricSpec& spec,
                                       std::size_t aggregated_n) {
  std::size_t base_n = g.node_count();
  if (spec.normalization_base == NormalizationBase::aggregated_n) {
    if (aggregated_n < 1) throw ConfigError("aggregated network size must be supplied");
    base_n = aggregated_n;
  }
  // A graph with no nodes has nothing to score; keep the base valid.
  base_n = std::max<std::size_t>(base_n, 1);

  CentralityScores s;
  switch (spec.kind) {
    case MetricKind::degree: s = degree_centrality(g, DegreeDirection::all, base_n); break;
    case MetricKind::in_degree: s = degree_centrality(g, DegreeDirection::in, base_n); break;
    case MetricKind::out_degree: s = degree_centrality(g, DegreeDirection::out, base_n); break;
    case MetricKind::closeness: s = closeness_centrality(g, spec.closeness_variant, base_n); break;
    case MetricKind::betweenness: s = betweenness_centrality(g, base_n); break;
  }
  s.metric = spec;
  return s;
}

}  // namespace lsndyn
