#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lsndyn/graph.hpp"
#include "lsndyn/temporal.hpp"

namespace lsndyn::testing {

struct RandomGraph {
  std::size_t n = 0;
  bool directed = false;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // by node position
  std::vector<std::string> labels;                          // labels[i] names node i
};

/// Zero-padded labels sort in node order, so position i == graph index i.
inline std::string ordered_label(std::size_t i) {
  std::string s = std::to_string(i);
  return "v" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
}

inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_n, bool directed,
                                bool connected = false) {
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomGraph g;
  g.n = size(rng);
  g.directed = directed;
  const double p = unit(rng);
  for (std::size_t u = 0; u < g.n; ++u) {
    for (std::size_t v = 0; v < g.n; ++v) {
      if (u == v || (!directed && v < u)) continue;
      if (unit(rng) < p) g.edges.emplace_back(u, v);
    }
  }
  if (connected) {
    // Spanning path guarantees (weak) connectivity.
    for (std::size_t u = 1; u < g.n; ++u) g.edges.emplace_back(u - 1, u);
  }
  for (std::size_t i = 0; i < g.n; ++i) g.labels.push_back(ordered_label(i));
  return g;
}

/// Builds the library graph. Every node is passed as an extra node so
/// isolated vertices survive and indices match positions.
inline Graph to_graph(const RandomGraph& rg) {
  std::vector<Edge> edges;
  for (auto [u, v] : rg.edges) edges.push_back({ActorId(rg.labels[u]), ActorId(rg.labels[v])});
  std::vector<ActorId> nodes;
  for (const auto& l : rg.labels) nodes.emplace_back(l);
  return build_graph(edges, rg.directed ? Directedness::directed : Directedness::undirected, nodes).graph;
}

/// Random temporal network: n actors, m windows of length 100 starting at
/// 0, each actor active in a window with a per-actor probability.
inline TemporalEdgeList random_temporal(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m) {
  std::uniform_int_distribution<std::size_t> nd(2, max_n), md(1, max_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = nd(rng), m = md(rng);
  TemporalEdgeList events;
  std::vector<double> activity(n);
  for (auto& a : activity) a = unit(rng);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(rng) < activity[i]) active.push_back(i);
    }
    if (active.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    const std::size_t count = 1 + static_cast<std::size_t>(unit(rng) * 3.0 * static_cast<double>(active.size()));
    std::uniform_int_distribution<Timestamp> when(0, 99);
    for (std::size_t e = 0; e < count; ++e) {
      const auto a = active[pick(rng)], b = active[pick(rng)];
      events.push_back({ActorId(ordered_label(a)), ActorId(ordered_label(b)),
                        static_cast<Timestamp>(j * 100) + when(rng), std::nullopt});
    }
  }
  if (events.empty()) {
    events.push_back({ActorId(ordered_label(0)), ActorId(ordered_label(1)), 0, std::nullopt});
  }
  return events;
}

}  // namespace lsndyn::testing
