#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsndyn/errors.hpp"

namespace lsndyn {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

/// Opaque actor label. Surrounding whitespace is trimmed; the result must
/// be non-empty. Ordering is plain lexicographic byte order.
class ActorId {
 public:
  ActorId() = delete;
  explicit ActorId(std::string_view label) : label_(trim(label)) {
    if (label_.empty()) throw std::invalid_argument("actor label is empty");
  }

  const std::string& str() const noexcept { return label_; }

  friend bool operator==(const ActorId&, const ActorId&) = default;
  friend auto operator<=>(const ActorId&, const ActorId&) = default;

 private:
  std::string label_;
};

enum class Directedness { undirected, directed };

inline std::string_view to_string(Directedness d) {
  return d == Directedness::directed ? "directed" : "undirected";
}

struct Edge {
  ActorId source;
  ActorId target;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using NodeIndex = std::uint32_t;

/// Immutable simple graph over ActorId labels.
///
/// Nodes are stored in lexicographic label order, so node indices are
/// stable for a given node set. Adjacency lists hold sorted node indices;
/// in undirected mode the in- and out-lists are the same list.
class Graph {
 public:
  Graph() = default;

  Directedness mode() const noexcept { return mode_; }
  bool directed() const noexcept { return mode_ == Directedness::directed; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<ActorId>& nodes() const noexcept { return nodes_; }
  const ActorId& node(NodeIndex i) const { return nodes_.at(i); }

  std::optional<NodeIndex> index_of(const ActorId& id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - nodes_.begin());
  }
  bool contains(const ActorId& id) const { return index_of(id).has_value(); }

  std::span<const NodeIndex> out_neighbors(NodeIndex i) const { return out_.at(i); }
  std::span<const NodeIndex> in_neighbors(NodeIndex i) const {
    return directed() ? std::span<const NodeIndex>(in_.at(i)) : out_neighbors(i);
  }

  /// Distinct nodes adjacent to i in either direction.
  std::vector<NodeIndex> all_neighbors(NodeIndex i) const {
    if (!directed()) return out_.at(i);
    std::vector<NodeIndex> merged;
    merged.reserve(out_[i].size() + in_[i].size());
    std::set_union(out_[i].begin(), out_[i].end(), in_[i].begin(), in_[i].end(),
                   std::back_inserter(merged));
    return merged;
  }

  /// Edge list in canonical order. Undirected edges are reported once with
  /// source < target.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeIndex u = 0; u < out_.size(); ++u) {
      for (NodeIndex v : out_[u]) {
        if (directed() || u < v) out.push_back({nodes_[u], nodes_[v]});
      }
    }
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.mode_ == b.mode_ && a.nodes_ == b.nodes_ && a.out_ == b.out_;
  }

 private:
  friend struct GraphBuilder;

  Directedness mode_ = Directedness::undirected;
  std::vector<ActorId> nodes_;
  std::vector<std::vector<NodeIndex>> out_;
  std::vector<std::vector<NodeIndex>> in_;
  std::size_t edge_count_ = 0;
};

struct BuildResult {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

struct GraphBuilder {
  static BuildResult build(std::span<const Edge> edges, Directedness mode,
                           std::span<const ActorId> extra_nodes) {
    BuildResult result;
    Graph& g = result.graph;
    g.mode_ = mode;

    std::vector<ActorId> labels(extra_nodes.begin(), extra_nodes.end());
    labels.reserve(labels.size() + 2 * edges.size());
    for (const auto& e : edges) {
      if (e.source == e.target) {
        ++result.self_loops_dropped;
        continue;
      }
      labels.push_back(e.source);
      labels.push_back(e.target);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    g.nodes_ = std::move(labels);

    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    pairs.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.source == e.target) continue;
      NodeIndex u = *g.index_of(e.source);
      NodeIndex v = *g.index_of(e.target);
      if (mode == Directedness::undirected && v < u) std::swap(u, v);
      pairs.emplace_back(u, v);
    }
    std::sort(pairs.begin(), pairs.end());
    const auto before = pairs.size();
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    result.duplicates_collapsed = before - pairs.size();
    g.edge_count_ = pairs.size();

    const auto n = g.nodes_.size();
    g.out_.assign(n, {});
    if (mode == Directedness::directed) g.in_.assign(n, {});
    for (const auto& [u, v] : pairs) {
      g.out_[u].push_back(v);
      if (mode == Directedness::directed) {
        g.in_[v].push_back(u);
      } else {
        g.out_[v].push_back(u);
      }
    }
    for (auto& adj : g.out_) std::sort(adj.begin(), adj.end());
    for (auto& adj : g.in_) std::sort(adj.begin(), adj.end());
    return result;
  }
};

/// Builds a simple graph: self-loops are dropped, duplicates collapse, and
/// in undirected mode (a,b) and (b,a) are the same edge.
inline BuildResult build_graph(std::span<const Edge> edges, Directedness mode,
                               std::span<const ActorId> extra_nodes = {}) {
  return GraphBuilder::build(edges, mode, extra_nodes);
}

/// Node-set and edge-set union. All inputs must share one mode; an empty
/// input yields an empty undirected graph.
inline Graph graph_union(std::span<const Graph> graphs) {
  if (graphs.empty()) return Graph{};
  const auto mode = graphs.front().mode();
  std::vector<Edge> edges;
  std::vector<ActorId> nodes;
  for (const auto& g : graphs) {
    if (g.mode() != mode) {
      throw ConfigError("cannot union graphs with mixed directedness");
    }
    auto es = g.edges();
    edges.insert(edges.end(), std::make_move_iterator(es.begin()),
                 std::make_move_iterator(es.end()));
    nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
  }
  return build_graph(edges, mode, nodes).graph;
}

inline std::size_t node_count(const Graph& g) noexcept { return g.node_count(); }

}  // namespace lsndyn
