#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lsndyn/graph.hpp"
#include "support/generators.hpp"

using namespace lsndyn;
namespace lt = lsndyn::testing;

namespace {

ActorId A(const char* s) { return ActorId(s); }

std::vector<ActorId> ids(std::initializer_list<const char*> labels) {
  std::vector<ActorId> out;
  for (auto l : labels) out.emplace_back(l);
  return out;
}

}  // namespace

TEST(ActorId, TrimsAndRejectsEmpty) {
  EXPECT_EQ(ActorId("  alice\t").str(), "alice");
  EXPECT_THROW(ActorId("   "), std::invalid_argument);
  EXPECT_LT(ActorId("Bob"), ActorId("alice"));  // byte order, not case-insensitive
}

TEST(BuildGraph, CollapsesReverseDuplicateAndDropsSelfLoop) {
  const std::vector<Edge> edges{{A("A"), A("B")}, {A("B"), A("A")}, {A("A"), A("A")}};
  const auto r = build_graph(edges, Directedness::undirected);
  EXPECT_EQ(r.graph.nodes(), ids({"A", "B"}));
  EXPECT_EQ(r.graph.edge_count(), 1u);
  EXPECT_EQ(r.self_loops_dropped, 1u);
  EXPECT_EQ(r.duplicates_collapsed, 1u);
}

TEST(BuildGraph, ExtraNodesBecomeIsolated) {
  const std::vector<ActorId> extra{A("C")};
  const auto r = build_graph({}, Directedness::undirected, extra);
  EXPECT_EQ(r.graph.nodes(), ids({"C"}));
  EXPECT_EQ(r.graph.edge_count(), 0u);
}

TEST(BuildGraph, DirectedKeepsInAndOutSeparately) {
  const std::vector<Edge> edges{{A("A"), A("B")}, {A("B"), A("C")}};
  const auto g = build_graph(edges, Directedness::directed).graph;
  const auto a = *g.index_of(A("A")), b = *g.index_of(A("B")), c = *g.index_of(A("C"));
  EXPECT_EQ(std::vector<NodeIndex>(g.out_neighbors(a).begin(), g.out_neighbors(a).end()), std::vector<NodeIndex>{b});
  EXPECT_EQ(std::vector<NodeIndex>(g.out_neighbors(b).begin(), g.out_neighbors(b).end()), std::vector<NodeIndex>{c});
  EXPECT_EQ(std::vector<NodeIndex>(g.in_neighbors(b).begin(), g.in_neighbors(b).end()), std::vector<NodeIndex>{a});
  EXPECT_EQ(std::vector<NodeIndex>(g.in_neighbors(c).begin(), g.in_neighbors(c).end()), std::vector<NodeIndex>{b});
  EXPECT_TRUE(g.in_neighbors(a).empty());
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(BuildGraph, DirectedKeepsBothOrientations) {
  const std::vector<Edge> edges{{A("A"), A("B")}, {A("B"), A("A")}};
  EXPECT_EQ(build_graph(edges, Directedness::directed).graph.edge_count(), 2u);
}

TEST(GraphUnion, MergesNodesAndEdges) {
  const std::vector<Graph> gs{build_graph(std::vector<Edge>{{A("A"), A("B")}}, Directedness::undirected).graph,
                              build_graph(std::vector<Edge>{{A("B"), A("C")}}, Directedness::undirected).graph};
  const auto u = graph_union(gs);
  EXPECT_EQ(u.nodes(), ids({"A", "B", "C"}));
  EXPECT_EQ(u.edges(), (std::vector<Edge>{{A("A"), A("B")}, {A("B"), A("C")}}));
}

TEST(GraphUnion, Idempotent) {
  const auto g = build_graph(std::vector<Edge>{{A("A"), A("B")}}, Directedness::undirected).graph;
  const std::vector<Graph> gs{g, g};
  EXPECT_EQ(graph_union(gs), g);
}

TEST(GraphUnion, EmptyListIsEmptyGraph) {
  const auto u = graph_union({});
  EXPECT_EQ(u.node_count(), 0u);
  EXPECT_EQ(u.edge_count(), 0u);
}

TEST(GraphUnion, RejectsMixedModes) {
  const std::vector<Graph> gs{build_graph({}, Directedness::undirected).graph,
                              build_graph({}, Directedness::directed).graph};
  EXPECT_THROW(graph_union(gs), ConfigError);
}

TEST(NodeCount, CountsIsolatedNodes) {
  const std::vector<Edge> path{{A("A"), A("B")}, {A("B"), A("C")}};
  EXPECT_EQ(node_count(build_graph(path, Directedness::undirected).graph), 3u);
  EXPECT_EQ(node_count(Graph{}), 0u);
  const std::vector<Edge> ab{{A("A"), A("B")}};
  const std::vector<ActorId> c{A("C")};
  EXPECT_EQ(node_count(build_graph(ab, Directedness::undirected, c).graph), 3u);
}

// Property checks over random graphs.

class GraphProperties : public ::testing::TestWithParam<bool> {};

TEST_P(GraphProperties, RebuildIsIdempotent) {
  std::mt19937_64 rng(11);
  const bool directed = GetParam();
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = lt::to_graph(lt::random_graph(rng, 12, directed));
    const auto edges = g.edges();
    const auto rebuilt = build_graph(edges, g.mode(), g.nodes()).graph;
    EXPECT_EQ(rebuilt, g);
  }
}

TEST_P(GraphProperties, UnionCommutativeAssociativeAndBounded) {
  std::mt19937_64 rng(12);
  const bool directed = GetParam();
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = lt::to_graph(lt::random_graph(rng, 9, directed));
    const auto b = lt::to_graph(lt::random_graph(rng, 9, directed));
    const auto c = lt::to_graph(lt::random_graph(rng, 9, directed));
    const std::vector<Graph> ab{a, b}, ba{b, a};
    EXPECT_EQ(graph_union(ab), graph_union(ba));
    const std::vector<Graph> ab_c{graph_union(ab), c};
    const std::vector<Graph> bc{b, c};
    const std::vector<Graph> a_bc{a, graph_union(bc)};
    EXPECT_EQ(graph_union(ab_c), graph_union(a_bc));
    EXPECT_LE(graph_union(ab).node_count(), a.node_count() + b.node_count());
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, GraphProperties, ::testing::Values(false, true));

TEST(GraphProperties, UndirectedAdjacencyIsSymmetric) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = lt::to_graph(lt::random_graph(rng, 15, false));
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
      for (NodeIndex v : g.out_neighbors(u)) {
        const auto back = g.out_neighbors(v);
        EXPECT_NE(std::find(back.begin(), back.end(), u), back.end());
      }
    }
  }
}
