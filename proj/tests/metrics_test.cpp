#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "robsurf/metrics.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

using namespace robsurf;
using namespace robsurf::testing;

namespace {

// K4 without the 0-1 link.
Graph diamond() { return Graph(4, {Link(0, 2), Link(0, 3), Link(1, 2), Link(1, 3), Link(2, 3)}); }

}  // namespace

TEST(LccSize, Examples) {
  EXPECT_DOUBLE_EQ(lcc_size(cycle_graph(6), 6), 1.0);
  EXPECT_DOUBLE_EQ(lcc_size(Graph(4, {Link(0, 1), Link(2, 3)}), 4), 0.5);
  EXPECT_DOUBLE_EQ(lcc_size(Graph(4, {Link(0, 1), Link(1, 2)}), 5), 0.6);
  EXPECT_THROW(lcc_size(path_graph(2), 0), DomainError);
}

TEST(Fragmentation, Examples) {
  EXPECT_DOUBLE_EQ(fragmentation(complete_graph(5)), 0.0);
  EXPECT_DOUBLE_EQ(fragmentation(empty_graph(7)), 1.0);
  EXPECT_DOUBLE_EQ(fragmentation(Graph(5, {Link(0, 1), Link(1, 2)})), 0.5);  // C = 3
  EXPECT_THROW(fragmentation(empty_graph(1)), DomainError);
}

TEST(AvgDegree, Examples) {
  const auto c4 = degree_statistics(cycle_graph(4));
  EXPECT_DOUBLE_EQ(c4.mean, 2.0);
  EXPECT_DOUBLE_EQ(c4.stddev, 0.0);
  EXPECT_DOUBLE_EQ(avg_degree(star_graph(4)), 1.5);
  const auto k4 = degree_statistics(complete_graph(4));
  EXPECT_DOUBLE_EQ(k4.mean, 3.0);
  EXPECT_DOUBLE_EQ(k4.stddev, 0.0);
  EXPECT_THROW(avg_degree(Graph()), DomainError);
}

TEST(TwoTerminalReliability, Examples) {
  EXPECT_DOUBLE_EQ(two_terminal_reliability(random_connected_graph(12, 4, 1)), 1.0);
  // components {3, 2} on 5 nodes; pair enumeration oracle: 4 of 10 pairs
  const Graph split(5, {Link(0, 1), Link(1, 2), Link(3, 4)});
  EXPECT_DOUBLE_EQ(pair_enumeration_reliability(split), 0.4);
  EXPECT_DOUBLE_EQ(two_terminal_reliability(split), 0.4);
  EXPECT_DOUBLE_EQ(two_terminal_reliability(empty_graph(5)), 0.0);
  EXPECT_THROW(two_terminal_reliability(empty_graph(1)), DomainError);
}

TEST(AvgClustering, Examples) {
  EXPECT_DOUBLE_EQ(avg_clustering(complete_graph(3)), 1.0);
  EXPECT_DOUBLE_EQ(avg_clustering(star_graph(4)), 0.0);
  EXPECT_NEAR(triangle_clustering(diamond()), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(avg_clustering(diamond()), 5.0 / 6.0, 1e-15);
  EXPECT_THROW(avg_clustering(Graph()), DomainError);
}

TEST(AvgClustering, MatchesTriangleOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = random_graph(15, 0.35, seed);
    EXPECT_NEAR(avg_clustering(g), triangle_clustering(g), 1e-12);
  }
}

TEST(ShortestPath, Examples) {
  EXPECT_DOUBLE_EQ(avg_shortest_path(complete_graph(4)), 1.0);
  EXPECT_DOUBLE_EQ(avg_shortest_path(path_graph(3)), 4.0 / 3.0);
  // C5 oracle: BFS from every node -> 5 pairs at 1 hop, 5 at 2 hops
  const auto d = all_pairs_distances(cycle_graph(5));
  double sum = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) sum += static_cast<double>(d[i][j]);
  EXPECT_DOUBLE_EQ(sum / 10.0, 1.5);
  EXPECT_DOUBLE_EQ(avg_shortest_path(cycle_graph(5)), 1.5);
  EXPECT_THROW(avg_shortest_path(empty_graph(4)), DomainError);
}

TEST(ShortestPath, UsesLargestComponentOnly) {
  // P3 + P5: pairs of P5 only -> distances 1x4, 2x3, 3x2, 4x1 over 10 pairs
  const Graph g = disjoint_union(path_graph(3), path_graph(5));
  EXPECT_DOUBLE_EQ(avg_shortest_path(g), 20.0 / 10.0);
  EXPECT_EQ(diameter(g), 4u);
}

TEST(ShortestPath, MatchesFloydWarshallOnLcc) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = random_graph(18, 0.12, seed);
    const auto parts = connected_components(g);
    if (parts.largest() < 2) continue;
    const auto d = all_pairs_distances(g);
    double sum = 0, sq = 0, pairs = 0;
    long longest = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t j = i + 1; j < g.node_count(); ++j)
        if (parts.component_of[i] == 0 && parts.component_of[j] == 0) {
          ASSERT_GE(d[i][j], 1);
          sum += static_cast<double>(d[i][j]);
          sq += static_cast<double>(d[i][j] * d[i][j]);
          pairs += 1;
          longest = std::max(longest, d[i][j]);
        }
    const auto stats = shortest_path_statistics(g);
    EXPECT_NEAR(stats.mean, sum / pairs, 1e-12);
    EXPECT_NEAR(stats.stddev, std::sqrt(sq / pairs - (sum / pairs) * (sum / pairs)), 1e-9);
    EXPECT_EQ(diameter(g), static_cast<std::uint32_t>(longest));
  }
}

TEST(Diameter, Examples) {
  EXPECT_EQ(diameter(complete_graph(5)), 1u);
  EXPECT_EQ(diameter(path_graph(4)), 3u);
  EXPECT_THROW(diameter(empty_graph(3)), DomainError);
}

TEST(NodeBetweenness, Examples) {
  const auto p3 = node_betweenness(path_graph(3));
  EXPECT_DOUBLE_EQ(brute_force_betweenness(path_graph(3)).node[1], 1.0);
  EXPECT_DOUBLE_EQ(p3[1], 1.0);
  for (double x : node_betweenness(complete_graph(4))) EXPECT_DOUBLE_EQ(x, 0.0);
  EXPECT_DOUBLE_EQ(brute_force_betweenness(star_graph(5)).node[0], 6.0);
  EXPECT_DOUBLE_EQ(node_betweenness(star_graph(5))[0], 6.0);
  EXPECT_THROW(node_betweenness(Graph()), DomainError);
}

TEST(LinkBetweenness, Examples) {
  EXPECT_DOUBLE_EQ(link_betweenness(path_graph(2))[0], 1.0);
  for (double x : link_betweenness(path_graph(3))) EXPECT_DOUBLE_EQ(x, 2.0);
  // C4: 4 adjacent pairs put 1 on their own link, the 2 opposite pairs
  // split over two 2-hop paths; the oracle gives 2 per link.
  const auto oracle = brute_force_betweenness(cycle_graph(4));
  for (const auto& [link, value] : oracle.link) EXPECT_DOUBLE_EQ(value, 2.0);
  for (double x : link_betweenness(cycle_graph(4))) EXPECT_DOUBLE_EQ(x, 2.0);
  EXPECT_THROW(link_betweenness(empty_graph(3)), DomainError);
}

TEST(Betweenness, TreeBetweennessCountsPairsThroughNode) {
  // On a tree the unique path between two nodes passes v iff they lie in
  // different branches at v.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph tree = random_connected_graph(25, 0, seed);
    ASSERT_EQ(tree.link_count(), 24u);
    const auto bc = node_betweenness(tree);
    for (NodeIndex v = 0; v < tree.node_count(); ++v) {
      const std::vector<NodeIndex> self{v};
      const auto branches = connected_components(remove_nodes(tree, self)).sizes;
      double through = 0;
      double seen = 0;
      for (std::size_t s : branches) {
        through += seen * static_cast<double>(s);
        seen += static_cast<double>(s);
      }
      EXPECT_DOUBLE_EQ(bc[v], through);
    }
  }
}

TEST(AlgebraicConnectivityMetric, Examples) {
  EXPECT_NEAR(algebraic_connectivity_metric(complete_graph(4)), 4.0, 1e-8);
  EXPECT_NEAR(algebraic_connectivity_metric(disjoint_union(complete_graph(3), path_graph(2))),
              3.0, 1e-8);
  EXPECT_NEAR(algebraic_connectivity_metric(path_graph(2)), 2.0, 1e-8);
  EXPECT_THROW(algebraic_connectivity_metric(empty_graph(3)), DomainError);
}

TEST(Assortativity, Examples) {
  EXPECT_NEAR(pearson_assortativity(star_graph(5)), -1.0, 1e-12);
  EXPECT_NEAR(assortativity(star_graph(5)), -1.0, 1e-12);
  EXPECT_THROW(assortativity(cycle_graph(6)), DomainError);
  EXPECT_THROW(assortativity(path_graph(2)), DomainError);
  // double star: hubs 0 and 1 joined, each with three leaves
  const Graph double_star(8, {Link(0, 1), Link(0, 2), Link(0, 3), Link(0, 4), Link(1, 5),
                              Link(1, 6), Link(1, 7)});
  EXPECT_NEAR(assortativity(double_star), pearson_assortativity(double_star), 1e-12);
}

TEST(Assortativity, MatchesPearsonOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = random_graph(25, 0.15, seed);
    const double oracle = pearson_assortativity(g);
    if (!std::isfinite(oracle)) continue;
    EXPECT_NEAR(assortativity(g), oracle, 1e-10);
  }
}

TEST(MetricVector, IntactCompleteGraphNodeKind) {
  // [LCC, <k>, A2TR, clustering, ASPL, diameter, node BC, link BC, lambda2]
  const auto t = metric_vector(complete_graph(4), ElementKind::node, 4);
  ASSERT_EQ(t.size(), 9u);
  const std::vector<double> expected{1, 3, 1, 1, 1, 1, 0, 1, 4};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(t.values[i], expected[i], 1e-8) << t.names[i];
  EXPECT_EQ(t.names, metric_names(ElementKind::node));
}

TEST(MetricVector, FullyDisconnectedLinkKind) {
  const auto t = metric_vector(empty_graph(5), ElementKind::link, 5);
  ASSERT_EQ(t.size(), 10u);
  EXPECT_DOUBLE_EQ(t.values[0], 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(t.values[1], 1.0);
  for (std::size_t i = 2; i < 10; ++i) EXPECT_DOUBLE_EQ(t.values[i], 0.0) << t.names[i];
}

TEST(MetricVector, DegenerateInputsRecordZero) {
  const auto none = metric_vector(Graph(), ElementKind::node, 10);
  for (double x : none.values) EXPECT_EQ(x, 0.0);
  const auto single = metric_vector(empty_graph(1), ElementKind::link, 10);
  EXPECT_DOUBLE_EQ(single.values[0], 0.1);
  EXPECT_THROW(metric_vector(path_graph(5), ElementKind::node, 4), InputError);
  EXPECT_THROW(metric_vector(path_graph(5), ElementKind::node, 0), DomainError);
}

TEST(MetricVector, InvariantUnderRelabeling) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_graph(30, 0.08, seed);
    const Graph h = relabel(g, random_permutation(g.node_count(), seed * 31 + 1));
    for (auto kind : {ElementKind::node, ElementKind::link}) {
      const auto a = metric_vector(g, kind, 30);
      const auto b = metric_vector(h, kind, 30);
      for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(a.values[i], b.values[i], 1e-9 * std::max(1.0, std::abs(a.values[i])))
            << a.names[i];
    }
  }
}

TEST(MetricVector, ReliabilityFragmentationLccConsistency) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = random_graph(20, 0.05 + 0.01 * (seed % 10), seed);
    const auto t = metric_vector(g, ElementKind::link, 20);
    const bool reliable = t.values[3] == 1.0;
    const bool unfragmented = t.values[1] == 0.0;
    const bool whole = t.values[0] * 20.0 == 20.0;
    EXPECT_EQ(reliable, unfragmented);
    EXPECT_EQ(reliable, whole);
  }
}

TEST(Characterize, ConstructedGraphs) {
  const auto k4 = characterize(complete_graph(4));
  EXPECT_EQ(k4.node_count, 4u);
  EXPECT_EQ(k4.link_count, 6u);
  EXPECT_DOUBLE_EQ(k4.degree.mean, 3.0);
  EXPECT_DOUBLE_EQ(k4.degree.stddev, 0.0);
  EXPECT_EQ(k4.max_degree, 3u);
  EXPECT_DOUBLE_EQ(k4.shortest_path.mean, 1.0);
  EXPECT_DOUBLE_EQ(k4.shortest_path.stddev, 0.0);
  EXPECT_FALSE(k4.assortativity.has_value());

  const auto star = characterize(star_graph(9));
  ASSERT_TRUE(star.assortativity.has_value());
  EXPECT_NEAR(*star.assortativity, -1.0, 1e-12);
}
