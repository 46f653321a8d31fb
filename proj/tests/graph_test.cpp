#include <gtest/gtest.h>

#include <random>

#include "netform/graph.hpp"
#include "test_support.hpp"

using namespace netform;
using namespace netform::testing;

TEST(ShortestDistance, Basics) {
    const Network line = path_graph(3);
    EXPECT_EQ(shortest_distance(line, 0, 2), 2);
    EXPECT_EQ(shortest_distance(line, 1, 1), 0);
    const Network pair(std::vector<PlayerClass>(2, PlayerClass::MinorB));
    EXPECT_FALSE(shortest_distance(pair, 0, 1).has_value());
    EXPECT_THROW(shortest_distance(line, 0, 7), std::invalid_argument);
}

TEST(AllDistancesFrom, Star) {
    Network star(std::vector<PlayerClass>(4, PlayerClass::MinorB));
    for (PlayerId leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf);
    const auto from_center = all_distances_from(star, 0);
    for (PlayerId leaf = 1; leaf < 4; ++leaf) EXPECT_EQ(from_center[leaf], 1);
    const auto from_leaf = all_distances_from(star, 1);
    EXPECT_EQ(from_leaf[0], 1);
    EXPECT_EQ(from_leaf[2], 2);
    EXPECT_EQ(from_leaf[3], 2);

    const Network empty(std::vector<PlayerClass>(3, PlayerClass::MinorB));
    const auto isolated = all_distances_from(empty, 0);
    EXPECT_EQ(isolated[0], 0);
    EXPECT_FALSE(isolated[1].has_value());
    EXPECT_FALSE(isolated[2].has_value());
}

TEST(MinDisjointPair, Examples) {
    EXPECT_EQ(min_disjoint_pair(cycle_graph(4), 0, 2, Rational(1)), (PathPair{2, 2}));
    EXPECT_EQ(min_disjoint_pair(cycle_graph(3), 0, 1, Rational(1)), (PathPair{1, 2}));
    EXPECT_EQ(min_disjoint_pair(cycle_graph(3), 0, 1, Rational(1, 10)), (PathPair{1, 2}));

    Network bridge(std::vector<PlayerClass>(6, PlayerClass::MinorB));
    for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}) bridge.add_edge(a, b);
    EXPECT_FALSE(min_disjoint_pair(bridge, 0, 5, Rational(1)).has_value());
    EXPECT_FALSE(min_disjoint_pair(bridge, 0, 5, Rational(1, 2)).has_value());
    EXPECT_THROW(min_disjoint_pair(bridge, 2, 2, Rational(1)), std::invalid_argument);
}

TEST(MinDisjointPair, SuurballeUntanglesTrap) {
    // The shortest path s-a-b-t blocks every disjoint partner; the optimum
    // uses s-a-c-t and s-d-b-t (cancellation of a-b).
    Network net(std::vector<PlayerClass>(6, PlayerClass::MinorB));
    const PlayerId s = 0, a = 1, b = 2, t = 3, c = 4, d = 5;
    for (auto [u, v] : {std::pair{s, a}, {a, b}, {b, t}, {a, c}, {c, t}, {s, d}, {d, b}}) net.add_edge(u, v);
    EXPECT_EQ(min_disjoint_pair(net, s, t, Rational(1)), (PathPair{3, 3}));
    // Shortest-then-disjoint fails here, so the exact pair is the fallback.
    EXPECT_EQ(min_disjoint_pair(net, s, t, Rational(1, 10)), (PathPair{3, 3}));
}

TEST(ExactMinPairOracle, Examples) {
    EXPECT_EQ(exact_min_pair_oracle(cycle_graph(4), 0, 2, Rational(1)), (PathPair{2, 2}));
    EXPECT_EQ(exact_min_pair_oracle(cycle_graph(3), 0, 1, Rational(1, 10)), (PathPair{1, 2}));
    EXPECT_THROW(exact_min_pair_oracle(path_graph(13), 0, 1, Rational(1)), std::length_error);
}

TEST(ShortestCycleThrough, Examples) {
    const Network c5 = cycle_graph(5);
    for (PlayerId a = 0; a < 5; ++a)
        for (PlayerId b = a + 1; b < 5; ++b) EXPECT_EQ(shortest_cycle_through(c5, a, b), 5);
    Network chord = cycle_graph(4);
    chord.add_edge(0, 2);
    EXPECT_EQ(shortest_cycle_through(chord, 0, 2), 3);
    EXPECT_FALSE(shortest_cycle_through(path_graph(5), 0, 4).has_value());
}

TEST(ConnectedComponent, Examples) {
    Network net(std::vector<PlayerClass>(5, PlayerClass::MinorB));
    EXPECT_EQ(connected_component(net, 2), std::vector<PlayerId>{2});
    net.add_edge(0, 1);
    net.add_edge(1, 2);
    net.add_edge(3, 4);
    EXPECT_EQ(connected_component(net, 0), (std::vector<PlayerId>{0, 1, 2}));
    EXPECT_EQ(connected_component(net, 4), (std::vector<PlayerId>{3, 4}));
    EXPECT_EQ(connected_component(complete_graph(4), 3).size(), 4u);
}

TEST(Network, RejectsSelfLoopsAndParallelEdges) {
    Network net(std::vector<PlayerClass>(3, PlayerClass::MinorB));
    EXPECT_TRUE(net.add_edge(0, 1));
    EXPECT_FALSE(net.add_edge(1, 0));
    EXPECT_EQ(net.edge_count(), 1u);
    EXPECT_THROW(net.add_edge(2, 2), std::invalid_argument);
    EXPECT_TRUE(net.remove_edge(1, 0));
    EXPECT_FALSE(net.remove_edge(0, 1));
}

TEST(GraphProperties, RandomGraphsAgreeWithOracles) {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 3 + trial % 8;
        const Network net = random_connected(n, 0.1 + 0.05 * (trial % 6), rng);
        const auto fw = floyd_warshall(net);
        for (PlayerId a = 0; a < n; ++a) {
            for (PlayerId b = 0; b < n; ++b) {
                ASSERT_EQ(shortest_distance(net, a, b), fw[a][b]);
                ASSERT_EQ(shortest_distance(net, a, b), shortest_distance(net, b, a));
                for (PlayerId c = 0; c < n; ++c) ASSERT_LE(fw[a][c], fw[a][b] + fw[b][c]);
                if (a == b) continue;
                const auto exact = min_disjoint_pair(net, a, b, Rational(1));
                const auto oracle = exact_min_pair_oracle(net, a, b, Rational(1));
                ASSERT_EQ(exact.has_value(), oracle.has_value());
                if (!exact) continue;
                ASSERT_EQ(exact->total(), oracle->total());
                ASSERT_LE(exact->primary, exact->backup);
                const auto heuristic = min_disjoint_pair(net, a, b, Rational(1, 10));
                ASSERT_TRUE(heuristic.has_value());
                ASSERT_EQ(heuristic->primary, fw[a][b]);
                ASSERT_EQ(heuristic, min_disjoint_pair(net, b, a, Rational(1, 10)));
                ASSERT_GE(*shortest_cycle_through(net, a, b), fw[a][b] + 1);
            }
        }
    }
}
