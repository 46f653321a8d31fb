#include <gtest/gtest.h>

#include <random>

#include "netform/cost.hpp"
#include "netform/errors.hpp"
#include "test_support.hpp"

using namespace netform;
using namespace netform::testing;

namespace {

CostParams bare(Rational a, Rational ca, Rational cb) {
    CostParams p;
    p.major_weight = a;
    p.major_link_cost = ca;
    p.minor_link_cost = cb;
    p.mode = CostMode::Bare;
    return p;
}

/// Bare cost straight from the definition, using Floyd-Warshall distances.
Rational bare_cost_by_definition(const Network& net, const CostParams& p, PlayerId i) {
    const auto d = floyd_warshall(net);
    Rational total = Rational(static_cast<std::int64_t>(net.degree(i))) * p.link_cost(net.player_class(i));
    std::int64_t components = 0;
    for (PlayerId j = 0; j < net.size(); ++j) {
        if (j == i) continue;
        if (d[i][j] < 0) {
            // Count each unreachable component once, at its smallest member.
            bool first = true;
            for (PlayerId k = 0; k < j; ++k) first = first && d[k][j] < 0;
            components += first ? 1 : 0;
            continue;
        }
        total += (net.is_major(j) ? p.major_weight : Rational(1)) * Rational(d[i][j]);
    }
    return total + p.penalty_for(net.size()) * Rational(components);
}

}  // namespace

TEST(BareCost, LeafOfMinorStarUnderMajor) {
    // j (A) - x (B); i1, i2 (B) hang off x.
    Network net({PlayerClass::MajorA, PlayerClass::MinorB, PlayerClass::MinorB, PlayerClass::MinorB});
    net.add_edge(0, 1);
    net.add_edge(1, 2);
    net.add_edge(1, 3);
    const CostParams p = bare(3, 2, 2);
    const auto cost = bare_cost(net, p, 2);
    EXPECT_EQ(cost.total, bare_cost_by_definition(net, p, 2));
    EXPECT_EQ(cost.total, Rational(11));
    EXPECT_EQ(cost.link_cost, Rational(2));
    EXPECT_EQ(cost.major_distance_cost, Rational(6));
    EXPECT_EQ(cost.minor_distance_cost, Rational(3));
    EXPECT_EQ(cost.penalty, Rational(0));
}

TEST(BareCost, EmptyAndDisconnected) {
    const CostParams p = bare(3, 2, 2);
    EXPECT_EQ(bare_cost(Network(std::vector<PlayerClass>{PlayerClass::MinorB}), p, 0).total, Rational(0));
    const Network pair(std::vector<PlayerClass>(2, PlayerClass::MinorB));
    const auto cost = bare_cost(pair, p, 0);
    EXPECT_EQ(cost.penalty, p.penalty_for(2));
    EXPECT_EQ(cost.total, p.penalty_for(2));
    EXPECT_THROW(bare_cost(pair, p, 5), std::invalid_argument);

    // One Q per unreachable component.
    Network scattered(std::vector<PlayerClass>(4, PlayerClass::MinorB));
    scattered.add_edge(2, 3);
    EXPECT_EQ(bare_cost(scattered, p, 0).penalty, Rational(2) * p.penalty_for(4));
    EXPECT_EQ(bare_cost(scattered, p, 0).total, bare_cost_by_definition(scattered, p, 0));
    EXPECT_EQ(bare_cost(scattered, p, 2).total, bare_cost_by_definition(scattered, p, 2));
}

TEST(ReliableCost, MajorTriangle) {
    CostParams p = bare(10, 4, 4);
    p.mode = CostMode::Reliable;
    p.delta = Rational(1);
    const Network tri = complete_graph(3, PlayerClass::MajorA);
    for (PlayerId i = 0; i < 3; ++i) {
        const auto cost = reliable_cost(tri, p, i);
        EXPECT_EQ(cost.total, Rational(38));
        EXPECT_EQ(cost.penalty, Rational(0));
    }
}

TEST(ReliableCost, AsymmetricMinorWithoutBackupPaysQ) {
    CostParams p = bare(10, 3, 4);
    p.mode = CostMode::Reliable;
    p.tau = 0;
    Network net({PlayerClass::MajorA, PlayerClass::MajorA, PlayerClass::MajorA, PlayerClass::MinorB});
    net.add_edge(0, 1);
    net.add_edge(1, 2);
    net.add_edge(0, 2);
    net.add_edge(3, 0);
    const auto cost = reliable_cost(net, p, 3);
    EXPECT_EQ(cost.penalty, p.penalty_for(4));
    // Disconnected is strictly worse than connected-without-backup.
    Network cut = net;
    cut.remove_edge(3, 0);
    EXPECT_EQ(reliable_cost(cut, p, 3).penalty, Rational(2) * p.penalty_for(4));
}

TEST(ReliableCost, TauIrrelevantWhenMinorPairsHaveEqualLegs) {
    // B3 and B4 both hang off A0 and A1, so d = d' = 2 between them.
    Network net({PlayerClass::MajorA, PlayerClass::MajorA, PlayerClass::MinorB, PlayerClass::MinorB});
    for (auto [a, b] : {std::pair{0, 1}, {2, 0}, {2, 1}, {3, 0}, {3, 1}}) net.add_edge(a, b);
    CostParams p = bare(3, 2, 2);
    p.mode = CostMode::Reliable;
    p.delta = Rational(1, 2);
    p.tau = 1;
    const Rational symmetric = reliable_cost(net, p, 2).total;
    p.tau = 0;
    EXPECT_EQ(reliable_cost(net, p, 2).total, symmetric);
}

TEST(NodeCost, DispatchesOnMode) {
    Network net = cycle_graph(4);
    net.set_class(0, PlayerClass::MajorA);
    CostParams p = bare(3, 2, 2);
    EXPECT_EQ(node_cost(net, p, 1).total, bare_cost(net, p, 1).total);
    p.mode = CostMode::Reliable;
    EXPECT_EQ(node_cost(net, p, 1).total, reliable_cost(net, p, 1).total);
    EXPECT_EQ(node_cost(Network(std::vector<PlayerClass>{PlayerClass::MajorA}), p, 0).total, Rational(0));
}

TEST(MonetaryCost, TransfersShiftIndividualCosts) {
    GameState state(path_graph(3), true);
    const CostParams p = bare(3, 2, 2);
    for (PlayerId i = 0; i < 3; ++i) EXPECT_EQ(monetary_cost(state, p, i), node_cost(state, p, i).total);

    GameState paid(path_graph(2), true);
    paid.remove_link(0, 1);
    paid.add_link(0, 1, Rational(5));
    EXPECT_EQ(monetary_cost(paid, p, 0), node_cost(paid, p, 0).total + Rational(5));
    EXPECT_EQ(monetary_cost(paid, p, 1), node_cost(paid, p, 1).total - Rational(5));

    paid.ledger[{0, 2}] = Rational(1);
    EXPECT_THROW(monetary_cost(paid, p, 0), std::logic_error);
}

TEST(SocialCost, StarOnOneMajor) {
    // Majors 0,1 linked; minors 2,3,4 on major 0.
    Network net(2, 3);
    net.add_edge(0, 1);
    for (PlayerId b = 2; b < 5; ++b) net.add_edge(0, b);
    const CostParams p = bare(3, 2, 2);
    EXPECT_EQ(social_cost(net, p), Rational(70));
    // Closed form 2|T_B|(|T_B| - 1 + c + (A+1)(|T_A| - 1/2)) + |T_A|(|T_A|-1)(c_A + A).
    const Rational closed = Rational(6) * (Rational(2) + Rational(2) + Rational(4) * Rational(3, 2)) +
                            Rational(2) * (Rational(2) + Rational(3));
    EXPECT_EQ(closed, Rational(70));

    EXPECT_EQ(social_cost(Network(std::vector<PlayerClass>{PlayerClass::MinorB}), p), Rational(0));
    const Network pair(std::vector<PlayerClass>(2, PlayerClass::MinorB));
    EXPECT_GE(social_cost(pair, p), Rational(2) * p.penalty_for(2));
}

TEST(DeltaCost, Examples) {
    const CostParams p = bare(3, 2, 2);
    EXPECT_EQ(delta_cost(path_graph(3), p, 0, make_edge(0, 2), EdgeAction::Add), Rational(1));

    const Network line7 = path_graph(7);
    EXPECT_EQ(delta_cost(line7, p, 0, make_edge(0, 6), EdgeAction::Add), Rational(2) - Rational(9));

    const Network line3 = path_graph(3);
    const Rational before = node_cost(line3, p, 0).total;
    EXPECT_EQ(delta_cost(line3, p, 0, make_edge(0, 1), EdgeAction::Remove), p.penalty_for(3) - before);

    EXPECT_THROW(delta_cost(line3, p, 0, make_edge(0, 1), EdgeAction::Add), StateError);
    EXPECT_THROW(delta_cost(line3, p, 0, make_edge(0, 2), EdgeAction::Remove), StateError);
}

TEST(LineShortcutReduction, ClosedFormMatchesBfs) {
    EXPECT_EQ(line_shortcut_reduction(2), Rational(0));
    EXPECT_EQ(line_shortcut_reduction(4), Rational(2));
    EXPECT_EQ(line_shortcut_reduction(7), Rational(9));
    EXPECT_THROW(line_shortcut_reduction(1), std::invalid_argument);
    for (int k = 2; k <= 12; ++k) {
        Network line = path_graph(static_cast<std::size_t>(k));
        auto sum_from_end = [](const Network& net) {
            std::int64_t s = 0;
            for (const auto& d : all_distances_from(net, 0)) s += d.value_or(0);
            return s;
        };
        const std::int64_t before = sum_from_end(line);
        if (k > 2) line.add_edge(0, static_cast<PlayerId>(k - 1));
        EXPECT_EQ(line_shortcut_reduction(k), Rational(before - sum_from_end(line))) << "k=" << k;
    }
}

TEST(CostProperties, RandomInstances) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + trial % 6;
        Network net = random_connected(n, 0.25, rng);
        CostParams p = bare(Rational(3 + trial % 4), Rational(3, 2), Rational(5, 2));
        if (trial % 2 == 1) {
            p.mode = CostMode::Reliable;
            p.delta = trial % 4 == 1 ? Rational(1) : Rational(1, 3);
            p.tau = trial % 3 == 0 ? 0 : 1;
        }

        // Transfer neutrality.
        GameState state(net, true);
        std::uniform_int_distribution<int> amount(0, 9);
        for (const Edge& e : net.edges()) {
            state.ledger[{e.u, e.v}] = Rational(amount(rng), 2);
            if (amount(rng) > 5) state.ledger[{e.v, e.u}] = Rational(amount(rng));
        }
        Rational total(0);
        for (PlayerId i = 0; i < n; ++i) total += monetary_cost(state, p, i);
        ASSERT_EQ(total, social_cost(net, p));

        for (PlayerId a = 0; a < n; ++a) {
            for (PlayerId b = a + 1; b < n; ++b) {
                const Edge e{a, b};
                const PlayerId who = static_cast<PlayerId>(trial) % static_cast<PlayerId>(n);
                const Rational pen_before = node_cost(net, p, who).penalty;
                Network toggled = net;
                if (net.has_edge(a, b)) {
                    const Rational there = delta_cost(net, p, who, e, EdgeAction::Remove);
                    toggled.remove_edge(a, b);
                    ASSERT_EQ(there + delta_cost(toggled, p, who, e, EdgeAction::Add), Rational(0));
                    ASSERT_GE(node_cost(toggled, p, who).penalty, pen_before);
                } else {
                    const Rational there = delta_cost(net, p, who, e, EdgeAction::Add);
                    toggled.add_edge(a, b);
                    ASSERT_EQ(there + delta_cost(toggled, p, who, e, EdgeAction::Remove), Rational(0));
                    ASSERT_LE(node_cost(toggled, p, who).penalty, pen_before);
                }
            }
        }

        if (p.mode == CostMode::Bare) {
            for (PlayerId i = 0; i < n; ++i) ASSERT_EQ(bare_cost(net, p, i).total, bare_cost_by_definition(net, p, i));
        }
    }
}

TEST(CostProperties, ReliableWeightsCollapseToBareWhenLegsAreEqual) {
    // With tau = 1 the reliable cost exceeds the bare cost by exactly
    // w_j * delta/(1+delta) * (d'_j - d_j) summed over targets.
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const Network net = random_connected(4 + trial % 5, 0.5, rng);
        CostParams p = bare(4, 2, 3);
        p.mode = CostMode::Reliable;
        p.delta = Rational(1, 1 + trial % 3);
        for (PlayerId i = 0; i < net.size(); ++i) {
            const auto rel = reliable_cost(net, p, i);
            if (rel.penalty != Rational(0)) continue;
            Rational expected = bare_cost(net, p, i).total;
            for (PlayerId j = 0; j < net.size(); ++j) {
                if (j == i) continue;
                const auto pair = min_disjoint_pair(net, i, j, p.delta);
                const Rational w = net.is_major(j) ? p.major_weight : Rational(1);
                expected += w * p.delta / (Rational(1) + p.delta) * Rational(pair->backup - pair->primary);
            }
            ASSERT_EQ(rel.total, expected);
        }
    }
}
