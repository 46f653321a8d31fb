#include <gtest/gtest.h>

#include <set>

#include "netform/dynamics.hpp"
#include "netform/equilibrium.hpp"
#include "netform/errors.hpp"
#include "test_support.hpp"

using namespace netform;
using netform::testing::path_graph;

namespace {

CostParams bare(Rational a, Rational c_a, Rational c_b) {
    CostParams p;
    p.major_weight = a;
    p.major_link_cost = c_a;
    p.minor_link_cost = c_b;
    return p;
}

std::set<std::pair<PlayerId, PlayerId>> edge_set(const Network& net) {
    std::set<std::pair<PlayerId, PlayerId>> out;
    for (const Edge& e : net.edges()) out.insert({e.u, e.v});
    return out;
}

GameState joined_state(Network net) { return GameState(std::move(net), true); }

}  // namespace

TEST(RunGame, ScriptedMajorThenMinorsFormStar) {
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 2);
    cfg.scheduler.kind = SchedulerKind::Scripted;
    cfg.scheduler.arrival_order = {0, 1, 2, 3};
    const auto r = run_game(cfg, 1, 3);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(edge_set(r.state.net), (std::set<std::pair<PlayerId, PlayerId>>{{0, 1}, {0, 2}, {0, 3}}));
    EXPECT_EQ(social_cost(r.state.net, cfg.params), social_cost(optimal_bare_network(cfg.params, 1, 3), cfg.params));
}

TEST(RunGame, RejectsBadConfigs) {
    DynamicsConfig cfg;
    cfg.max_rounds = 0;
    EXPECT_THROW(run_game(cfg, 1, 2), std::invalid_argument);
    cfg.max_rounds = 5;
    cfg.scheduler.kind = SchedulerKind::Scripted;
    cfg.scheduler.arrival_order = {0, 0};
    EXPECT_THROW(run_game(cfg, 1, 2), std::invalid_argument);
    cfg.scheduler.arrival_order = {0, 1, 2};
    cfg.scheduler.turns = {1};
    EXPECT_THROW(run_game(cfg, 1, 2), std::invalid_argument);
}

TEST(RunGame, ScriptedTurnsPlayBeforeRounds) {
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 2);
    cfg.scheduler.kind = SchedulerKind::Scripted;
    cfg.scheduler.arrival_order = {2, 0, 1};
    cfg.scheduler.turns = {2, 0, 2};
    const auto r = run_game(cfg, 1, 2);
    ASSERT_GE(r.trace.turns.size(), 4U);
    EXPECT_EQ(r.trace.turns[0].actor, 2U);
    EXPECT_TRUE(r.trace.turns[0].arrival);
    EXPECT_TRUE(r.trace.turns[0].moves.empty());  // nobody to link to yet
    EXPECT_EQ(r.trace.turns[1].actor, 0U);
    EXPECT_EQ(r.trace.turns[1].moves.size(), 1U);
    EXPECT_FALSE(r.trace.turns[2].arrival);
    EXPECT_EQ(r.trace.turns[3].actor, 1U);
    EXPECT_TRUE(r.trace.turns[3].arrival);
}

TEST(PlayTurn, DisconnectedNewcomerLinksToTheMajor) {
    GameState state(Network(1, 1));
    state.join(0);
    state.join(1);
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 2);
    Rng rng(1);
    const auto out = play_turn(state, 1, cfg, rng);
    ASSERT_EQ(out.moves.size(), 1U);
    EXPECT_EQ(out.moves[0].action, EdgeAction::Add);
    EXPECT_EQ(out.moves[0].edge, make_edge(0, 1));
    EXPECT_TRUE(state.net.has_edge(0, 1));
}

TEST(PlayTurn, StableMinorDoesNothing) {
    Network net(1, 3);
    for (PlayerId b = 1; b < 4; ++b) net.add_edge(0, b);
    GameState state = joined_state(net);
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 2);
    Rng rng(1);
    for (PlayerId v = 0; v < 4; ++v) EXPECT_TRUE(play_turn(state, v, cfg, rng).moves.empty());
    EXPECT_EQ(state.net, net);
}

TEST(PlayTurn, NotJoinedIsAnError) {
    GameState state(Network(1, 1));
    state.join(0);
    DynamicsConfig cfg;
    Rng rng(1);
    EXPECT_THROW(play_turn(state, 1, cfg, rng), StateError);
}

// Majors 0,1; B-star center 2 hangs off hub 0 and carries leaf 3.
TEST(PlayTurn, StarLeafDefectsUnderRule2a) {
    Network net(2, 2);
    net.add_edge(0, 1);
    net.add_edge(0, 2);
    net.add_edge(2, 3);
    GameState state = joined_state(net);
    const CostParams p = bare(3, 2, 2);

    const auto before = classify_phase(state, p);
    ASSERT_TRUE(before.classified);
    EXPECT_EQ(*before.star_center, 2U);
    EXPECT_EQ(before.s_size, 1U);
    EXPECT_EQ(before.d_size, 1U);
    EXPECT_LT(*before.term2, Rational(0));

    DynamicsConfig cfg;
    cfg.params = p;
    cfg.rule = Rule::Rule2b;
    GameState stay = state;
    Rng rng(1);
    // Without detaching first the hub refuses the extra link.
    EXPECT_TRUE(play_turn(stay, 3, cfg, rng).moves.empty());

    cfg.rule = Rule::Rule2a;
    const auto out = play_turn(state, 3, cfg, rng);
    ASSERT_EQ(out.moves.size(), 2U);
    EXPECT_EQ(out.moves[0].action, EdgeAction::Remove);
    EXPECT_EQ(out.moves[0].edge, make_edge(2, 3));
    EXPECT_GT(out.moves[0].actor_delta, Rational(0));
    EXPECT_EQ(out.moves[1].action, EdgeAction::Add);
    EXPECT_EQ(out.moves[1].edge, make_edge(0, 3));
    EXPECT_TRUE(state.net.has_edge(0, 3));
    EXPECT_FALSE(state.net.has_edge(2, 3));

    const auto after = classify_phase(state, p);
    ASSERT_TRUE(after.classified);
    EXPECT_EQ(after.s_size, 0U);
    EXPECT_EQ(after.region, 1);
}

TEST(GreedyAccept, StrictAndPaid) {
    CostParams p = bare(3, 1, 1);
    GameState line4 = joined_state(path_graph(4));
    EXPECT_EQ(delta_cost(line4.net, p, 3, make_edge(0, 3), EdgeAction::Add), Rational(-1));
    EXPECT_TRUE(greedy_accept(line4, p, 3, make_edge(0, 3)));

    GameState line3 = joined_state(path_graph(3));
    EXPECT_EQ(delta_cost(line3.net, p, 2, make_edge(0, 2), EdgeAction::Add), Rational(0));
    EXPECT_FALSE(greedy_accept(line3, p, 2, make_edge(0, 2)));

    p.minor_link_cost = 3;
    EXPECT_EQ(delta_cost(line3.net, p, 2, make_edge(0, 2), EdgeAction::Add), Rational(2));
    EXPECT_FALSE(greedy_accept(line3, p, 2, make_edge(0, 2)));
    EXPECT_TRUE(greedy_accept(line3, p, 2, make_edge(0, 2), Rational(3), true));
    EXPECT_FALSE(greedy_accept(line3, p, 2, make_edge(0, 2), Rational(1), true));
    EXPECT_THROW(greedy_accept(line3, p, 1, make_edge(0, 2)), std::invalid_argument);
}

TEST(GreedyAccept, AcceptanceRule) {
    EXPECT_TRUE(accepts(Rational(-1), Rational(0), false));
    EXPECT_FALSE(accepts(Rational(0), Rational(0), false));
    EXPECT_FALSE(accepts(Rational(0), Rational(0), true));
    EXPECT_TRUE(accepts(Rational(2), Rational(2), true));
    EXPECT_FALSE(accepts(Rational(2), Rational(2), false));
}

TEST(PriceQuote, Efficient) {
    CostParams p = bare(3, 1, 1);
    GameState line4 = joined_state(path_graph(4));
    EXPECT_EQ(price_quote(line4, p, 0, 3, Pricing::Efficient), Rational(0));
    p.minor_link_cost = 3;
    GameState line3 = joined_state(path_graph(3));
    EXPECT_EQ(price_quote(line3, p, 0, 2, Pricing::Efficient), Rational(2));
    EXPECT_THROW(price_quote(line3, p, 0, 1, Pricing::Efficient), StateError);
}

TEST(PriceQuote, StrategicTieIsEfficient) {
    // On the 5-line the end node's viable partners 3 and 4 tie.
    const CostParams p = bare(3, 1, 1);
    GameState line5 = joined_state(path_graph(5));
    EXPECT_EQ(price_quote(line5, p, 0, 3, Pricing::Strategic), Rational(0));
    EXPECT_EQ(price_quote(line5, p, 0, 4, Pricing::Strategic), Rational(0));
}

TEST(PriceQuote, StrategicExtractsSurplus) {
    // 6-line, payer 0: viable partners 3, 4, 5 with actor deltas -5, -6, -5,
    // all payees gain. Partner 4 can charge the one unit it saves over 3.
    const CostParams p = bare(3, 1, 1);
    GameState line6 = joined_state(path_graph(6));
    EXPECT_EQ(delta_cost(line6.net, p, 0, make_edge(0, 4), EdgeAction::Add), Rational(-6));
    EXPECT_EQ(price_quote(line6, p, 0, 4, Pricing::Strategic), Rational(1));
    EXPECT_EQ(price_quote(line6, p, 0, 4, Pricing::Efficient), Rational(0));
    EXPECT_EQ(price_quote(line6, p, 0, 3, Pricing::Strategic), Rational(0));
    EXPECT_EQ(price_quote(line6, p, 0, 2, Pricing::Strategic), Rational(0));
}

TEST(ChoosePartner, Examples) {
    CostParams p = bare(3, 1, 1);
    Rng rng(7);
    const auto single = choose_partner(joined_state(path_graph(4)), p, 0, Preference::EfficientPO1,
                                       Pricing::Efficient, rng);
    ASSERT_TRUE(single);
    EXPECT_EQ(single->partner, 3U);
    EXPECT_EQ(single->quote, Rational(0));

    p.minor_link_cost = 3;
    EXPECT_FALSE(choose_partner(joined_state(path_graph(3)), p, 0, Preference::EfficientPO1, Pricing::Efficient, rng));
}

TEST(ChoosePartner, CheapestEquivalent) {
    // Strategic quotes on the 6-line make all three nets equal to -5; PO#2
    // takes a quote-0 partner, PO#1 the one that also helps the payee most.
    const CostParams p = bare(3, 1, 1);
    const GameState line6 = joined_state(path_graph(6));
    std::set<PlayerId> seen;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        const auto pick = choose_partner(line6, p, 0, Preference::CheapestEquivalentPO2, Pricing::Strategic, rng);
        ASSERT_TRUE(pick);
        EXPECT_EQ(pick->quote, Rational(0));
        EXPECT_EQ(pick->actor_delta + pick->quote, Rational(-5));
        seen.insert(pick->partner);
    }
    EXPECT_EQ(seen, (std::set<PlayerId>{3, 5}));

    Rng rng(1);
    const auto po1 = choose_partner(line6, p, 0, Preference::EfficientPO1, Pricing::Strategic, rng);
    ASSERT_TRUE(po1);
    EXPECT_EQ(po1->partner, 5U);
}

TEST(ClassifyPhase, OptimalStarOnMajor) {
    const CostParams p = bare(3, 2, 2);
    const GameState state = joined_state(optimal_bare_network(p, 2, 3));
    const auto ph = classify_phase(state, p);
    ASSERT_TRUE(ph.classified);
    EXPECT_EQ(ph.s_size, 0U);
    EXPECT_LE(ph.d_size, 1U);
    EXPECT_EQ(*ph.hub, 0U);
    EXPECT_EQ(ph.region, 1);
}

TEST(ClassifyPhase, FullMinorStar) {
    const CostParams p = bare(3, 2, 2);
    Network net(3, 5);
    for (PlayerId a = 0; a < 3; ++a) {
        for (PlayerId b = a + 1; b < 3; ++b) net.add_edge(a, b);
        net.add_edge(a, 3);
    }
    for (PlayerId b = 4; b < 8; ++b) net.add_edge(3, b);
    const auto ph = classify_phase(joined_state(net), p);
    ASSERT_TRUE(ph.classified);
    EXPECT_EQ(*ph.star_center, 3U);
    EXPECT_EQ(ph.s_size, 4U);
    EXPECT_EQ(ph.d_size, 3U);
    EXPECT_EQ(ph.l_size, 0U);
    EXPECT_EQ(*ph.term1, Rational(2 - 4 - 1));
}

TEST(ClassifyPhase, DenseGraphIsUnclassified) {
    const CostParams p = bare(3, 2, 2);
    Network net = netform::testing::complete_graph(6);
    net.set_class(0, PlayerClass::MajorA);
    EXPECT_FALSE(classify_phase(joined_state(net), p).classified);
    EXPECT_FALSE(classify_phase(joined_state(net), p).region);
}

TEST(ClassifyReliablePhase, Examples) {
    CostParams p = bare(10, 2, 3);
    p.mode = CostMode::Reliable;

    const auto opt = classify_reliable_phase(joined_state(optimal_reliable_stable_network(p, 3, 4)), p);
    ASSERT_TRUE(opt.classified);
    EXPECT_EQ(opt.s_size, 0U);
    EXPECT_EQ(opt.s2_size, 0U);
    EXPECT_EQ(opt.l_size, 4U);

    // Centers 2 and 3; leaves 4,5,6 on both, leaf 7 on center 2 and major 0.
    Network net(2, 6);
    net.add_edge(0, 1);
    net.add_edge(0, 2);
    net.add_edge(1, 3);
    for (PlayerId b = 4; b < 7; ++b) {
        net.add_edge(2, b);
        net.add_edge(3, b);
    }
    net.add_edge(2, 7);
    net.add_edge(0, 7);
    const auto dbl = classify_reliable_phase(joined_state(net), p);
    ASSERT_TRUE(dbl.classified);
    EXPECT_EQ(*dbl.star_center, 2U);
    EXPECT_EQ(*dbl.second_center, 3U);
    EXPECT_EQ(dbl.s_size, 4U);
    EXPECT_EQ(dbl.s2_size, 3U);
    EXPECT_EQ(dbl.d_size, 1U);
    EXPECT_EQ(dbl.d2_size, 1U);

    EXPECT_FALSE(classify_reliable_phase(joined_state(net), bare(10, 2, 3)).classified);
}

TEST(ConvergencePrediction, Examples) {
    using C = PlayerClass;
    const std::vector<C> major_first = {C::MajorA, C::MinorB, C::MinorB, C::MinorB};
    EXPECT_EQ(convergence_prediction(bare(2, 1, 1), major_first), Prediction::Optimal);

    std::vector<C> ten_then_four(10, C::MinorB);
    ten_then_four.insert(ten_then_four.end(), 4, C::MajorA);
    EXPECT_EQ(convergence_prediction(bare(3, 2, 2), ten_then_four), Prediction::Optimal);

    std::vector<C> five_then_one(5, C::MinorB);
    five_then_one.push_back(C::MajorA);
    EXPECT_EQ(convergence_prediction(bare(2, 6, 6), five_then_one), Prediction::Indeterminate);
    // A cheaper major link puts the same history in region 3.
    EXPECT_EQ(convergence_prediction(bare(2, 2, 2), five_then_one), Prediction::PromotedStar);
}

TEST(DynamicsProperties, ReplayIsDeterministic) {
    for (Rule rule : {Rule::Rule2a, Rule::Rule2b}) {
        for (bool transfers : {false, true}) {
            DynamicsConfig cfg;
            cfg.params = bare(3, 2, 3);
            cfg.rule = rule;
            cfg.transfers = transfers;
            cfg.preference = Preference::CheapestEquivalentPO2;
            cfg.pricing = Pricing::Strategic;
            cfg.scheduler.kind = SchedulerKind::UniformRandom;
            cfg.scheduler.seed = 11;
            const auto a = run_game(cfg, 3, 7);
            const auto b = run_game(cfg, 3, 7);
            ASSERT_EQ(a.trace.turns.size(), b.trace.turns.size());
            for (std::size_t t = 0; t < a.trace.turns.size(); ++t) {
                const auto& x = a.trace.turns[t];
                const auto& y = b.trace.turns[t];
                EXPECT_EQ(x.actor, y.actor);
                EXPECT_EQ(x.social_cost, y.social_cost);
                ASSERT_EQ(x.moves.size(), y.moves.size());
                for (std::size_t k = 0; k < x.moves.size(); ++k) {
                    EXPECT_EQ(x.moves[k].edge, y.moves[k].edge);
                    EXPECT_EQ(x.moves[k].payment, y.moves[k].payment);
                }
            }
            const GameState replayed = replay(a.trace);
            EXPECT_EQ(replayed.net, a.state.net);
            EXPECT_EQ(replayed.ledger, a.state.ledger);
            a.state.check_ledger();
        }
    }
}

TEST(DynamicsProperties, Rule2bMovesStrictlyImproveAndAreAccepted) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (bool transfers : {false, true}) {
            DynamicsConfig cfg;
            cfg.params = bare(3, 2, 3);
            cfg.transfers = transfers;
            cfg.scheduler.kind = SchedulerKind::UniformRandom;
            cfg.scheduler.seed = seed;
            const auto r = run_game(cfg, 3, 8);
            EXPECT_TRUE(r.converged);
            for (const auto& turn : r.trace.turns) {
                for (const auto& m : turn.moves) {
                    EXPECT_LT(m.actor_delta, Rational(0));
                    if (m.action == EdgeAction::Add) EXPECT_TRUE(accepts(m.counterparty_delta, m.payment, transfers));
                }
            }
        }
    }
}

TEST(DynamicsProperties, EveryAdditionIsBilateral) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DynamicsConfig cfg;
        cfg.params = bare(3, 2, 4);
        cfg.rule = Rule::Rule2a;
        cfg.scheduler.kind = SchedulerKind::UniformRandom;
        cfg.scheduler.seed = seed;
        const auto r = run_game(cfg, 3, 6);
        GameState state(Network(3, 6));
        for (const auto& turn : r.trace.turns) {
            if (turn.arrival) state.join(turn.actor);
            for (const auto& m : turn.moves) {
                if (m.action == EdgeAction::Add) {
                    EXPECT_TRUE(greedy_accept(state, cfg.params, m.counterparty, m.edge));
                    state.add_link(m.actor, m.counterparty, m.payment);
                } else {
                    state.remove_link(m.edge.u, m.edge.v);
                }
            }
        }
        EXPECT_EQ(state.net, r.state.net);
    }
}

TEST(DynamicsProperties, Rule2aReachesOptimumWhenMajorsDominate) {
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 4);
    cfg.rule = Rule::Rule2a;
    cfg.scheduler.kind = SchedulerKind::UniformRandom;
    const Rational opt = social_cost(optimal_bare_network(cfg.params, 4, 10), cfg.params);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        cfg.scheduler.seed = seed;
        const auto r = run_game(cfg, 4, 10);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(social_cost(r.state.net, cfg.params), opt) << "seed " << seed;
    }
}

TEST(DynamicsProperties, SettlementFreeMajorClique) {
    DynamicsConfig cfg;
    cfg.params = bare(3, Rational(3, 2), Rational(3, 2));
    cfg.transfers = true;
    cfg.scheduler.kind = SchedulerKind::UniformRandom;
    const Network opt = optimal_bare_network(cfg.params, 3, 6);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.scheduler.seed = seed;
        const auto r = run_game(cfg, 3, 6);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(edge_set(r.state.net), edge_set(opt)) << "seed " << seed;
        EXPECT_TRUE(is_pairwise_stable_with_transfers(r.state.net, cfg.params).stable);
        for (PlayerId a = 0; a < 3; ++a) {
            for (PlayerId b = 0; b < 3; ++b) {
                if (a != b) EXPECT_EQ(r.state.payment(a, b), Rational(0));
            }
        }
    }
}

TEST(DynamicsProperties, TurnBudgetIsFlagged) {
    DynamicsConfig cfg;
    cfg.params = bare(3, 2, 2);
    cfg.turn_budget = 1;
    GameState state(Network(2, 1));
    for (PlayerId v = 0; v < 3; ++v) state.join(v);
    Rng rng(1);
    const auto out = play_turn(state, 2, cfg, rng);
    EXPECT_EQ(out.moves.size(), 1U);
    EXPECT_TRUE(out.budget_hit);
}

TEST(DynamicsNames, Strings) {
    EXPECT_EQ(to_string(Rule::Rule2a), "rule2a");
    EXPECT_EQ(to_string(Preference::CheapestEquivalentPO2), "po2");
    EXPECT_EQ(to_string(Pricing::Strategic), "strategic");
    EXPECT_EQ(to_string(SchedulerKind::UniformRandom), "random");
    EXPECT_EQ(to_string(Prediction::PromotedStar), "promoted_star");
}
