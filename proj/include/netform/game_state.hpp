#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "netform/graph.hpp"
#include "netform/rational.hpp"

namespace netform {

/// Network plus the players that have joined so far and the payments
/// attached to existing edges.
struct GameState {
    Network net;
    ActiveMask joined;
    /// (payer, payee) -> amount; keys always reference existing edges.
    std::map<std::pair<PlayerId, PlayerId>, Rational> ledger;
    std::vector<PlayerId> arrival_order;
    std::size_t turn = 0;

    GameState() = default;
    explicit GameState(Network network, bool all_joined = false);

    void join(PlayerId i);
    [[nodiscard]] bool has_joined(PlayerId i) const { return joined[i]; }
    [[nodiscard]] std::size_t joined_count() const;

    /// Adds the edge; a positive payment is recorded from payer to payee.
    void add_link(PlayerId payer, PlayerId payee, const Rational& payment = Rational(0));
    /// Removes the edge together with any payments attached to it.
    void remove_link(PlayerId a, PlayerId b);

    [[nodiscard]] Rational payment(PlayerId payer, PlayerId payee) const;
    /// Sum over incident edges of (paid - received).
    [[nodiscard]] Rational net_transfer(PlayerId i) const;

    /// Throws ConsistencyError when a ledger key is not an edge.
    void check_ledger() const;
};

}  // namespace netform
