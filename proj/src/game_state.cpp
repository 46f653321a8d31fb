#include "netform/game_state.hpp"

#include <algorithm>
#include <string>

#include "netform/errors.hpp"

namespace netform {

GameState::GameState(Network network, bool all_joined)
    : net(std::move(network)), joined(net.size(), all_joined) {
    if (all_joined) {
        for (PlayerId i = 0; i < net.size(); ++i) arrival_order.push_back(i);
    }
}

void GameState::join(PlayerId i) {
    net.check_node(i);
    if (joined[i]) return;
    joined[i] = true;
    arrival_order.push_back(i);
}

std::size_t GameState::joined_count() const {
    return static_cast<std::size_t>(std::count(joined.begin(), joined.end(), true));
}

void GameState::add_link(PlayerId payer, PlayerId payee, const Rational& payment) {
    if (!net.add_edge(payer, payee)) {
        throw StateError("edge (" + std::to_string(payer) + "," + std::to_string(payee) + ") already present");
    }
    if (payment != Rational(0)) ledger[{payer, payee}] = payment;
}

void GameState::remove_link(PlayerId a, PlayerId b) {
    if (!net.remove_edge(a, b)) {
        throw StateError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") not present");
    }
    ledger.erase({a, b});
    ledger.erase({b, a});
}

Rational GameState::payment(PlayerId payer, PlayerId payee) const {
    auto it = ledger.find({payer, payee});
    return it == ledger.end() ? Rational(0) : it->second;
}

Rational GameState::net_transfer(PlayerId i) const {
    Rational total(0);
    for (PlayerId j : net.neighbors(i)) total += payment(i, j) - payment(j, i);
    return total;
}

void GameState::check_ledger() const {
    for (const auto& [key, amount] : ledger) {
        if (!net.has_edge(key.first, key.second)) {
            throw ConsistencyError("payment " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                                   " references a non-edge");
        }
    }
}

}  // namespace netform
