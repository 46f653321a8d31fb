#include "netform/cost.hpp"

#include <stdexcept>
#include <vector>

#include "netform/errors.hpp"

namespace netform {

namespace {

bool target_active(const ActiveMask* active, PlayerId v) {
    return active == nullptr || active->empty() || (*active)[v];
}

void check_active(const ActiveMask* active, PlayerId i) {
    if (!target_active(active, i)) throw std::invalid_argument("node " + std::to_string(i) + " has not joined");
}

// Number of components of the active graph that the BFS from the source did
// not reach.
std::int64_t unreachable_components(const Network& net, const std::vector<int>& dist, const ActiveMask* active) {
    std::vector<std::uint8_t> seen(net.size(), 0);
    std::vector<PlayerId> stack;
    std::int64_t count = 0;
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (dist[v] != kUnreachable || seen[v] || !target_active(active, v)) continue;
        ++count;
        seen[v] = 1;
        stack.push_back(v);
        while (!stack.empty()) {
            const PlayerId u = stack.back();
            stack.pop_back();
            for (PlayerId w : net.neighbors(u)) {
                if (!seen[w] && target_active(active, w)) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return count;
}

}  // namespace

Rational CostParams::penalty_for(std::size_t n) const {
    if (penalty) return *penalty;
    const auto nn = static_cast<std::int64_t>(n);
    return Rational(1000 * nn * nn) * (major_weight + minor_link_cost);
}

void CostParams::validate(std::size_t n) const {
    if (major_weight <= Rational(1)) throw std::invalid_argument("A must exceed 1");
    if (major_link_cost <= Rational(0)) throw std::invalid_argument("c_A must be positive");
    if (minor_link_cost < major_link_cost) throw std::invalid_argument("c_B must be at least c_A");
    if (delta <= Rational(0) || delta > Rational(1)) throw std::invalid_argument("delta must lie in (0,1]");
    if (tau != 0 && tau != 1) throw std::invalid_argument("tau must be 0 or 1");
    if (penalty && n > 0) {
        const auto nn = static_cast<std::int64_t>(n);
        const Rational bound = Rational(nn) * (minor_link_cost + major_weight * Rational(nn * nn));
        if (*penalty <= bound) throw std::invalid_argument("Q must exceed N(c_B + A N^2) = " + bound.str());
    }
}

std::string to_string(CostMode mode) {
    return mode == CostMode::Bare ? "bare" : "reliable";
}

CostBreakdown bare_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active) {
    net.check_node(i);
    check_active(active, i);
    std::vector<int> dist;
    bfs_distances(net, i, dist, active);
    std::int64_t major_sum = 0;
    std::int64_t minor_sum = 0;
    bool unreachable = false;
    for (PlayerId j = 0; j < net.size(); ++j) {
        if (j == i || !target_active(active, j)) continue;
        if (dist[j] == kUnreachable) {
            unreachable = true;
        } else if (net.is_major(j)) {
            major_sum += dist[j];
        } else {
            minor_sum += dist[j];
        }
    }
    CostBreakdown out;
    out.link_cost = Rational(static_cast<std::int64_t>(net.degree(i))) * p.link_cost(net.player_class(i));
    out.major_distance_cost = p.major_weight * Rational(major_sum);
    out.minor_distance_cost = Rational(minor_sum);
    out.penalty = unreachable ? p.penalty_for(net.size()) * Rational(unreachable_components(net, dist, active))
                              : Rational(0);
    out.total = out.link_cost + out.major_distance_cost + out.minor_distance_cost + out.penalty;
    return out;
}

CostBreakdown reliable_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active) {
    net.check_node(i);
    check_active(active, i);
    const bool exact = p.delta == Rational(1);
    DisjointPairSolver solver(net, active);
    solver.set_source(i);

    // Integer sums; the rational weights are applied once at the end.
    std::int64_t major_pair_primary = 0, major_pair_backup = 0, major_plain = 0;
    std::int64_t minor_pair_primary = 0, minor_pair_backup = 0, minor_plain = 0;
    bool unreachable = false;
    bool missing_backup = false;
    for (PlayerId j = 0; j < net.size(); ++j) {
        if (j == i || !target_active(active, j)) continue;
        const int d = solver.distance_to(j);
        if (d == kUnreachable) {
            unreachable = true;
            missing_backup = true;
            continue;
        }
        const bool major = net.is_major(j);
        if (!major && p.tau == 0) {
            minor_plain += d;
            continue;
        }
        const auto pair = solver.pair(j, exact);
        if (!pair) {
            missing_backup = true;
            (major ? major_plain : minor_plain) += d;
            continue;
        }
        if (major) {
            major_pair_primary += pair->primary;
            major_pair_backup += pair->backup;
        } else {
            minor_pair_primary += pair->primary;
            minor_pair_backup += pair->backup;
        }
    }
    const Rational one(1);
    const Rational scale = one / (one + p.delta);
    CostBreakdown out;
    out.link_cost = Rational(static_cast<std::int64_t>(net.degree(i))) * p.link_cost(net.player_class(i));
    out.major_distance_cost =
        p.major_weight * (scale * (Rational(major_pair_primary) + p.delta * Rational(major_pair_backup)) +
                          Rational(major_plain));
    out.minor_distance_cost =
        Rational(p.tau) * scale * (Rational(minor_pair_primary) + p.delta * Rational(minor_pair_backup)) +
        Rational(minor_plain);
    const Rational q = p.penalty_for(net.size());
    out.penalty = (missing_backup ? q : Rational(0)) +
                  (unreachable ? q * Rational(unreachable_components(net, solver.distances(), active)) : Rational(0));
    out.total = out.link_cost + out.major_distance_cost + out.minor_distance_cost + out.penalty;
    return out;
}

CostBreakdown node_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active) {
    return p.mode == CostMode::Bare ? bare_cost(net, p, i, active) : reliable_cost(net, p, i, active);
}

CostBreakdown node_cost(const GameState& state, const CostParams& p, PlayerId i) {
    return node_cost(state.net, p, i, &state.joined);
}

Rational monetary_cost(const GameState& state, const CostParams& p, PlayerId i) {
    state.check_ledger();
    return node_cost(state, p, i).total + state.net_transfer(i);
}

Rational social_cost(const Network& net, const CostParams& p, const ActiveMask* active) {
    Rational total(0);
    for (PlayerId i = 0; i < net.size(); ++i) {
        if (target_active(active, i)) total += node_cost(net, p, i, active).total;
    }
    return total;
}

Rational delta_cost(const Network& net, const CostParams& p, PlayerId i, Edge edge, EdgeAction action,
                    const ActiveMask* active) {
    const bool present = net.has_edge(edge.u, edge.v);
    if (action == EdgeAction::Add && present) throw StateError("cannot add an existing edge");
    if (action == EdgeAction::Remove && !present) throw StateError("cannot remove a missing edge");
    const Rational before = node_cost(net, p, i, active).total;
    Network after = net;
    if (action == EdgeAction::Add) {
        after.add_edge(edge.u, edge.v);
    } else {
        after.remove_edge(edge.u, edge.v);
    }
    return node_cost(after, p, i, active).total - before;
}

Rational line_shortcut_reduction(int k) {
    if (k < 2) throw std::invalid_argument("line_shortcut_reduction requires k >= 2");
    return Rational(static_cast<std::int64_t>(k) * (k - 2) + (k % 2), 4);
}

}  // namespace netform
