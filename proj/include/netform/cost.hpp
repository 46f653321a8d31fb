#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "netform/game_state.hpp"
#include "netform/graph.hpp"
#include "netform/rational.hpp"

namespace netform {

enum class CostMode { Bare, Reliable };

/// Model constants shared by every cost function.
struct CostParams {
    Rational major_weight{3};     ///< A > 1, weight of distances to major players
    Rational major_link_cost{2};  ///< c_A
    Rational minor_link_cost{2};  ///< c_B >= c_A
    Rational delta{1};            ///< backup-path weight in (0,1]
    int tau = 1;                  ///< 1: backups to everyone, 0: backups to majors only
    std::optional<Rational> penalty;  ///< Q; defaults to 1000 * N^2 * (A + c_B)
    CostMode mode = CostMode::Bare;

    /// c = (c_A + c_B) / 2
    [[nodiscard]] Rational mean_link_cost() const { return (major_link_cost + minor_link_cost) / Rational(2); }
    [[nodiscard]] Rational link_cost(PlayerClass c) const {
        return c == PlayerClass::MajorA ? major_link_cost : minor_link_cost;
    }
    /// Q for an instance with n players.
    [[nodiscard]] Rational penalty_for(std::size_t n) const;
    /// Throws std::invalid_argument on out-of-range constants.
    void validate(std::size_t n = 0) const;
};

struct CostBreakdown {
    Rational link_cost;
    Rational major_distance_cost;
    Rational minor_distance_cost;
    Rational penalty;
    Rational total;
};

enum class EdgeAction { Add, Remove };

/// Bare cost: deg(i) c_i + A * sum_{majors} d + sum_{minors} d. Targets that
/// are unreachable are left out of the sums; Q is charged once per component
/// the node cannot reach, so one cut costs a single Q.
/// `active` restricts both the graph and the target set.
CostBreakdown bare_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active = nullptr);

/// Survivability-constrained cost with the (d, d') pair from min_disjoint_pair.
///
/// A target whose required backup path is missing contributes its primary
/// distance only and costs Q; unreachable targets are left out and cost
/// another Q per unreachable component, so a disconnected node (2Q) is worse
/// off than a connected node without backups (Q).
CostBreakdown reliable_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active = nullptr);

/// Dispatches on p.mode.
CostBreakdown node_cost(const Network& net, const CostParams& p, PlayerId i, const ActiveMask* active = nullptr);
CostBreakdown node_cost(const GameState& state, const CostParams& p, PlayerId i);

/// node_cost plus paid minus received transfers.
Rational monetary_cost(const GameState& state, const CostParams& p, PlayerId i);

Rational social_cost(const Network& net, const CostParams& p, const ActiveMask* active = nullptr);

/// C(i, E after) - C(i, E before). Throws StateError when Add targets an
/// existing edge or Remove a missing one.
Rational delta_cost(const Network& net, const CostParams& p, PlayerId i, Edge edge, EdgeAction action,
                    const ActiveMask* active = nullptr);

/// Reduction of one end's distance sum when the two ends of a k-node line are
/// joined: (k(k-2) + (k mod 2)) / 4.
Rational line_shortcut_reduction(int k);

std::string to_string(CostMode mode);

}  // namespace netform
