#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "netform/cost.hpp"
#include "netform/graph.hpp"
#include "netform/rational.hpp"

namespace netform {

struct Violation {
    Edge edge;
    std::vector<PlayerId> actors;  ///< endpoints that gain from the deviation
    EdgeAction action = EdgeAction::Add;
    Rational delta_u;  ///< cost change of edge.u
    Rational delta_v;  ///< cost change of edge.v
};

struct StabilityReport {
    bool stable = true;
    std::vector<Violation> violations;
};

struct StabilityOptions {
    /// Without transfers: a zero delta counts as a gain (removal with dC = 0,
    /// or an addition where neither side strictly loses).
    bool zero_delta_deviates = true;
    /// With transfers: a combined delta of exactly zero counts as a gain.
    bool zero_combined_deviates = false;
    /// Stop at the first violation (the enumerator only needs the verdict).
    bool first_violation_only = false;
};

StabilityReport is_pairwise_stable(const Network& net, const CostParams& p, const StabilityOptions& opts = {});

/// Combined-benefit reading: a missing link forms when the two deltas sum
/// below zero, an existing link is dropped when the combined removal delta is
/// below zero.
StabilityReport is_pairwise_stable_with_transfers(const Network& net, const CostParams& p,
                                                  const StabilityOptions& opts = {});

bool check_type_a_clique(const Network& net);

struct EnumerationOptions {
    bool transfers = false;
    std::size_t max_players = 7;
    bool force = false;  ///< skip the max_players guard
    unsigned jobs = 1;
    StabilityOptions stability;
};

struct EnumerationResult {
    std::size_t n_major = 0;
    std::size_t n_minor = 0;
    std::uint64_t graphs_checked = 0;
    /// Stable graphs in enumeration order (bit k of the mask is the k-th pair
    /// (u,v), u < v, in lexicographic order).
    std::vector<std::uint64_t> stable_masks;
    std::vector<Rational> stable_costs;
    std::vector<bool> stable_penalized;  ///< social cost includes a Q charge
    std::uint64_t optimum_mask = 0;
    Rational optimum_cost;

    [[nodiscard]] Network graph(std::uint64_t mask) const;
};

/// Checks every labeled graph on n_major + n_minor players (majors first).
/// Throws SizeError above the guard unless opts.force is set.
EnumerationResult enumerate_pairwise_stable(std::size_t n_major, std::size_t n_minor, const CostParams& p,
                                            const EnumerationOptions& opts = {});

/// Major clique; every minor on major 0 when (A+1)/2 <= c, otherwise every
/// minor on every major.
Network optimal_bare_network(const CostParams& p, std::size_t n_major, std::size_t n_minor);

/// Major clique with every minor linked to majors 0 and 1.
Network optimal_reliable_stable_network(const CostParams& p, std::size_t n_major, std::size_t n_minor);

struct PriceReport {
    CostParams params;
    std::size_t n_major = 0;
    std::size_t n_minor = 0;
    bool transfers = false;
    std::uint64_t graphs_checked = 0;
    std::size_t stable_count = 0;
    Rational s_optimal;
    Network optimum;
    std::optional<Rational> s_best_stable;
    std::optional<Rational> s_worst_stable;
    std::optional<Network> best_stable;
    std::optional<Network> worst_stable;
    std::optional<Rational> pos;
    std::optional<Rational> poa;
    /// The worst stable graph carries a Q charge, so PoA only says "at least
    /// Q-sized".
    bool q_dominated = false;
};

PriceReport price_report(const CostParams& p, std::size_t n_major, std::size_t n_minor, bool transfers,
                         const EnumerationOptions& opts = {});

/// Best stable social cost under survivability constraints over the best
/// stable bare cost, for the same constants and player counts.
struct ReliabilityReport {
    PriceReport reliable;
    PriceReport bare;
    std::optional<Rational> por;
    std::optional<bool> por_below_one;
};

ReliabilityReport reliability_report(const CostParams& p, std::size_t n_major, std::size_t n_minor, bool transfers,
                                     const EnumerationOptions& opts = {});

}  // namespace netform
