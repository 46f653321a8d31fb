#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netform/rational.hpp"

namespace netform {

/// Dense node index, 0..N-1 within one Network.
using PlayerId = std::uint32_t;

enum class PlayerClass : std::uint8_t { MajorA, MinorB };

/// Hop count; std::nullopt means the target is unreachable.
using Hops = std::optional<int>;

/// Internal sentinel used by the flat distance arrays.
inline constexpr int kUnreachable = -1;

struct Edge {
    PlayerId u;
    PlayerId v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes an unordered pair so that u < v.
inline Edge make_edge(PlayerId a, PlayerId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Undirected simple graph whose nodes carry a player class.
///
/// Adjacency lists are kept sorted, so iteration order (and therefore every
/// tie-break that walks neighbors) is deterministic.
class Network {
public:
    Network() = default;
    explicit Network(std::vector<PlayerClass> classes);
    Network(std::size_t n_major, std::size_t n_minor);

    [[nodiscard]] std::size_t size() const { return classes_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edge_count_; }

    [[nodiscard]] PlayerClass player_class(PlayerId i) const;
    [[nodiscard]] bool is_major(PlayerId i) const { return player_class(i) == PlayerClass::MajorA; }
    [[nodiscard]] const std::vector<PlayerClass>& classes() const { return classes_; }
    void set_class(PlayerId i, PlayerClass c);

    [[nodiscard]] const std::vector<PlayerId>& neighbors(PlayerId i) const;
    [[nodiscard]] std::size_t degree(PlayerId i) const { return neighbors(i).size(); }
    [[nodiscard]] bool has_edge(PlayerId a, PlayerId b) const;

    /// Returns false when the edge already exists. Self-loops throw.
    bool add_edge(PlayerId a, PlayerId b);
    /// Returns false when the edge is absent.
    bool remove_edge(PlayerId a, PlayerId b);

    /// Edges with u < v in lexicographic order.
    [[nodiscard]] std::vector<Edge> edges() const;

    [[nodiscard]] std::size_t count_class(PlayerClass c) const;

    /// Optional external labels (e.g. AS numbers); empty when not ingested.
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

    void check_node(PlayerId i) const;

    friend bool operator==(const Network& a, const Network& b) {
        return a.classes_ == b.classes_ && a.adjacency_ == b.adjacency_;
    }

private:
    std::vector<PlayerClass> classes_;
    std::vector<std::vector<PlayerId>> adjacency_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
};

/// Lengths of a pair of edge-disjoint paths between two nodes; primary <= backup.
struct PathPair {
    int primary = 0;
    int backup = 0;
    [[nodiscard]] int total() const { return primary + backup; }
    friend bool operator==(const PathPair&, const PathPair&) = default;
};

/// Restricts a query to a subset of nodes (the players that have joined).
/// An empty mask means every node is active.
using ActiveMask = std::vector<bool>;

Hops shortest_distance(const Network& net, PlayerId i, PlayerId j);

std::vector<Hops> all_distances_from(const Network& net, PlayerId i);

/// Breadth-first distances into a caller-owned buffer (kUnreachable for
/// unreached nodes). Inactive nodes are never entered.
void bfs_distances(const Network& net, PlayerId source, std::vector<int>& dist, const ActiveMask* active = nullptr);

/// Edge-disjoint path pair between i and j.
///
/// delta == 1: the pair with minimum total length (Suurballe on unit weights).
/// delta < 1: the shortest path with the lexicographically smallest node
/// sequence (oriented from the smaller id to the larger), then the shortest
/// path avoiding its edges; when that second search fails but a disjoint pair
/// exists the exact minimum-total pair is returned instead.
std::optional<PathPair> min_disjoint_pair(const Network& net, PlayerId i, PlayerId j, const Rational& delta);

/// Brute-force pair minimizing primary + delta * backup over every simple
/// primary path (test oracle). Throws std::length_error above 12 nodes.
std::optional<PathPair> exact_min_pair_oracle(const Network& net, PlayerId i, PlayerId j, const Rational& delta);

/// Length of the shortest cycle through both endpoints.
std::optional<int> shortest_cycle_through(const Network& net, PlayerId i, PlayerId j);

std::vector<PlayerId> connected_component(const Network& net, PlayerId i);

/// graph6 encoding of the edge set (classes are not part of the format).
std::string to_graph6(const Network& net);
/// Builds a network from graph6 text; every node gets class `fill`.
Network from_graph6(std::string_view text, PlayerClass fill = PlayerClass::MinorB);
/// One character per node: 'A' for major, 'B' for minor.
std::string class_string(const Network& net);
void apply_class_string(Network& net, std::string_view classes);

/// Reusable workspace for repeated disjoint-pair queries from one source.
///
/// Cost evaluation asks for a pair from one node to every other node; this
/// keeps the source BFS and the scratch buffers alive between queries.
class DisjointPairSolver {
public:
    DisjointPairSolver(const Network& net, const ActiveMask* active = nullptr);

    void set_source(PlayerId source);
    [[nodiscard]] PlayerId source() const { return source_; }
    [[nodiscard]] int distance_to(PlayerId target) const { return dist_[target]; }
    [[nodiscard]] const std::vector<int>& distances() const { return dist_; }

    /// Minimum-total pair from the current source.
    std::optional<PathPair> exact(PlayerId target);
    /// Shortest-then-disjoint heuristic with exact fallback.
    std::optional<PathPair> heuristic(PlayerId target);
    std::optional<PathPair> pair(PlayerId target, bool exact_mode) {
        return exact_mode ? exact(target) : heuristic(target);
    }

private:
    bool reachable(PlayerId v) const;
    std::vector<PlayerId> lexicographic_shortest_path(PlayerId from, PlayerId to);
    int bfs_avoiding_path(PlayerId from, PlayerId to, const std::vector<PlayerId>& path);

    const Network& net_;
    const ActiveMask* active_;
    PlayerId source_ = 0;
    std::vector<int> dist_;
    std::vector<int> scratch_dist_;
    std::vector<int> residual_dist_;
    std::vector<PlayerId> parent_;
    std::vector<PlayerId> queue_;
    std::vector<std::uint8_t> mark_;
};

}  // namespace netform
