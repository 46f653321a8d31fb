#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netform/graph.hpp"

namespace netform {

enum class EdgeListFormat { PlainPairs, PipeASRel };

/// Which ingested nodes become majors: the listed external ids, or else the
/// top_m nodes by degree (ties by first appearance).
struct ClassRule {
    std::vector<std::string> major_ids;
    std::size_t top_m = 0;
};

struct LoadedGraph {
    Network net;  ///< node labels are the external ids, in order of first appearance
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges = 0;
};

/// Throws ParseError (with the 1-based line) on malformed input and
/// std::invalid_argument when no edge survives.
LoadedGraph load_edge_list(std::istream& in, EdgeListFormat format, const ClassRule& rule = {});
LoadedGraph load_edge_list(const std::string& path, EdgeListFormat format, const ClassRule& rule = {});

std::vector<int> coreness(const Network& net);
/// Nodes of coreness >= k; k < 1 throws.
std::vector<PlayerId> k_core(const Network& net, int k);

struct CoreSpec {
    std::optional<int> k_level;
    std::vector<PlayerId> nodes;  ///< used when k_level is empty
};

std::vector<PlayerId> resolve_core(const Network& net, const CoreSpec& core);

struct CoreDistance {
    std::vector<Hops> distance;  ///< 0 on the core, nullopt when unreachable
    double mean = 0.0;           ///< over reachable non-core nodes
    std::size_t unreachable = 0;
    bool no_outside_nodes = false;  ///< every node is in the core; mean reported as 0
};

CoreDistance node_core_distance(const Network& net, const CoreSpec& core);

double subgraph_density(const Network& net, const std::vector<PlayerId>& nodes);

struct CorePaths {
    int count = 0;
    bool in_core = false;  ///< node sits in the core; count is its degree
};

/// Maximum number of edge-disjoint paths from i to the core (unit max-flow).
CorePaths disjoint_paths_to_core(const Network& net, const CoreSpec& core, PlayerId i);
/// Mean disjoint-path count over `minors` divided by their mean degree.
double core_ratio(const Network& net, const CoreSpec& core, const std::vector<PlayerId>& minors);

struct CycleStats {
    double mean = 0.0;
    std::size_t pairs = 0;
    std::size_t skipped = 0;  ///< pairs with no cycle through both
};

CycleStats mean_shortest_cycle(const Network& net, const std::vector<PlayerId>& xs, const std::vector<PlayerId>& ys);

/// Unordered adjacent pairs (u,v), both of degree > m, sharing >= m neighbors.
std::uint64_t count_double_star(const Network& net, int m);
/// l = 3: triangles. l = 4: 4-node subsets with at least 5 induced edges
/// (a diamond, possibly completed to K4).
std::uint64_t count_entangled_cycles(const Network& net, int l);

enum class MotifKind { DoubleStar, EntangledCycle };

struct Motif {
    MotifKind kind = MotifKind::DoubleStar;
    int param = 2;
};

std::uint64_t count_motif(const Network& net, const Motif& motif);
std::string to_string(const Motif& motif);
/// Parses "double-star:2", "double_star(2)", "entangled-cycle:3" and the like.
Motif parse_motif(const std::string& text);

struct ConfigurationSample {
    Network net;
    std::size_t stubs = 0;
    std::size_t erased_stubs = 0;
    double erased_fraction = 0.0;
};

/// Erased configuration model. An odd degree sum throws.
ConfigurationSample configuration_model(const std::vector<std::size_t>& degrees, std::uint64_t seed);
std::vector<std::size_t> degree_sequence(const Network& net);

struct MotifReport {
    Motif motif;
    std::uint64_t observed = 0;
    double null_mean = 0.0;
    double null_std = 0.0;  ///< sample standard deviation
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::optional<double> z;  ///< empty when the null has zero spread
    double p_bound = 1.0;
    bool degenerate = false;
    double mean_erased_fraction = 0.0;
    std::vector<std::uint64_t> null_counts;
};

MotifReport null_model_report(const Network& net, const Motif& motif, std::size_t samples, std::uint64_t seed,
                              unsigned jobs = 1);

}  // namespace netform
