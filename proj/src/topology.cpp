#include "netform/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "netform/errors.hpp"
#include "netform/random.hpp"

namespace netform {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool has_space(const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch) != 0; });
}

std::size_t common_neighbors(const std::vector<PlayerId>& a, const std::vector<PlayerId>& b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::vector<PlayerId> common_list(const std::vector<PlayerId>& a, const std::vector<PlayerId>& b) {
    std::vector<PlayerId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::string normalize_name(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '-' || ch == '_' || ch == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in, EdgeListFormat format, const ClassRule& rule) {
    std::vector<std::string> ids;
    std::unordered_map<std::string, PlayerId> index;
    std::vector<std::pair<PlayerId, PlayerId>> edges;
    std::set<std::pair<PlayerId, PlayerId>> seen;
    LoadedGraph out;

    auto id_of = [&](const std::string& label) {
        auto [it, fresh] = index.emplace(label, static_cast<PlayerId>(ids.size()));
        if (fresh) ids.push_back(label);
        return it->second;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        std::string a;
        std::string b;
        if (format == EdgeListFormat::PlainPairs) {
            std::istringstream fields(line);
            std::string extra;
            if (!(fields >> a >> b) || (fields >> extra)) throw ParseError("expected two node ids", line_no);
        } else {
            const auto p1 = line.find('|');
            if (p1 == std::string::npos) throw ParseError("expected a|b|rel", line_no);
            const auto p2 = line.find('|', p1 + 1);
            a = trim(line.substr(0, p1));
            b = trim(line.substr(p1 + 1, p2 == std::string::npos ? std::string::npos : p2 - p1 - 1));
            if (a.empty() || b.empty() || has_space(a) || has_space(b)) throw ParseError("bad node id", line_no);
        }

        const PlayerId u = id_of(a);
        const PlayerId v = id_of(b);
        if (u == v) {
            ++out.self_loops_dropped;
            continue;
        }
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
            ++out.duplicate_edges;
            continue;
        }
        edges.emplace_back(u, v);
    }
    if (edges.empty()) throw std::invalid_argument("edge list contains no edges");

    std::vector<std::size_t> degree(ids.size(), 0);
    for (const auto& [u, v] : edges) {
        ++degree[u];
        ++degree[v];
    }
    std::vector<PlayerClass> classes(ids.size(), PlayerClass::MinorB);
    if (!rule.major_ids.empty()) {
        for (const auto& label : rule.major_ids) {
            auto it = index.find(label);
            if (it != index.end()) classes[it->second] = PlayerClass::MajorA;
        }
    } else if (rule.top_m > 0) {
        std::vector<PlayerId> order(ids.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](PlayerId x, PlayerId y) { return degree[x] > degree[y]; });
        for (std::size_t k = 0; k < std::min(rule.top_m, order.size()); ++k) classes[order[k]] = PlayerClass::MajorA;
    }

    out.net = Network(classes);
    for (const auto& [u, v] : edges) out.net.add_edge(u, v);
    out.net.set_labels(std::move(ids));
    return out;
}

LoadedGraph load_edge_list(const std::string& path, EdgeListFormat format, const ClassRule& rule) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return load_edge_list(in, format, rule);
}

// Bucket peeling in O(n + m).
std::vector<int> coreness(const Network& net) {
    const std::size_t n = net.size();
    std::vector<int> deg(n);
    int max_deg = 0;
    for (PlayerId v = 0; v < n; ++v) {
        deg[v] = static_cast<int>(net.degree(v));
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(static_cast<std::size_t>(max_deg) + 1, 0);
    for (int d : deg) ++bin[static_cast<std::size_t>(d)];
    std::size_t start = 0;
    for (auto& b : bin) {
        const std::size_t count = b;
        b = start;
        start += count;
    }
    std::vector<PlayerId> vert(n);
    std::vector<std::size_t> pos(n);
    for (PlayerId v = 0; v < n; ++v) {
        pos[v] = bin[static_cast<std::size_t>(deg[v])]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = bin.size() - 1; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (std::size_t k = 0; k < n; ++k) {
        const PlayerId v = vert[k];
        for (PlayerId u : net.neighbors(v)) {
            if (deg[u] > deg[v]) {
                const auto du = static_cast<std::size_t>(deg[u]);
                const std::size_t pu = pos[u];
                const std::size_t pw = bin[du];
                const PlayerId w = vert[pw];
                if (u != w) {
                    std::swap(vert[pu], vert[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return deg;
}

std::vector<PlayerId> k_core(const Network& net, int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const auto core = coreness(net);
    std::vector<PlayerId> out;
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (core[v] >= k) out.push_back(v);
    }
    return out;
}

std::vector<PlayerId> resolve_core(const Network& net, const CoreSpec& core) {
    std::vector<PlayerId> nodes;
    if (core.k_level) {
        nodes = k_core(net, *core.k_level);
    } else {
        nodes = core.nodes;
        for (PlayerId v : nodes) net.check_node(v);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    }
    if (nodes.empty()) throw std::invalid_argument("the core is empty");
    return nodes;
}

CoreDistance node_core_distance(const Network& net, const CoreSpec& core) {
    const auto members = resolve_core(net, core);
    CoreDistance out;
    out.distance.assign(net.size(), std::nullopt);
    std::deque<PlayerId> queue;
    for (PlayerId v : members) {
        out.distance[v] = 0;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        const PlayerId u = queue.front();
        queue.pop_front();
        for (PlayerId v : net.neighbors(u)) {
            if (out.distance[v]) continue;
            out.distance[v] = *out.distance[u] + 1;
            queue.push_back(v);
        }
    }
    double sum = 0.0;
    std::size_t counted = 0;
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (!out.distance[v]) {
            ++out.unreachable;
        } else if (*out.distance[v] > 0) {
            sum += *out.distance[v];
            ++counted;
        }
    }
    out.no_outside_nodes = members.size() == net.size();
    out.mean = counted > 0 ? sum / static_cast<double>(counted) : 0.0;
    return out;
}

double subgraph_density(const Network& net, const std::vector<PlayerId>& nodes) {
    std::vector<PlayerId> set = nodes;
    for (PlayerId v : set) net.check_node(v);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() < 2) throw std::invalid_argument("density needs at least two nodes");
    std::size_t inside = 0;
    for (PlayerId v : set) {
        for (PlayerId w : net.neighbors(v)) {
            if (v < w && std::binary_search(set.begin(), set.end(), w)) ++inside;
        }
    }
    const double pairs = static_cast<double>(set.size()) * static_cast<double>(set.size() - 1) / 2.0;
    return static_cast<double>(inside) / pairs;
}

namespace {

// Unit-capacity undirected max-flow from `source` into the set `sink`,
// by repeated BFS augmentation. flow[e] is oriented from edges[e].u to
// edges[e].v and stays in [-1, 1].
int unit_flow_to_set(const Network& net, PlayerId source, const std::vector<bool>& sink) {
    const auto edges = net.edges();
    std::vector<std::vector<std::pair<PlayerId, std::size_t>>> adj(net.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        adj[edges[e].u].push_back({edges[e].v, e});
        adj[edges[e].v].push_back({edges[e].u, e});
    }
    std::vector<int> flow(edges.size(), 0);
    auto residual = [&](PlayerId from, std::size_t e) { return from == edges[e].u ? 1 - flow[e] : 1 + flow[e]; };

    int total = 0;
    const std::size_t none = edges.size();
    while (true) {
        std::vector<std::size_t> via(net.size(), none);
        std::vector<bool> seen(net.size(), false);
        std::deque<PlayerId> queue{source};
        seen[source] = true;
        std::optional<PlayerId> reached;
        while (!queue.empty() && !reached) {
            const PlayerId u = queue.front();
            queue.pop_front();
            for (const auto& [v, e] : adj[u]) {
                if (seen[v] || residual(u, e) <= 0) continue;
                seen[v] = true;
                via[v] = e;
                if (sink[v]) {
                    reached = v;
                    break;
                }
                queue.push_back(v);
            }
        }
        if (!reached) return total;
        for (PlayerId v = *reached; v != source;) {
            const std::size_t e = via[v];
            const PlayerId u = edges[e].u == v ? edges[e].v : edges[e].u;
            flow[e] += u == edges[e].u ? 1 : -1;
            v = u;
        }
        ++total;
    }
}

}  // namespace

CorePaths disjoint_paths_to_core(const Network& net, const CoreSpec& core, PlayerId i) {
    net.check_node(i);
    const auto members = resolve_core(net, core);
    CorePaths out;
    if (std::binary_search(members.begin(), members.end(), i)) {
        out.in_core = true;
        out.count = static_cast<int>(net.degree(i));
        return out;
    }
    std::vector<bool> sink(net.size(), false);
    for (PlayerId v : members) sink[v] = true;
    out.count = unit_flow_to_set(net, i, sink);
    return out;
}

double core_ratio(const Network& net, const CoreSpec& core, const std::vector<PlayerId>& minors) {
    if (minors.empty()) throw std::invalid_argument("core_ratio needs at least one node");
    double paths = 0.0;
    double degree = 0.0;
    for (PlayerId v : minors) {
        paths += disjoint_paths_to_core(net, core, v).count;
        degree += static_cast<double>(net.degree(v));
    }
    if (degree == 0.0) return 0.0;
    return paths / degree;
}

CycleStats mean_shortest_cycle(const Network& net, const std::vector<PlayerId>& xs, const std::vector<PlayerId>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("mean_shortest_cycle needs two non-empty sets");
    CycleStats out;
    double sum = 0.0;
    for (PlayerId x : xs) {
        for (PlayerId y : ys) {
            if (x == y) continue;
            const auto len = shortest_cycle_through(net, x, y);
            if (!len) {
                ++out.skipped;
                continue;
            }
            sum += *len;
            ++out.pairs;
        }
    }
    out.mean = out.pairs > 0 ? sum / static_cast<double>(out.pairs) : 0.0;
    return out;
}

std::uint64_t count_double_star(const Network& net, int m) {
    if (m < 1) throw std::invalid_argument("double-star threshold m must be at least 1");
    const auto need = static_cast<std::size_t>(m);
    std::uint64_t count = 0;
    for (PlayerId u = 0; u < net.size(); ++u) {
        if (net.degree(u) <= need) continue;
        for (PlayerId v : net.neighbors(u)) {
            if (v <= u || net.degree(v) <= need) continue;
            if (common_neighbors(net.neighbors(u), net.neighbors(v)) >= need) ++count;
        }
    }
    return count;
}

// Each 4-subset with >= 5 induced edges is seen once per edge whose two
// endpoints share both remaining nodes: once for a diamond (its chord), six
// times for K4.
std::uint64_t count_entangled_cycles(const Network& net, int l) {
    if (l != 3 && l != 4) throw std::invalid_argument("entangled cycle length must be 3 or 4");
    std::uint64_t triangles3 = 0;
    std::uint64_t chord_pairs = 0;
    std::uint64_t k4_hits = 0;
    for (PlayerId u = 0; u < net.size(); ++u) {
        for (PlayerId v : net.neighbors(u)) {
            if (v <= u) continue;
            if (l == 3) {
                triangles3 += common_neighbors(net.neighbors(u), net.neighbors(v));
                continue;
            }
            const auto common = common_list(net.neighbors(u), net.neighbors(v));
            for (std::size_t a = 0; a < common.size(); ++a) {
                for (std::size_t b = a + 1; b < common.size(); ++b) {
                    ++chord_pairs;
                    if (net.has_edge(common[a], common[b])) ++k4_hits;
                }
            }
        }
    }
    if (l == 3) return triangles3 / 3;
    return chord_pairs - 5 * (k4_hits / 6);
}

std::uint64_t count_motif(const Network& net, const Motif& motif) {
    return motif.kind == MotifKind::DoubleStar ? count_double_star(net, motif.param)
                                               : count_entangled_cycles(net, motif.param);
}

std::string to_string(const Motif& motif) {
    return (motif.kind == MotifKind::DoubleStar ? "double_star(" : "entangled_cycle(") + std::to_string(motif.param) +
           ")";
}

Motif parse_motif(const std::string& text) {
    std::string name = text;
    std::optional<int> param;
    const auto cut = text.find_first_of(":(=");
    if (cut != std::string::npos) {
        name = text.substr(0, cut);
        std::string rest = text.substr(cut + 1);
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        try {
            std::size_t used = 0;
            param = std::stoi(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(rest);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad motif parameter in '" + text + "'");
        }
    }
    const std::string key = normalize_name(name);
    Motif out;
    if (key == "doublestar") {
        out.kind = MotifKind::DoubleStar;
        out.param = param.value_or(2);
    } else if (key == "entangledcycle" || key == "entangledcycles") {
        out.kind = MotifKind::EntangledCycle;
        out.param = param.value_or(3);
    } else if (key == "triangle") {
        out.kind = MotifKind::EntangledCycle;
        out.param = 3;
    } else {
        throw std::invalid_argument("unknown motif '" + text + "'");
    }
    if (out.kind == MotifKind::DoubleStar && out.param < 1) throw std::invalid_argument("double-star m must be >= 1");
    if (out.kind == MotifKind::EntangledCycle && out.param != 3 && out.param != 4) {
        throw std::invalid_argument("entangled cycle length must be 3 or 4");
    }
    return out;
}

ConfigurationSample configuration_model(const std::vector<std::size_t>& degrees, std::uint64_t seed) {
    std::vector<PlayerId> stubs;
    for (PlayerId v = 0; v < degrees.size(); ++v) stubs.insert(stubs.end(), degrees[v], v);
    if (stubs.size() % 2 != 0) throw std::invalid_argument("degree sum must be even");

    Rng rng(seed);
    rng.shuffle(stubs);
    ConfigurationSample out;
    out.net = Network(std::vector<PlayerClass>(degrees.size(), PlayerClass::MinorB));
    out.stubs = stubs.size();
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        const PlayerId a = stubs[k];
        const PlayerId b = stubs[k + 1];
        if (a == b || !out.net.add_edge(a, b)) out.erased_stubs += 2;
    }
    out.erased_fraction = out.stubs > 0 ? static_cast<double>(out.erased_stubs) / static_cast<double>(out.stubs) : 0.0;
    return out;
}

std::vector<std::size_t> degree_sequence(const Network& net) {
    std::vector<std::size_t> out(net.size());
    for (PlayerId v = 0; v < net.size(); ++v) out[v] = net.degree(v);
    return out;
}

MotifReport null_model_report(const Network& net, const Motif& motif, std::size_t samples, std::uint64_t seed,
                              unsigned jobs) {
    if (samples < 2) throw std::invalid_argument("the null model needs at least two samples");
    MotifReport out;
    out.motif = motif;
    out.samples = samples;
    out.seed = seed;
    out.observed = count_motif(net, motif);

    const auto degrees = degree_sequence(net);
    out.null_counts.assign(samples, 0);
    std::vector<double> erased(samples, 0.0);
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto sample = configuration_model(degrees, derive_seed(seed, k));
            out.null_counts[k] = count_motif(sample.net, motif);
            erased[k] = sample.erased_fraction;
        }
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(samples)));
    if (workers == 1) {
        run(0, samples);
    } else {
        std::vector<std::thread> pool;
        const std::size_t step = (samples + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = std::min(samples, step * t);
            pool.emplace_back(run, begin, std::min(samples, begin + step));
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    for (auto c : out.null_counts) sum += static_cast<double>(c);
    out.null_mean = sum / static_cast<double>(samples);
    double ss = 0.0;
    for (auto c : out.null_counts) ss += (static_cast<double>(c) - out.null_mean) * (static_cast<double>(c) - out.null_mean);
    out.null_std = std::sqrt(ss / static_cast<double>(samples - 1));
    out.mean_erased_fraction = std::accumulate(erased.begin(), erased.end(), 0.0) / static_cast<double>(samples);

    out.degenerate = std::all_of(out.null_counts.begin(), out.null_counts.end(),
                                 [&](std::uint64_t c) { return c == out.null_counts.front(); });
    if (!out.degenerate) {
        out.z = (static_cast<double>(out.observed) - out.null_mean) / out.null_std;
        if (*out.z > 0) out.p_bound = std::min(1.0, 1.0 / (*out.z * *out.z));
    }
    return out;
}

}  // namespace netform
