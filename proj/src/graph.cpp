#include "netform/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace netform {

Network::Network(std::vector<PlayerClass> classes)
    : classes_(std::move(classes)), adjacency_(classes_.size()) {}

Network::Network(std::size_t n_major, std::size_t n_minor) : adjacency_(n_major + n_minor) {
    classes_.assign(n_major, PlayerClass::MajorA);
    classes_.resize(n_major + n_minor, PlayerClass::MinorB);
}

void Network::check_node(PlayerId i) const {
    if (i >= classes_.size()) {
        throw std::invalid_argument("node id " + std::to_string(i) + " out of range (N=" +
                                    std::to_string(classes_.size()) + ")");
    }
}

PlayerClass Network::player_class(PlayerId i) const {
    check_node(i);
    return classes_[i];
}

void Network::set_class(PlayerId i, PlayerClass c) {
    check_node(i);
    classes_[i] = c;
}

const std::vector<PlayerId>& Network::neighbors(PlayerId i) const {
    check_node(i);
    return adjacency_[i];
}

bool Network::has_edge(PlayerId a, PlayerId b) const {
    check_node(a);
    check_node(b);
    const auto& small = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
    const PlayerId other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
    return std::binary_search(small.begin(), small.end(), other);
}

bool Network::add_edge(PlayerId a, PlayerId b) {
    check_node(a);
    check_node(b);
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    auto& la = adjacency_[a];
    auto pos = std::lower_bound(la.begin(), la.end(), b);
    if (pos != la.end() && *pos == b) return false;
    la.insert(pos, b);
    auto& lb = adjacency_[b];
    lb.insert(std::lower_bound(lb.begin(), lb.end(), a), a);
    ++edge_count_;
    return true;
}

bool Network::remove_edge(PlayerId a, PlayerId b) {
    check_node(a);
    check_node(b);
    auto& la = adjacency_[a];
    auto pos = std::lower_bound(la.begin(), la.end(), b);
    if (pos == la.end() || *pos != b) return false;
    la.erase(pos);
    auto& lb = adjacency_[b];
    lb.erase(std::lower_bound(lb.begin(), lb.end(), a));
    --edge_count_;
    return true;
}

std::vector<Edge> Network::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (PlayerId u = 0; u < adjacency_.size(); ++u) {
        for (PlayerId v : adjacency_[u]) {
            if (u < v) out.push_back({u, v});
        }
    }
    return out;
}

std::size_t Network::count_class(PlayerClass c) const {
    return static_cast<std::size_t>(std::count(classes_.begin(), classes_.end(), c));
}

void Network::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != classes_.size()) {
        throw std::invalid_argument("label count does not match node count");
    }
    labels_ = std::move(labels);
}

namespace {

bool is_active(const ActiveMask* active, PlayerId v) {
    return active == nullptr || active->empty() || (*active)[v];
}

}  // namespace

void bfs_distances(const Network& net, PlayerId source, std::vector<int>& dist, const ActiveMask* active) {
    net.check_node(source);
    dist.assign(net.size(), kUnreachable);
    std::vector<PlayerId> queue;
    queue.reserve(net.size());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const PlayerId u = queue[head];
        for (PlayerId v : net.neighbors(u)) {
            if (dist[v] == kUnreachable && is_active(active, v)) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

Hops shortest_distance(const Network& net, PlayerId i, PlayerId j) {
    net.check_node(j);
    std::vector<int> dist;
    bfs_distances(net, i, dist);
    if (dist[j] == kUnreachable) return std::nullopt;
    return dist[j];
}

std::vector<Hops> all_distances_from(const Network& net, PlayerId i) {
    std::vector<int> dist;
    bfs_distances(net, i, dist);
    std::vector<Hops> out(dist.size());
    for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] != kUnreachable) out[k] = dist[k];
    }
    return out;
}

DisjointPairSolver::DisjointPairSolver(const Network& net, const ActiveMask* active)
    : net_(net), active_(active) {}

bool DisjointPairSolver::reachable(PlayerId v) const {
    return dist_[v] != kUnreachable;
}

void DisjointPairSolver::set_source(PlayerId source) {
    net_.check_node(source);
    source_ = source;
    bfs_distances(net_, source, dist_, active_);
}

std::optional<PathPair> DisjointPairSolver::exact(PlayerId target) {
    net_.check_node(target);
    if (target == source_) throw std::invalid_argument("disjoint pair requires distinct endpoints");
    if (!reachable(target)) return std::nullopt;
    const std::size_t n = net_.size();

    // Primary path: walk back from the target through the smallest-id
    // predecessor. next_on_path[a] == b marks the arc a->b.
    constexpr PlayerId kNone = static_cast<PlayerId>(-1);
    std::vector<PlayerId> next_on_path(n, kNone);
    for (PlayerId cur = target; cur != source_;) {
        PlayerId pred = kNone;
        for (PlayerId v : net_.neighbors(cur)) {
            if (dist_[v] == dist_[cur] - 1 && is_active(active_, v)) {
                pred = v;
                break;
            }
        }
        next_on_path[pred] = cur;
        cur = pred;
    }

    // Residual search with reduced costs 1 + dist[u] - dist[v] (in {0,1,2});
    // reversed primary arcs have reduced cost 0. Bucketed Dijkstra.
    residual_dist_.assign(n, kUnreachable);
    parent_.assign(n, kNone);
    std::vector<std::vector<PlayerId>> buckets(2 * n + 3);
    residual_dist_[source_] = 0;
    buckets[0].push_back(source_);
    for (std::size_t level = 0; level < buckets.size(); ++level) {
        for (std::size_t idx = 0; idx < buckets[level].size(); ++idx) {
            const PlayerId u = buckets[level][idx];
            if (residual_dist_[u] != static_cast<int>(level)) continue;
            if (u == target) break;
            for (PlayerId v : net_.neighbors(u)) {
                if (!reachable(v) || next_on_path[u] == v) continue;
                const int w = next_on_path[v] == u ? 0 : 1 + dist_[u] - dist_[v];
                const int nd = static_cast<int>(level) + w;
                if (residual_dist_[v] == kUnreachable || nd < residual_dist_[v]) {
                    residual_dist_[v] = nd;
                    parent_[v] = u;
                    buckets[static_cast<std::size_t>(nd)].push_back(v);
                }
            }
        }
        if (residual_dist_[target] != kUnreachable && static_cast<int>(level) >= residual_dist_[target]) break;
    }
    if (residual_dist_[target] == kUnreachable) return std::nullopt;

    // Combine: primary arcs that the second path traverses backwards cancel.
    std::vector<std::vector<PlayerId>> flow(n);
    std::vector<std::pair<PlayerId, PlayerId>> second;
    for (PlayerId cur = target; cur != source_; cur = parent_[cur]) second.emplace_back(parent_[cur], cur);
    std::vector<std::pair<PlayerId, PlayerId>> cancelled;
    for (auto [a, b] : second) {
        if (next_on_path[b] == a) {
            cancelled.emplace_back(b, a);
        } else {
            flow[a].push_back(b);
        }
    }
    for (PlayerId a = 0; a < n; ++a) {
        const PlayerId b = next_on_path[a];
        if (b == kNone) continue;
        if (std::find(cancelled.begin(), cancelled.end(), std::make_pair(a, b)) == cancelled.end()) {
            flow[a].push_back(b);
        }
    }
    for (auto& out : flow) std::sort(out.begin(), out.end(), std::greater<>());

    int lengths[2] = {0, 0};
    for (int& len : lengths) {
        PlayerId cur = source_;
        while (cur != target) {
            const PlayerId nxt = flow[cur].back();
            flow[cur].pop_back();
            cur = nxt;
            ++len;
        }
    }
    return PathPair{std::min(lengths[0], lengths[1]), std::max(lengths[0], lengths[1])};
}

std::vector<PlayerId> DisjointPairSolver::lexicographic_shortest_path(PlayerId from, PlayerId to) {
    const std::vector<int>* dist_to = &dist_;
    if (to != source_) {
        bfs_distances(net_, to, scratch_dist_, active_);
        dist_to = &scratch_dist_;
    }
    std::vector<PlayerId> path{from};
    PlayerId cur = from;
    while (cur != to) {
        for (PlayerId v : net_.neighbors(cur)) {
            if ((*dist_to)[v] == (*dist_to)[cur] - 1 && (*dist_to)[v] != kUnreachable) {
                cur = v;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

int DisjointPairSolver::bfs_avoiding_path(PlayerId from, PlayerId to, const std::vector<PlayerId>& path) {
    const std::size_t n = net_.size();
    std::vector<int> pos(n, -1);
    for (std::size_t k = 0; k < path.size(); ++k) pos[path[k]] = static_cast<int>(k);
    scratch_dist_.assign(n, kUnreachable);
    queue_.clear();
    scratch_dist_[from] = 0;
    queue_.push_back(from);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const PlayerId u = queue_[head];
        if (u == to) return scratch_dist_[u];
        for (PlayerId v : net_.neighbors(u)) {
            if (scratch_dist_[v] != kUnreachable || !is_active(active_, v)) continue;
            if (pos[u] >= 0 && pos[v] >= 0 && (pos[u] - pos[v] == 1 || pos[v] - pos[u] == 1)) continue;
            scratch_dist_[v] = scratch_dist_[u] + 1;
            queue_.push_back(v);
        }
    }
    return kUnreachable;
}

std::optional<PathPair> DisjointPairSolver::heuristic(PlayerId target) {
    net_.check_node(target);
    if (target == source_) throw std::invalid_argument("disjoint pair requires distinct endpoints");
    if (!reachable(target)) return std::nullopt;
    const PlayerId from = std::min(source_, target);
    const PlayerId to = std::max(source_, target);
    const std::vector<PlayerId> path = lexicographic_shortest_path(from, to);
    const int backup = bfs_avoiding_path(from, to, path);
    if (backup != kUnreachable) return PathPair{static_cast<int>(path.size()) - 1, backup};
    return exact(target);
}

std::optional<PathPair> min_disjoint_pair(const Network& net, PlayerId i, PlayerId j, const Rational& delta) {
    net.check_node(i);
    net.check_node(j);
    if (i == j) throw std::invalid_argument("min_disjoint_pair requires distinct endpoints");
    if (delta <= Rational(0) || delta > Rational(1)) throw std::invalid_argument("delta must lie in (0,1]");
    DisjointPairSolver solver(net);
    solver.set_source(i);
    return solver.pair(j, delta == Rational(1));
}

std::optional<PathPair> exact_min_pair_oracle(const Network& net, PlayerId i, PlayerId j, const Rational& delta) {
    if (net.size() > 12) throw std::length_error("exact_min_pair_oracle is limited to 12 nodes");
    net.check_node(i);
    net.check_node(j);
    if (i == j) throw std::invalid_argument("exact_min_pair_oracle requires distinct endpoints");

    std::optional<PathPair> best;
    Rational best_value;
    std::vector<PlayerId> path{i};
    std::vector<bool> on_path(net.size(), false);
    on_path[i] = true;

    auto backup_length = [&]() {
        // Plain BFS over edges not used by `path`.
        std::vector<int> dist(net.size(), kUnreachable);
        std::vector<PlayerId> queue{i};
        dist[i] = 0;
        auto used = [&](PlayerId a, PlayerId b) {
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                if ((path[k] == a && path[k + 1] == b) || (path[k] == b && path[k + 1] == a)) return true;
            }
            return false;
        };
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const PlayerId u = queue[head];
            for (PlayerId v : net.neighbors(u)) {
                if (dist[v] == kUnreachable && !used(u, v)) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        return dist[j];
    };

    auto dfs = [&](auto&& self, PlayerId u) -> void {
        if (u == j) {
            const int backup = backup_length();
            if (backup == kUnreachable) return;
            const int primary = static_cast<int>(path.size()) - 1;
            const Rational value = Rational(primary) + delta * Rational(backup);
            if (!best || value < best_value) {
                best_value = value;
                best = PathPair{std::min(primary, backup), std::max(primary, backup)};
            }
            return;
        }
        for (PlayerId v : net.neighbors(u)) {
            if (on_path[v]) continue;
            on_path[v] = true;
            path.push_back(v);
            self(self, v);
            path.pop_back();
            on_path[v] = false;
        }
    };
    dfs(dfs, i);
    return best;
}

std::optional<int> shortest_cycle_through(const Network& net, PlayerId i, PlayerId j) {
    auto pair = min_disjoint_pair(net, i, j, Rational(1));
    if (!pair) return std::nullopt;
    return pair->total();
}

std::vector<PlayerId> connected_component(const Network& net, PlayerId i) {
    std::vector<int> dist;
    bfs_distances(net, i, dist);
    std::vector<PlayerId> out;
    for (PlayerId v = 0; v < dist.size(); ++v) {
        if (dist[v] != kUnreachable) out.push_back(v);
    }
    return out;
}

}  // namespace netform

namespace netform {

std::string to_graph6(const Network& net) {
    const std::size_t n = net.size();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(63 + n));
    } else if (n <= 258047) {
        out.push_back(126);
        for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
    } else {
        throw std::length_error("graph6 supports at most 258047 nodes here");
    }
    int bits = 0;
    int value = 0;
    for (PlayerId v = 1; v < n; ++v) {
        for (PlayerId u = 0; u < v; ++u) {
            value = (value << 1) | (net.has_edge(u, v) ? 1 : 0);
            if (++bits == 6) {
                out.push_back(static_cast<char>(63 + value));
                bits = value = 0;
            }
        }
    }
    if (bits > 0) out.push_back(static_cast<char>(63 + (value << (6 - bits))));
    return out;
}

Network from_graph6(std::string_view text, PlayerClass fill) {
    auto byte = [&](std::size_t k) {
        if (k >= text.size()) throw std::invalid_argument("graph6 text is truncated");
        const int c = static_cast<unsigned char>(text[k]) - 63;
        if (c < 0 || c > 63) throw std::invalid_argument("graph6 text has an invalid character");
        return c;
    };
    std::size_t pos = 0;
    std::size_t n = 0;
    if (!text.empty() && text[0] == '~') {
        for (std::size_t k = 1; k <= 3; ++k) n = (n << 6) | static_cast<std::size_t>(byte(k));
        pos = 4;
    } else {
        n = static_cast<std::size_t>(byte(0));
        pos = 1;
    }
    Network net(std::vector<PlayerClass>(n, fill));
    int bit = 6;
    int value = 0;
    for (PlayerId v = 1; v < n; ++v) {
        for (PlayerId u = 0; u < v; ++u) {
            if (bit == 6) {
                value = byte(pos++);
                bit = 0;
            }
            if ((value >> (5 - bit)) & 1) net.add_edge(u, v);
            ++bit;
        }
    }
    return net;
}

std::string class_string(const Network& net) {
    std::string out;
    out.reserve(net.size());
    for (PlayerClass c : net.classes()) out.push_back(c == PlayerClass::MajorA ? 'A' : 'B');
    return out;
}

void apply_class_string(Network& net, std::string_view classes) {
    if (classes.size() != net.size()) throw std::invalid_argument("class string length does not match node count");
    for (PlayerId i = 0; i < net.size(); ++i) {
        if (classes[i] != 'A' && classes[i] != 'B') throw std::invalid_argument("class string may only contain A and B");
        net.set_class(i, classes[i] == 'A' ? PlayerClass::MajorA : PlayerClass::MinorB);
    }
}

}  // namespace netform
