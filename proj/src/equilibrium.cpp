#include "netform/equilibrium.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "netform/errors.hpp"

namespace netform {

namespace {

std::vector<Edge> all_pairs(std::size_t n) {
    std::vector<Edge> pairs;
    for (PlayerId u = 0; u < n; ++u) {
        for (PlayerId v = u + 1; v < n; ++v) pairs.push_back({u, v});
    }
    return pairs;
}

struct CheckResult {
    StabilityReport report;
    Rational social;
    bool penalized = false;
};

// Works on a private copy and toggles one pair at a time, so each deviation
// costs two node evaluations instead of a network copy.
CheckResult check_stability(Network work, const CostParams& p, bool transfers, const StabilityOptions& opts,
                            bool want_social) {
    CheckResult out;
    std::vector<Rational> base(work.size());
    for (PlayerId i = 0; i < work.size(); ++i) {
        const auto cost = node_cost(work, p, i);
        base[i] = cost.total;
        if (want_social) {
            out.social += cost.total;
            out.penalized = out.penalized || cost.penalty != Rational(0);
        }
    }
    const Rational zero(0);
    auto gains = [&](const Rational& d, bool zero_counts) { return zero_counts ? d <= zero : d < zero; };

    for (const Edge& e : all_pairs(work.size())) {
        const bool present = work.has_edge(e.u, e.v);
        if (present) {
            work.remove_edge(e.u, e.v);
        } else {
            work.add_edge(e.u, e.v);
        }
        const Rational du = node_cost(work, p, e.u).total - base[e.u];
        const Rational dv = node_cost(work, p, e.v).total - base[e.v];
        if (present) {
            work.add_edge(e.u, e.v);
        } else {
            work.remove_edge(e.u, e.v);
        }

        Violation v{e, {}, present ? EdgeAction::Remove : EdgeAction::Add, du, dv};
        bool violated = false;
        if (transfers) {
            violated = gains(du + dv, opts.zero_combined_deviates);
            if (violated) v.actors = {e.u, e.v};
        } else if (present) {
            if (gains(du, opts.zero_delta_deviates)) v.actors.push_back(e.u);
            if (gains(dv, opts.zero_delta_deviates)) v.actors.push_back(e.v);
            violated = !v.actors.empty();
        } else {
            violated = gains(du, opts.zero_delta_deviates) && gains(dv, opts.zero_delta_deviates);
            if (violated) v.actors = {e.u, e.v};
        }
        if (violated) {
            out.report.stable = false;
            out.report.violations.push_back(std::move(v));
            if (opts.first_violation_only) break;
        }
    }
    return out;
}

Network complete_major_clique(std::size_t n_major, std::size_t n_minor) {
    Network net(n_major, n_minor);
    for (PlayerId a = 0; a < n_major; ++a) {
        for (PlayerId b = a + 1; b < n_major; ++b) net.add_edge(a, b);
    }
    return net;
}

struct Chunk {
    std::vector<std::uint64_t> masks;
    std::vector<Rational> costs;
    std::vector<bool> penalized;
    std::uint64_t best_mask = 0;
    std::optional<Rational> best_cost;
};

}  // namespace

StabilityReport is_pairwise_stable(const Network& net, const CostParams& p, const StabilityOptions& opts) {
    return check_stability(net, p, false, opts, false).report;
}

StabilityReport is_pairwise_stable_with_transfers(const Network& net, const CostParams& p,
                                                  const StabilityOptions& opts) {
    return check_stability(net, p, true, opts, false).report;
}

bool check_type_a_clique(const Network& net) {
    for (PlayerId a = 0; a < net.size(); ++a) {
        if (!net.is_major(a)) continue;
        for (PlayerId b = a + 1; b < net.size(); ++b) {
            if (net.is_major(b) && !net.has_edge(a, b)) return false;
        }
    }
    return true;
}

Network EnumerationResult::graph(std::uint64_t mask) const {
    Network net(n_major, n_minor);
    const auto pairs = all_pairs(n_major + n_minor);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if ((mask >> k) & 1U) net.add_edge(pairs[k].u, pairs[k].v);
    }
    return net;
}

EnumerationResult enumerate_pairwise_stable(std::size_t n_major, std::size_t n_minor, const CostParams& p,
                                            const EnumerationOptions& opts) {
    const std::size_t n = n_major + n_minor;
    if (n == 0) throw std::invalid_argument("enumeration needs at least one player");
    if (!opts.force && n > opts.max_players) {
        throw SizeError("enumeration over " + std::to_string(n) + " players exceeds the guard of " +
                        std::to_string(opts.max_players) + " (use force to override)");
    }
    const auto pairs = all_pairs(n);
    if (pairs.size() >= 63) throw SizeError("too many node pairs to enumerate");
    p.validate(n);

    EnumerationResult result;
    result.n_major = n_major;
    result.n_minor = n_minor;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    result.graphs_checked = total;

    StabilityOptions stability = opts.stability;
    stability.first_violation_only = true;
    const Network empty(n_major, n_minor);

    auto run = [&](std::uint64_t begin, std::uint64_t end, Chunk& chunk) {
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            Network net = empty;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                if ((mask >> k) & 1U) net.add_edge(pairs[k].u, pairs[k].v);
            }
            auto checked = check_stability(std::move(net), p, opts.transfers, stability, true);
            if (!chunk.best_cost || checked.social < *chunk.best_cost) {
                chunk.best_cost = checked.social;
                chunk.best_mask = mask;
            }
            if (checked.report.stable) {
                chunk.masks.push_back(mask);
                chunk.costs.push_back(checked.social);
                chunk.penalized.push_back(checked.penalized);
            }
        }
    };

    const unsigned jobs = std::max(1U, std::min<unsigned>(opts.jobs, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
    std::vector<Chunk> chunks(jobs);
    if (jobs == 1) {
        run(0, total, chunks[0]);
    } else {
        std::vector<std::thread> workers;
        const std::uint64_t step = (total + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            const std::uint64_t begin = std::min(total, step * t);
            const std::uint64_t end = std::min(total, begin + step);
            workers.emplace_back(run, begin, end, std::ref(chunks[t]));
        }
        for (auto& w : workers) w.join();
    }

    // Chunks cover increasing mask ranges, so concatenation keeps index order
    // and the strict comparison keeps the first optimum.
    std::optional<Rational> best;
    for (auto& chunk : chunks) {
        result.stable_masks.insert(result.stable_masks.end(), chunk.masks.begin(), chunk.masks.end());
        result.stable_costs.insert(result.stable_costs.end(), chunk.costs.begin(), chunk.costs.end());
        result.stable_penalized.insert(result.stable_penalized.end(), chunk.penalized.begin(), chunk.penalized.end());
        if (chunk.best_cost && (!best || *chunk.best_cost < *best)) {
            best = chunk.best_cost;
            result.optimum_mask = chunk.best_mask;
        }
    }
    result.optimum_cost = *best;
    return result;
}

Network optimal_bare_network(const CostParams& p, std::size_t n_major, std::size_t n_minor) {
    if (n_major == 0) throw std::invalid_argument("the optimal network needs at least one major player");
    Network net = complete_major_clique(n_major, n_minor);
    const bool single_hub = (p.major_weight + Rational(1)) / Rational(2) <= p.mean_link_cost();
    for (PlayerId b = static_cast<PlayerId>(n_major); b < net.size(); ++b) {
        if (single_hub) {
            net.add_edge(0, b);
        } else {
            for (PlayerId a = 0; a < n_major; ++a) net.add_edge(a, b);
        }
    }
    return net;
}

Network optimal_reliable_stable_network(const CostParams& p, std::size_t n_major, std::size_t n_minor) {
    if (n_major < 2) throw std::invalid_argument("two disjoint paths need at least two major players");
    if (p.mode != CostMode::Reliable || p.tau != 1) {
        throw std::invalid_argument("the reliable constructor expects reliable mode with tau = 1");
    }
    Network net = complete_major_clique(n_major, n_minor);
    for (PlayerId b = static_cast<PlayerId>(n_major); b < net.size(); ++b) {
        net.add_edge(0, b);
        net.add_edge(1, b);
    }
    return net;
}

PriceReport price_report(const CostParams& p, std::size_t n_major, std::size_t n_minor, bool transfers,
                         const EnumerationOptions& opts) {
    EnumerationOptions local = opts;
    local.transfers = transfers;
    const auto result = enumerate_pairwise_stable(n_major, n_minor, p, local);

    PriceReport report;
    report.params = p;
    report.n_major = n_major;
    report.n_minor = n_minor;
    report.transfers = transfers;
    report.graphs_checked = result.graphs_checked;
    report.stable_count = result.stable_masks.size();
    report.s_optimal = result.optimum_cost;
    report.optimum = result.graph(result.optimum_mask);
    if (report.stable_count == 0) return report;

    std::size_t best = 0;
    std::size_t worst = 0;
    for (std::size_t k = 1; k < result.stable_costs.size(); ++k) {
        if (result.stable_costs[k] < result.stable_costs[best]) best = k;
        if (result.stable_costs[k] > result.stable_costs[worst]) worst = k;
    }
    report.s_best_stable = result.stable_costs[best];
    report.s_worst_stable = result.stable_costs[worst];
    report.best_stable = result.graph(result.stable_masks[best]);
    report.worst_stable = result.graph(result.stable_masks[worst]);
    report.q_dominated = result.stable_penalized[worst];
    if (report.s_optimal != Rational(0)) {
        report.pos = *report.s_best_stable / report.s_optimal;
        report.poa = *report.s_worst_stable / report.s_optimal;
    }
    return report;
}

ReliabilityReport reliability_report(const CostParams& p, std::size_t n_major, std::size_t n_minor, bool transfers,
                                     const EnumerationOptions& opts) {
    CostParams reliable = p;
    reliable.mode = CostMode::Reliable;
    CostParams bare = p;
    bare.mode = CostMode::Bare;

    ReliabilityReport out;
    out.reliable = price_report(reliable, n_major, n_minor, transfers, opts);
    out.bare = price_report(bare, n_major, n_minor, transfers, opts);
    if (out.reliable.s_best_stable && out.bare.s_best_stable && *out.bare.s_best_stable != Rational(0)) {
        out.por = *out.reliable.s_best_stable / *out.bare.s_best_stable;
        out.por_below_one = *out.por < Rational(1);
    }
    return out;
}

}  // namespace netform
