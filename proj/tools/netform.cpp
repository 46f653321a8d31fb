#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "netform/dynamics.hpp"
#include "netform/equilibrium.hpp"
#include "netform/errors.hpp"
#include "netform/io.hpp"
#include "netform/topology.hpp"

using namespace netform;

namespace {

constexpr int kExitError = 2;

struct ParamFlags {
    std::string a = "3";
    std::string c_a = "2";
    std::string c_b = "2";
    std::string delta = "1";
    int tau = 1;
    std::string q;
    std::string mode = "bare";

    void attach(CLI::App* cmd) {
        cmd->add_option("--A", a, "weight of distances to majors (p/q allowed)")->capture_default_str();
        cmd->add_option("--cA", c_a, "link cost of a major endpoint")->capture_default_str();
        cmd->add_option("--cB", c_b, "link cost of a minor endpoint")->capture_default_str();
        cmd->add_option("--delta", delta, "backup-path weight in (0,1]")->capture_default_str();
        cmd->add_option("--tau", tau, "1: backups to everyone, 0: to majors only")->capture_default_str();
        cmd->add_option("--Q", q, "penalty (default 1000 N^2 (A + c_B))");
        cmd->add_option("--mode", mode, "bare or reliable")->capture_default_str()->check(
            CLI::IsMember({"bare", "reliable"}));
    }

    [[nodiscard]] CostParams build(std::size_t n) const {
        CostParams p;
        p.major_weight = Rational::parse(a);
        p.major_link_cost = Rational::parse(c_a);
        p.minor_link_cost = Rational::parse(c_b);
        p.delta = Rational::parse(delta);
        p.tau = tau;
        if (!q.empty()) p.penalty = Rational::parse(q);
        p.mode = mode == "reliable" ? CostMode::Reliable : CostMode::Bare;
        p.validate(n);
        return p;
    }
};

struct GraphFlags {
    std::string format = "auto";
    std::vector<std::string> majors;
    std::size_t top_majors = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "auto, plain, pipe or json")
            ->capture_default_str()
            ->check(CLI::IsMember({"auto", "plain", "pipe", "json"}));
        cmd->add_option("--majors", majors, "external ids of the major players")->delimiter(',');
        cmd->add_option("--top-majors", top_majors, "make the m highest-degree nodes majors");
    }

    [[nodiscard]] std::string resolved_format(const std::string& path) const {
        if (format != "auto") return format;
        const auto ext = std::filesystem::path(path).extension().string();
        if (ext == ".json") return "json";
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            return line.find('|') != std::string::npos ? "pipe" : "plain";
        }
        return "plain";
    }

    [[nodiscard]] LoadedGraph load(const std::string& path) const {
        const std::string f = resolved_format(path);
        if (f == "json") {
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot read " + path);
            LoadedGraph out;
            out.net = network_from_json(Json::parse(in));
            return out;
        }
        ClassRule rule{majors, top_majors};
        return load_edge_list(path, f == "pipe" ? EdgeListFormat::PipeASRel : EdgeListFormat::PlainPairs, rule);
    }

    [[nodiscard]] Json describe() const {
        Json j;
        j["format"] = format;
        j["majors"] = majors;
        j["top_majors"] = top_majors;
        return j;
    }
};

Json envelope(const std::string& command, Json config) {
    Json j;
    j["tool"] = "netform";
    j["version"] = version();
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NETFORM_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("NETFORM_SEED must be a non-negative integer");
        }
    }
    return 1;
}

// ---- stability --------------------------------------------------------

int cmd_stability(const std::string& path, const GraphFlags& graph, const ParamFlags& params, bool transfers,
                  bool strict_zero) {
    const LoadedGraph g = graph.load(path);
    const CostParams p = params.build(g.net.size());
    StabilityOptions opts;
    opts.zero_delta_deviates = !strict_zero;
    const auto report =
        transfers ? is_pairwise_stable_with_transfers(g.net, p, opts) : is_pairwise_stable(g.net, p, opts);

    Json config;
    config["file"] = path;
    config["graph"] = graph.describe();
    config["params"] = params_json(p, g.net.size());
    config["transfers"] = transfers;
    config["zero_delta_deviates"] = opts.zero_delta_deviates;
    Json out = envelope("stability", std::move(config));
    out["network"] = network_json(g.net);
    out["self_loops_dropped"] = g.self_loops_dropped;
    out["social_cost"] = rational_json(social_cost(g.net, p));
    out["report"] = stability_json(report);
    std::cout << out.dump(2) << "\n";
    return report.stable ? 0 : 1;
}

// ---- enumerate --------------------------------------------------------

int cmd_enumerate(std::size_t n_a, std::size_t n_b, const ParamFlags& params, bool transfers, bool force,
                  unsigned jobs, std::size_t max_players, bool por) {
    const CostParams p = params.build(n_a + n_b);
    EnumerationOptions opts;
    opts.force = force;
    opts.jobs = std::max(1U, jobs);
    opts.max_players = max_players;

    Json config;
    config["n_A"] = n_a;
    config["n_B"] = n_b;
    config["params"] = params_json(p, n_a + n_b);
    config["transfers"] = transfers;
    config["max_players"] = max_players;
    config["force"] = force;
    Json out = envelope("enumerate", std::move(config));
    if (por) {
        out["report"] = reliability_json(reliability_report(p, n_a, n_b, transfers, opts));
    } else {
        out["report"] = price_report_json(price_report(p, n_a, n_b, transfers, opts));
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ---- simulate ---------------------------------------------------------

struct Outcome {
    RunResult run;
    std::uint64_t seed = 0;
    Rational social;
    std::optional<Rational> reference;
    std::size_t q_nodes = 0;
    std::string state;
    Prediction prediction = Prediction::Indeterminate;
};

std::optional<Rational> reference_cost(const RunConfig& cfg) {
    const CostParams& p = cfg.dynamics.params;
    if (p.mode == CostMode::Bare && cfg.n_major >= 1) {
        return social_cost(optimal_bare_network(p, cfg.n_major, cfg.n_minor), p);
    }
    if (p.mode == CostMode::Reliable && p.tau == 1 && cfg.n_major >= 2) {
        return social_cost(optimal_reliable_stable_network(p, cfg.n_major, cfg.n_minor), p);
    }
    return std::nullopt;
}

Outcome simulate_one(const RunConfig& cfg, std::uint64_t seed, const std::optional<Rational>& reference) {
    DynamicsConfig d = cfg.dynamics;
    d.scheduler.seed = seed;
    Outcome o;
    o.seed = seed;
    o.run = run_game(d, cfg.n_major, cfg.n_minor);
    const GameState& s = o.run.state;
    o.social = social_cost(s.net, d.params, &s.joined);
    o.reference = reference;
    for (PlayerId v = 0; v < s.net.size(); ++v) {
        if (node_cost(s, d.params, v).penalty != Rational(0)) ++o.q_nodes;
    }
    if (o.q_nodes > 0) {
        o.state = "q_dominated";
    } else if (!reference) {
        o.state = "unreferenced";
    } else if (o.social == *reference) {
        o.state = "optimal";
    } else {
        o.state = o.social > *reference ? "suboptimal" : "below_reference";
    }
    std::vector<PlayerClass> history;
    for (PlayerId v : s.arrival_order) history.push_back(s.net.player_class(v));
    o.prediction = convergence_prediction(d.params, history);
    return o;
}

int cmd_simulate(const std::string& path, bool json_summary, unsigned jobs_flag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    RunConfig cfg = run_config_from_key_values(parse_key_values(in), default_seed());
    const unsigned jobs = std::max(1U, jobs_flag > 0 ? jobs_flag : cfg.jobs);
    const auto reference = reference_cost(cfg);

    std::vector<Outcome> outcomes(cfg.replicas);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            outcomes[k] = simulate_one(cfg, cfg.dynamics.scheduler.seed + k, reference);
        }
    };
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(cfg.replicas));
    if (workers <= 1) {
        work(0, cfg.replicas);
    } else {
        std::vector<std::thread> pool;
        const std::size_t step = (cfg.replicas + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = std::min(cfg.replicas, step * t);
            pool.emplace_back(work, begin, std::min(cfg.replicas, begin + step));
        }
        for (auto& th : pool) th.join();
    }

    const KeyValues settings = resolved(cfg);
    Json config(settings);
    if (!cfg.trace_path.empty()) {
        std::ofstream trace(cfg.trace_path);
        if (!trace) throw std::runtime_error("cannot write " + cfg.trace_path);
        Json header = envelope("simulate", config);
        header["type"] = "header";
        trace << header.dump() << "\n";
        for (const auto& o : outcomes) {
            for (const auto& turn : o.run.trace.turns) {
                Json line;
                line["type"] = "turn";
                line["seed"] = o.seed;
                line.update(turn_json(turn));
                trace << line.dump() << "\n";
            }
        }
    }

    if (json_summary) {
        Json out = envelope("simulate", config);
        Json runs = Json::array();
        for (const auto& o : outcomes) {
            Json r;
            r["seed"] = o.seed;
            r["converged"] = o.run.converged;
            r["rounds"] = o.run.rounds;
            r["active_rounds"] = o.run.active_rounds;
            r["budget_hit"] = o.run.budget_hit;
            r["social_cost"] = rational_json(o.social);
            r["reference_cost"] = o.reference ? rational_json(*o.reference) : Json(nullptr);
            r["ratio"] = o.reference ? rational_json(o.social / *o.reference) : Json(nullptr);
            r["state"] = o.state;
            r["q_dominated"] = o.q_nodes > 0;
            r["q_nodes"] = o.q_nodes;
            r["prediction"] = to_string(o.prediction);
            r["final_phase"] = o.run.trace.turns.empty() ? Json(nullptr) : phase_json(o.run.trace.turns.back().phase);
            r["network"] = network_json(o.run.state.net);
            runs.push_back(std::move(r));
        }
        out["runs"] = std::move(runs);
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cout << "# netform " << version() << " simulate";
    for (const auto& [k, v] : settings) std::cout << " " << k << "=" << v;
    std::cout << "\n";
    for (const auto& o : outcomes) {
        const auto& phase = o.run.trace.turns.empty() ? PhaseCoords{} : o.run.trace.turns.back().phase;
        std::cout << "seed=" << o.seed << " converged=" << (o.run.converged ? "true" : "false")
                  << " rounds=" << o.run.rounds << " social_cost=" << o.social.str();
        if (o.reference) std::cout << " ratio=" << (o.social / *o.reference).str();
        std::cout << " state=" << o.state << " region=" << (phase.region ? std::to_string(*phase.region) : "none")
                  << " q_dominated=" << (o.q_nodes > 0 ? "true" : "false")
                  << " prediction=" << to_string(o.prediction) << "\n";
    }
    return 0;
}

// ---- analyze ----------------------------------------------------------

CoreSpec parse_core(const std::string& text, const Network& net) {
    CoreSpec spec;
    if (text == "majors") {
        for (PlayerId v = 0; v < net.size(); ++v)
            if (net.is_major(v)) spec.nodes.push_back(v);
    } else if (text.rfind("k:", 0) == 0) {
        spec.k_level = std::stoi(text.substr(2));
    } else if (text.rfind("top:", 0) == 0) {
        const auto m = std::stoul(text.substr(4));
        std::vector<PlayerId> order(net.size());
        for (PlayerId v = 0; v < net.size(); ++v) order[v] = v;
        std::stable_sort(order.begin(), order.end(),
                         [&](PlayerId x, PlayerId y) { return net.degree(x) > net.degree(y); });
        order.resize(std::min<std::size_t>(m, order.size()));
        spec.nodes = order;
    } else if (text.rfind("ids:", 0) == 0) {
        std::istringstream in(text.substr(4));
        std::string id;
        while (std::getline(in, id, ',')) {
            const auto& labels = net.labels();
            auto it = std::find(labels.begin(), labels.end(), id);
            if (it == labels.end()) throw std::invalid_argument("core id '" + id + "' is not in the graph");
            spec.nodes.push_back(static_cast<PlayerId>(it - labels.begin()));
        }
    } else {
        throw std::invalid_argument("core must be majors, k:N, top:M or ids:a,b,...");
    }
    return spec;
}

const std::vector<std::string> kMetrics = {"core-size",      "core-density", "core-distance", "unreachable",
                                           "disjoint-paths", "core-ratio",   "shortest-cycle", "double-star",
                                           "triangles",      "diamonds"};

std::string metric_value(const std::string& metric, const Network& net, const CoreSpec& core, int m) {
    auto fmt = [](double x) {
        std::ostringstream s;
        s.precision(10);
        s << x;
        return s.str();
    };
    const auto members = resolve_core(net, core);
    std::vector<PlayerId> outside;
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (!std::binary_search(members.begin(), members.end(), v) && net.degree(v) > 0) outside.push_back(v);
    }
    if (metric == "core-size") return std::to_string(members.size());
    if (metric == "core-density") return members.size() < 2 ? "" : fmt(subgraph_density(net, members));
    if (metric == "core-distance") return fmt(node_core_distance(net, core).mean);
    if (metric == "unreachable") return std::to_string(node_core_distance(net, core).unreachable);
    if (metric == "disjoint-paths") {
        if (outside.empty()) return "";
        double sum = 0;
        for (PlayerId v : outside) sum += disjoint_paths_to_core(net, core, v).count;
        return fmt(sum / static_cast<double>(outside.size()));
    }
    if (metric == "core-ratio") return outside.empty() ? "" : fmt(core_ratio(net, core, outside));
    if (metric == "shortest-cycle") {
        if (outside.empty()) return "";
        const auto stats = mean_shortest_cycle(net, outside, members);
        return stats.pairs == 0 ? "" : fmt(stats.mean);
    }
    if (metric == "double-star") return std::to_string(count_double_star(net, m));
    if (metric == "triangles") return std::to_string(count_entangled_cycles(net, 3));
    if (metric == "diamonds") return std::to_string(count_entangled_cycles(net, 4));
    throw std::invalid_argument("unknown metric '" + metric + "'");
}

int cmd_analyze(const std::vector<std::string>& files, const GraphFlags& graph, const std::string& core_text,
                std::vector<std::string> metrics, int m) {
    if (metrics.empty()) metrics = {"core-distance"};
    for (const auto& metric : metrics) {
        if (std::find(kMetrics.begin(), kMetrics.end(), metric) == kMetrics.end()) {
            throw std::invalid_argument("unknown metric '" + metric + "'");
        }
    }
    std::ostringstream out;
    out << "# netform " << version() << " analyze core=" << core_text << " format=" << graph.format
        << " top_majors=" << graph.top_majors << " m=" << m << "\n";
    out << "snapshot,nodes,edges";
    for (const auto& metric : metrics) out << "," << metric;
    out << "\n";
    for (const auto& file : files) {
        const LoadedGraph g = graph.load(file);
        const CoreSpec core = parse_core(core_text, g.net);
        out << std::filesystem::path(file).filename().string() << "," << g.net.size() << "," << g.net.edge_count();
        for (const auto& metric : metrics) out << "," << metric_value(metric, g.net, core, m);
        out << "\n";
    }
    std::cout << out.str();
    return 0;
}

// ---- motifs / nullmodel -----------------------------------------------

int cmd_motifs(const std::string& path, const GraphFlags& graph, const std::string& motif_text, std::size_t samples,
               std::uint64_t seed, unsigned jobs) {
    const LoadedGraph g = graph.load(path);
    const Motif motif = parse_motif(motif_text);
    const auto report = null_model_report(g.net, motif, samples, seed, std::max(1U, jobs));
    Json config;
    config["file"] = path;
    config["graph"] = graph.describe();
    config["motif"] = to_string(motif);
    config["samples"] = samples;
    config["seed"] = seed;
    Json out = envelope("motifs", std::move(config));
    out["nodes"] = g.net.size();
    out["edges"] = g.net.edge_count();
    out["report"] = motif_json(report);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_nullmodel(const std::string& path, const GraphFlags& graph, std::size_t samples, std::uint64_t seed,
                  bool emit_edges) {
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    const LoadedGraph g = graph.load(path);
    const auto degrees = degree_sequence(g.net);
    Json config;
    config["file"] = path;
    config["graph"] = graph.describe();
    config["samples"] = samples;
    config["seed"] = seed;
    Json out = envelope("nullmodel", std::move(config));
    Json list = Json::array();
    double worst = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const std::uint64_t s = derive_seed(seed, k);
        const auto sample = configuration_model(degrees, s);
        Json item;
        item["index"] = k;
        item["seed"] = s;
        item["edges"] = sample.net.edge_count();
        item["erased_stubs"] = sample.erased_stubs;
        item["erased_fraction"] = sample.erased_fraction;
        if (emit_edges) item["network"] = network_json(sample.net);
        list.push_back(std::move(item));
        worst = std::max(worst, sample.erased_fraction);
        total += sample.erased_fraction;
    }
    out["nodes"] = g.net.size();
    out["stubs"] = 2 * g.net.edge_count();
    out["max_erased_fraction"] = worst;
    out["mean_erased_fraction"] = total / static_cast<double>(samples);
    out["samples"] = std::move(list);
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network formation game simulator and topology analytics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    ParamFlags params;
    GraphFlags graph;

    auto* stability = app.add_subcommand("stability", "check pairwise stability of a network file");
    std::string stab_file;
    bool stab_transfers = false;
    bool strict_zero = false;
    stability->add_option("file", stab_file, "edge list or JSON network")->required();
    stability->add_flag("--transfers", stab_transfers, "use the combined-benefit (transfer) reading");
    stability->add_flag("--strict-zero", strict_zero, "a zero cost change is not a deviation");
    params.attach(stability);
    graph.attach(stability);

    auto* enumerate = app.add_subcommand("enumerate", "exhaustive equilibrium search on small instances");
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool en_transfers = false;
    bool force = false;
    bool por = false;
    unsigned jobs = 1;
    std::size_t max_players = 7;
    enumerate->add_option("--nA", n_a, "major players")->required();
    enumerate->add_option("--nB", n_b, "minor players")->required();
    enumerate->add_flag("--transfers", en_transfers, "transfer-aware stability");
    enumerate->add_flag("--force", force, "skip the size guard");
    enumerate->add_flag("--por", por, "report the price of reliability (reliable vs bare)");
    enumerate->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    enumerate->add_option("--max-players", max_players, "size guard")->capture_default_str();
    params.attach(enumerate);

    auto* simulate = app.add_subcommand("simulate", "run the dynamics from a key=value config file");
    std::string sim_file;
    bool sim_json = false;
    unsigned sim_jobs = 0;
    simulate->add_option("config", sim_file, "flat key=value config")->required();
    simulate->add_flag("--json", sim_json, "JSON summary instead of text rows");
    simulate->add_option("--jobs", sim_jobs, "parallel replicas (overrides the config)");

    auto* analyze = app.add_subcommand("analyze", "topology metrics per snapshot, as CSV");
    std::vector<std::string> snapshots;
    std::string core_text = "majors";
    std::vector<std::string> metrics;
    int motif_m = 2;
    analyze->add_option("files", snapshots, "snapshot edge lists")->required();
    analyze->add_option("--core", core_text, "majors, k:N, top:M or ids:a,b")->capture_default_str();
    analyze->add_option("--metric", metrics, "metric name (repeatable)");
    analyze->add_option("--m", motif_m, "double-star threshold")->capture_default_str();
    graph.attach(analyze);

    auto* motifs = app.add_subcommand("motifs", "motif count against a configuration-model null");
    std::string motif_file;
    std::string motif_text = "double-star:2";
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    unsigned motif_jobs = 1;
    motifs->add_option("file", motif_file, "snapshot")->required();
    motifs->add_option("--motif", motif_text, "double-star:M or entangled-cycle:3|4")->capture_default_str();
    motifs->add_option("--samples", samples, "null samples")->capture_default_str();
    motifs->add_option("--seed", seed, "seed (default NETFORM_SEED or 1)");
    motifs->add_option("--jobs", motif_jobs, "worker threads")->capture_default_str();
    graph.attach(motifs);

    auto* nullmodel = app.add_subcommand("nullmodel", "configuration-model samples of a snapshot's degrees");
    std::string null_file;
    std::size_t null_samples = 10;
    std::uint64_t null_seed = 0;
    bool emit_edges = false;
    nullmodel->add_option("file", null_file, "snapshot")->required();
    nullmodel->add_option("--samples", null_samples, "samples")->capture_default_str();
    nullmodel->add_option("--seed", null_seed, "seed (default NETFORM_SEED or 1)");
    nullmodel->add_flag("--emit-edges", emit_edges, "include every sampled network");
    graph.attach(nullmodel);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (stability->parsed()) return cmd_stability(stab_file, graph, params, stab_transfers, strict_zero);
        if (enumerate->parsed()) return cmd_enumerate(n_a, n_b, params, en_transfers, force, jobs, max_players, por);
        if (simulate->parsed()) return cmd_simulate(sim_file, sim_json, sim_jobs);
        if (analyze->parsed()) return cmd_analyze(snapshots, graph, core_text, metrics, motif_m);
        if (motifs->parsed()) {
            return cmd_motifs(motif_file, graph, motif_text, samples, motifs->count("--seed") ? seed : default_seed(),
                              motif_jobs);
        }
        if (nullmodel->parsed()) {
            return cmd_nullmodel(null_file, graph, null_samples,
                                 nullmodel->count("--seed") ? null_seed : default_seed(), emit_edges);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
