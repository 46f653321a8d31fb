#include "netform/io.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "netform/errors.hpp"

namespace netform {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

Json optional_rational(const std::optional<Rational>& r) { return r ? rational_json(*r) : Json(nullptr); }

Json optional_id(const std::optional<PlayerId>& v) { return v ? Json(*v) : Json(nullptr); }

const char* action_name(EdgeAction a) { return a == EdgeAction::Add ? "add" : "remove"; }

std::string take(KeyValues& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string value = it->second;
    kv.erase(it);
    return value;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(key + ": expected a boolean, got '" + v + "'");
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const auto x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
    }
}

Rational parse_rational(const std::string& key, const std::string& v) {
    try {
        return Rational::parse(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected a rational like 3 or 3/2, got '" + v + "'");
    }
}

std::vector<PlayerId> parse_ids(const std::string& key, const std::string& v) {
    std::vector<PlayerId> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<PlayerId>(parse_count(key, item)));
    }
    return out;
}

std::string join_ids(const std::vector<PlayerId>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) out += (k ? "," : "") + std::to_string(ids[k]);
    return out;
}

}  // namespace

std::string version() { return NETFORM_VERSION; }

Json rational_json(const Rational& r) { return r.str(); }

Json params_json(const CostParams& p, std::size_t n_players) {
    Json j;
    j["A"] = rational_json(p.major_weight);
    j["c_A"] = rational_json(p.major_link_cost);
    j["c_B"] = rational_json(p.minor_link_cost);
    j["delta"] = rational_json(p.delta);
    j["tau"] = p.tau;
    j["Q"] = rational_json(p.penalty_for(n_players));
    j["mode"] = to_string(p.mode);
    return j;
}

Json network_json(const Network& net) {
    Json j;
    j["n"] = net.size();
    j["classes"] = class_string(net);
    j["graph6"] = to_graph6(net);
    Json edges = Json::array();
    for (const Edge& e : net.edges()) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    if (!net.labels().empty()) j["labels"] = net.labels();
    return j;
}

Network network_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("network JSON must be an object");
    Network net;
    if (j.contains("graph6")) {
        net = from_graph6(j.at("graph6").get<std::string>());
    } else {
        std::size_t n = 0;
        if (j.contains("n")) {
            n = j.at("n").get<std::size_t>();
        } else if (j.contains("classes")) {
            n = j.at("classes").get<std::string>().size();
        } else {
            throw std::invalid_argument("network JSON needs n, classes or graph6");
        }
        net = Network(std::vector<PlayerClass>(n, PlayerClass::MinorB));
        for (const auto& e : j.value("edges", Json::array())) {
            if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edges must be [u, v] pairs");
            const auto u = e[0].get<PlayerId>();
            const auto v = e[1].get<PlayerId>();
            net.add_edge(u, v);
        }
    }
    if (j.contains("classes")) apply_class_string(net, j.at("classes").get<std::string>());
    if (j.contains("labels")) net.set_labels(j.at("labels").get<std::vector<std::string>>());
    return net;
}

Json stability_json(const StabilityReport& report) {
    Json j;
    j["stable"] = report.stable;
    Json list = Json::array();
    for (const auto& v : report.violations) {
        Json item;
        item["edge"] = {v.edge.u, v.edge.v};
        item["action"] = action_name(v.action);
        item["actors"] = v.actors;
        item["delta_u"] = rational_json(v.delta_u);
        item["delta_v"] = rational_json(v.delta_v);
        list.push_back(std::move(item));
    }
    j["violations"] = std::move(list);
    return j;
}

Json price_report_json(const PriceReport& r) {
    Json j;
    j["params"] = params_json(r.params, r.n_major + r.n_minor);
    j["n_A"] = r.n_major;
    j["n_B"] = r.n_minor;
    j["transfers"] = r.transfers;
    j["graphs_checked"] = r.graphs_checked;
    j["stable_count"] = r.stable_count;
    j["s_optimal"] = rational_json(r.s_optimal);
    j["s_best_stable"] = optional_rational(r.s_best_stable);
    j["s_worst_stable"] = optional_rational(r.s_worst_stable);
    j["pos"] = optional_rational(r.pos);
    j["poa"] = optional_rational(r.poa);
    j["pos_value"] = r.pos ? Json(r.pos->to_double()) : Json(nullptr);
    j["poa_value"] = r.poa ? Json(r.poa->to_double()) : Json(nullptr);
    j["poa_flag"] = r.q_dominated ? "Q-dominated" : "finite";
    j["optimum"] = network_json(r.optimum);
    j["best_stable"] = r.best_stable ? network_json(*r.best_stable) : Json(nullptr);
    j["worst_stable"] = r.worst_stable ? network_json(*r.worst_stable) : Json(nullptr);
    return j;
}

Json reliability_json(const ReliabilityReport& r) {
    Json j;
    j["por"] = optional_rational(r.por);
    j["por_value"] = r.por ? Json(r.por->to_double()) : Json(nullptr);
    j["por_below_one"] = r.por_below_one ? Json(*r.por_below_one) : Json(nullptr);
    j["reliable"] = price_report_json(r.reliable);
    j["bare"] = price_report_json(r.bare);
    return j;
}

Json phase_json(const PhaseCoords& ph) {
    Json j;
    j["classified"] = ph.classified;
    j["region"] = ph.region ? Json(*ph.region) : Json(nullptr);
    j["star_center"] = optional_id(ph.star_center);
    j["hub"] = optional_id(ph.hub);
    j["hub_linked_to_center"] = ph.hub_linked_to_center;
    j["s"] = ph.s_size;
    j["l"] = ph.l_size;
    j["d"] = ph.d_size;
    j["term1"] = optional_rational(ph.term1);
    j["term2"] = optional_rational(ph.term2);
    if (ph.second_center || ph.second_hub) {
        j["second_center"] = optional_id(ph.second_center);
        j["second_hub"] = optional_id(ph.second_hub);
        j["s2"] = ph.s2_size;
        j["d2"] = ph.d2_size;
    }
    return j;
}

Json turn_json(const TurnRecord& t) {
    Json j;
    j["turn"] = t.turn;
    j["round"] = t.round;
    j["actor"] = t.actor;
    j["arrival"] = t.arrival;
    Json moves = Json::array();
    for (const auto& m : t.moves) {
        Json item;
        item["edge"] = {m.edge.u, m.edge.v};
        item["action"] = action_name(m.action);
        item["actor"] = m.actor;
        item["payment"] = rational_json(m.payment);
        item["actor_delta"] = rational_json(m.actor_delta);
        item["counterparty_delta"] = rational_json(m.counterparty_delta);
        moves.push_back(std::move(item));
    }
    j["moves"] = std::move(moves);
    j["social_cost"] = rational_json(t.social_cost);
    j["phase"] = phase_json(t.phase);
    if (t.budget_hit) j["budget_hit"] = true;
    return j;
}

Json motif_json(const MotifReport& r) {
    Json j;
    j["motif"] = to_string(r.motif);
    j["counting_unit"] = r.motif.kind == MotifKind::DoubleStar ? "unordered adjacent center pairs"
                         : r.motif.param == 3                  ? "node triples (triangles)"
                                                               : "4-node subsets with >= 5 induced edges";
    j["observed"] = r.observed;
    j["null_mean"] = r.null_mean;
    j["null_std"] = r.null_std;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["z"] = r.z ? Json(*r.z) : Json(nullptr);
    j["p_bound"] = r.p_bound;
    j["degenerate"] = r.degenerate;
    j["mean_erased_fraction"] = r.mean_erased_fraction;
    return j;
}

KeyValues parse_key_values(std::istream& in) {
    KeyValues out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (!out.emplace(key, value).second) throw ParseError("duplicate key '" + key + "'", line_no);
    }
    return out;
}

CostParams params_from_key_values(KeyValues& kv, CostParams base) {
    if (auto v = take(kv, "A"); !v.empty()) base.major_weight = parse_rational("A", v);
    if (auto v = take(kv, "c_A"); !v.empty()) base.major_link_cost = parse_rational("c_A", v);
    if (auto v = take(kv, "c_B"); !v.empty()) base.minor_link_cost = parse_rational("c_B", v);
    if (auto v = take(kv, "delta"); !v.empty()) base.delta = parse_rational("delta", v);
    if (auto v = take(kv, "tau"); !v.empty()) base.tau = parse_int("tau", v);
    if (auto v = take(kv, "Q"); !v.empty()) base.penalty = parse_rational("Q", v);
    if (auto v = take(kv, "mode"); !v.empty()) {
        if (v == "bare") {
            base.mode = CostMode::Bare;
        } else if (v == "reliable") {
            base.mode = CostMode::Reliable;
        } else {
            throw std::invalid_argument("mode: expected bare or reliable, got '" + v + "'");
        }
    }
    return base;
}

RunConfig run_config_from_key_values(KeyValues kv, std::uint64_t default_seed) {
    RunConfig cfg;
    DynamicsConfig& d = cfg.dynamics;
    d.params = params_from_key_values(kv);
    d.scheduler.seed = default_seed;

    const std::string n_a = take(kv, "n_A");
    const std::string n_b = take(kv, "n_B");
    if (n_a.empty() || n_b.empty()) throw std::invalid_argument("n_A and n_B are required");
    cfg.n_major = parse_count("n_A", n_a);
    cfg.n_minor = parse_count("n_B", n_b);

    if (auto v = take(kv, "rule"); !v.empty()) {
        if (v == "rule2a" || v == "2a") {
            d.rule = Rule::Rule2a;
        } else if (v == "rule2b" || v == "2b") {
            d.rule = Rule::Rule2b;
        } else {
            throw std::invalid_argument("rule: expected rule2a or rule2b, got '" + v + "'");
        }
    }
    if (auto v = take(kv, "transfers"); !v.empty()) d.transfers = parse_bool("transfers", v);
    if (auto v = take(kv, "preference"); !v.empty()) {
        if (v == "po1") {
            d.preference = Preference::EfficientPO1;
        } else if (v == "po2") {
            d.preference = Preference::CheapestEquivalentPO2;
        } else {
            throw std::invalid_argument("preference: expected po1 or po2, got '" + v + "'");
        }
    }
    if (auto v = take(kv, "pricing"); !v.empty()) {
        if (v == "efficient") {
            d.pricing = Pricing::Efficient;
        } else if (v == "strategic") {
            d.pricing = Pricing::Strategic;
        } else {
            throw std::invalid_argument("pricing: expected efficient or strategic, got '" + v + "'");
        }
    }
    if (auto v = take(kv, "scheduler"); !v.empty()) {
        if (v == "round_robin") {
            d.scheduler.kind = SchedulerKind::RoundRobin;
        } else if (v == "random") {
            d.scheduler.kind = SchedulerKind::UniformRandom;
        } else if (v == "scripted") {
            d.scheduler.kind = SchedulerKind::Scripted;
        } else {
            throw std::invalid_argument("scheduler: expected round_robin, random or scripted, got '" + v + "'");
        }
    }
    if (auto v = take(kv, "seed"); !v.empty()) d.scheduler.seed = parse_count("seed", v);
    if (auto v = take(kv, "arrival_order"); !v.empty()) d.scheduler.arrival_order = parse_ids("arrival_order", v);
    if (auto v = take(kv, "turns"); !v.empty()) d.scheduler.turns = parse_ids("turns", v);
    if (auto v = take(kv, "interleave"); !v.empty()) d.scheduler.interleave = parse_count("interleave", v);
    if (auto v = take(kv, "max_rounds"); !v.empty()) d.max_rounds = parse_int("max_rounds", v);
    if (auto v = take(kv, "turn_budget"); !v.empty()) d.turn_budget = parse_count("turn_budget", v);
    if (auto v = take(kv, "replicas"); !v.empty()) cfg.replicas = parse_count("replicas", v);
    if (auto v = take(kv, "jobs"); !v.empty()) cfg.jobs = static_cast<unsigned>(parse_count("jobs", v));
    cfg.trace_path = take(kv, "trace");

    if (!kv.empty()) throw std::invalid_argument("unknown config key '" + kv.begin()->first + "'");
    if (d.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    if (cfg.replicas < 1) throw std::invalid_argument("replicas must be at least 1");
    if (cfg.n_major + cfg.n_minor == 0) throw std::invalid_argument("the game needs at least one player");
    d.params.validate(cfg.n_major + cfg.n_minor);
    return cfg;
}

KeyValues resolved(const RunConfig& cfg) {
    const DynamicsConfig& d = cfg.dynamics;
    const std::size_t n = cfg.n_major + cfg.n_minor;
    KeyValues kv;
    kv["A"] = d.params.major_weight.str();
    kv["c_A"] = d.params.major_link_cost.str();
    kv["c_B"] = d.params.minor_link_cost.str();
    kv["delta"] = d.params.delta.str();
    kv["tau"] = std::to_string(d.params.tau);
    kv["Q"] = d.params.penalty_for(n).str();
    kv["mode"] = to_string(d.params.mode);
    kv["n_A"] = std::to_string(cfg.n_major);
    kv["n_B"] = std::to_string(cfg.n_minor);
    kv["rule"] = to_string(d.rule);
    kv["transfers"] = d.transfers ? "true" : "false";
    kv["preference"] = to_string(d.preference);
    kv["pricing"] = to_string(d.pricing);
    kv["scheduler"] = to_string(d.scheduler.kind);
    kv["seed"] = std::to_string(d.scheduler.seed);
    kv["interleave"] = std::to_string(d.scheduler.interleave);
    kv["max_rounds"] = std::to_string(d.max_rounds);
    kv["turn_budget"] = std::to_string(d.turn_budget > 0 ? d.turn_budget : 2 * n);
    kv["replicas"] = std::to_string(cfg.replicas);
    if (!d.scheduler.arrival_order.empty()) kv["arrival_order"] = join_ids(d.scheduler.arrival_order);
    if (!d.scheduler.turns.empty()) kv["turns"] = join_ids(d.scheduler.turns);
    if (!cfg.trace_path.empty()) kv["trace"] = cfg.trace_path;
    return kv;
}

}  // namespace netform
