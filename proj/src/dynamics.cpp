#include "netform/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

#include "netform/errors.hpp"

namespace netform {

namespace {

const Rational kZero(0);

Rational max_r(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min_r(const Rational& a, const Rational& b) { return b < a ? b : a; }

// Cost lookups on a live state. Candidate links are toggled in place and
// reverted, which is much cheaper than copying the network per candidate.
class Scan {
public:
    Scan(GameState& state, const CostParams& p) : state_(state), p_(p), base_(state.net.size()) {}

    const Rational& cost(PlayerId v) {
        if (!base_[v]) base_[v] = node_cost(state_.net, p_, v, &state_.joined).total;
        return *base_[v];
    }

    Rational delta(PlayerId v, PlayerId a, PlayerId b) {
        const Rational before = cost(v);
        const bool present = state_.net.has_edge(a, b);
        if (present) {
            state_.net.remove_edge(a, b);
        } else {
            state_.net.add_edge(a, b);
        }
        const Rational after = node_cost(state_.net, p_, v, &state_.joined).total;
        if (present) {
            state_.net.add_edge(a, b);
        } else {
            state_.net.remove_edge(a, b);
        }
        return after - before;
    }

private:
    GameState& state_;
    const CostParams& p_;
    std::vector<std::optional<Rational>> base_;
};

struct AddCandidate {
    PlayerId j = 0;
    Rational d_i;
    std::optional<Rational> d_j;
    Rational quote;
    Rational net;
    bool accepted = false;
};

std::vector<AddCandidate> addition_candidates(Scan& scan, const GameState& state, PlayerId i) {
    std::vector<AddCandidate> out;
    for (PlayerId j = 0; j < state.net.size(); ++j) {
        if (j == i || !state.joined[j] || state.net.has_edge(i, j)) continue;
        AddCandidate c;
        c.j = j;
        c.d_i = scan.delta(i, i, j);
        out.push_back(std::move(c));
    }
    return out;
}

void fill_counterparty(Scan& scan, AddCandidate& c, PlayerId i) {
    if (!c.d_j) c.d_j = scan.delta(c.j, i, c.j);
}

// d_i(j*) + P* over the links the payer could afford to form at the efficient
// price; empty when no link is viable.
std::optional<Rational> strategic_base(const std::vector<AddCandidate>& cands) {
    const AddCandidate* star = nullptr;
    for (const auto& c : cands) {
        if (!c.d_j) continue;
        const Rational fair = max_r(*c.d_j, kZero);
        if (!(c.d_i + fair < kZero) || !accepts(*c.d_j, fair, true)) continue;
        if (star == nullptr || star->d_i < c.d_i) star = &c;
    }
    if (star == nullptr) return std::nullopt;
    return star->d_i + max_r(*star->d_j, kZero);
}

Rational quote_for(const AddCandidate& c, Pricing pricing, const std::optional<Rational>& base) {
    const Rational fair = max_r(*c.d_j, kZero);
    if (pricing == Pricing::Efficient || !base) return fair;
    return max_r(fair, *base - c.d_i);
}

// Picks the addition the actor would propose, or none.
std::optional<AddCandidate> pick_addition(Scan& scan, std::vector<AddCandidate> cands, PlayerId i,
                                          const DynamicsConfig& cfg, Rng& rng) {
    if (!cfg.transfers) {
        std::stable_sort(cands.begin(), cands.end(),
                         [](const AddCandidate& a, const AddCandidate& b) { return a.d_i < b.d_i; });
        for (auto& c : cands) {
            if (!(c.d_i < kZero)) break;
            fill_counterparty(scan, c, i);
            if (accepts(*c.d_j, kZero, false)) {
                c.accepted = true;
                c.net = c.d_i;
                return c;
            }
        }
        return std::nullopt;
    }

    // A payment is never negative, so only links the actor gains from can end
    // with a negative net.
    for (auto& c : cands) {
        if (c.d_i < kZero) fill_counterparty(scan, c, i);
    }
    const auto base = cfg.pricing == Pricing::Strategic ? strategic_base(cands) : std::nullopt;
    std::vector<AddCandidate> viable;
    for (auto& c : cands) {
        if (!c.d_j) continue;
        c.quote = quote_for(c, cfg.pricing, base);
        c.net = c.d_i + c.quote;
        c.accepted = accepts(*c.d_j, c.quote, true);
        if (c.accepted && c.net < kZero) viable.push_back(c);
    }
    if (viable.empty()) return std::nullopt;

    if (cfg.preference == Preference::EfficientPO1) {
        auto objective = [](const AddCandidate& c) { return c.d_i + min_r(*c.d_j, kZero); };
        const AddCandidate* best = &viable.front();
        for (const auto& c : viable) {
            if (objective(c) < objective(*best)) best = &c;
        }
        return *best;
    }

    std::vector<const AddCandidate*> ties;
    for (const auto& c : viable) {
        if (ties.empty() || c.net < ties.front()->net || (c.net == ties.front()->net && c.quote < ties.front()->quote)) {
            ties.assign(1, &c);
        } else if (c.net == ties.front()->net && c.quote == ties.front()->quote) {
            ties.push_back(&c);
        }
    }
    return *ties[ties.size() == 1 ? 0 : rng.below(ties.size())];
}

std::optional<Move> best_move(GameState& state, PlayerId i, const DynamicsConfig& cfg, Rng& rng) {
    Scan scan(state, cfg.params);
    std::optional<Move> removal;
    const std::vector<PlayerId> neighbors = state.net.neighbors(i);
    for (PlayerId j : neighbors) {
        Rational d = scan.delta(i, i, j);
        if (cfg.transfers) d += state.payment(j, i) - state.payment(i, j);
        if (d < kZero && (!removal || d < removal->actor_delta)) {
            removal = Move{make_edge(i, j), EdgeAction::Remove, i, j, kZero, d, kZero};
        }
    }
    auto addition = pick_addition(scan, addition_candidates(scan, state, i), i, cfg, rng);

    if (removal && (!addition || !(addition->net < removal->actor_delta))) {
        removal->counterparty_delta = scan.delta(removal->counterparty, i, removal->counterparty);
        return removal;
    }
    if (addition) {
        return Move{make_edge(i, addition->j), EdgeAction::Add, i, addition->j, cfg.transfers ? addition->quote : kZero,
                    addition->net, *addition->d_j};
    }
    return std::nullopt;
}

void apply_move(GameState& state, const Move& m) {
    if (m.action == EdgeAction::Add) {
        state.add_link(m.actor, m.counterparty, m.payment);
    } else {
        state.remove_link(m.edge.u, m.edge.v);
    }
}

Rational objective(const GameState& state, const CostParams& p, PlayerId i) {
    return node_cost(state, p, i).total + state.net_transfer(i);
}

// Applies strictly improving moves until none is left; true when the budget
// cut the turn short.
bool local_greedy(GameState& state, PlayerId i, const DynamicsConfig& cfg, Rng& rng, std::size_t budget,
                  std::vector<Move>& moves) {
    while (true) {
        auto m = best_move(state, i, cfg, rng);
        if (!m) return false;
        if (moves.size() >= budget) return true;
        apply_move(state, *m);
        moves.push_back(std::move(*m));
    }
}

std::size_t turn_budget(const DynamicsConfig& cfg, const GameState& state) {
    return cfg.turn_budget > 0 ? cfg.turn_budget : 2 * state.net.size();
}

Rational region_sign_value(const CostParams& p, std::size_t s, std::size_t l, std::size_t d, std::size_t m_a,
                           bool hub_linked) {
    const Rational a = p.major_weight;
    const Rational pull = -a * Rational(static_cast<std::int64_t>(1 + m_a) - static_cast<std::int64_t>(d));
    const Rational star = Rational(1) + Rational(static_cast<std::int64_t>(s)) - Rational(static_cast<std::int64_t>(l));
    return hub_linked ? pull + star : pull + Rational(2) * star;
}

int region_of(const Rational& term1, const Rational& term2) {
    const bool t1 = !(term1 < kZero);
    const bool t2 = term2 > kZero;
    if (t1 && !t2) return 1;
    if (!t1 && t2) return 3;
    if (t1 && t2) return 4;
    return 2;
}

std::size_t minor_neighbors(const GameState& state, PlayerId v) {
    std::size_t count = 0;
    for (PlayerId w : state.net.neighbors(v)) count += (state.joined[w] && !state.net.is_major(w)) ? 1 : 0;
    return count;
}

bool joined_major_clique(const GameState& state) {
    for (PlayerId a = 0; a < state.net.size(); ++a) {
        if (!state.joined[a] || !state.net.is_major(a)) continue;
        for (PlayerId b = a + 1; b < state.net.size(); ++b) {
            if (state.joined[b] && state.net.is_major(b) && !state.net.has_edge(a, b)) return false;
        }
    }
    return true;
}

}  // namespace

bool accepts(const Rational& counterparty_delta, const Rational& payment, bool transfers) {
    if (!transfers) return counterparty_delta < kZero;
    const Rational net = counterparty_delta - payment;
    return net < kZero || (payment > kZero && net == kZero);
}

bool greedy_accept(const GameState& state, const CostParams& p, PlayerId counterparty, Edge edge,
                   const Rational& payment, bool transfers) {
    if (edge.u != counterparty && edge.v != counterparty) {
        throw std::invalid_argument("counterparty is not an endpoint of the edge");
    }
    const Rational d = delta_cost(state.net, p, counterparty, edge, EdgeAction::Add, &state.joined);
    return accepts(d, payment, transfers);
}

Rational price_quote(const GameState& state, const CostParams& p, PlayerId payer, PlayerId payee, Pricing pricing) {
    state.net.check_node(payer);
    state.net.check_node(payee);
    if (state.net.has_edge(payer, payee)) throw StateError("link already exists");
    GameState work = state;
    Scan scan(work, p);
    auto cands = addition_candidates(scan, work, payer);
    for (auto& c : cands) {
        if (pricing == Pricing::Strategic || c.j == payee) fill_counterparty(scan, c, payer);
    }
    const auto base = pricing == Pricing::Strategic ? strategic_base(cands) : std::nullopt;
    for (const auto& c : cands) {
        if (c.j == payee) return quote_for(c, pricing, base);
    }
    throw StateError("payee has not joined");
}

std::optional<PartnerChoice> choose_partner(const GameState& state, const CostParams& p, PlayerId player,
                                            Preference preference, Pricing pricing, Rng& rng) {
    DynamicsConfig cfg;
    cfg.params = p;
    cfg.transfers = true;
    cfg.preference = preference;
    cfg.pricing = pricing;
    GameState work = state;
    Scan scan(work, p);
    auto pick = pick_addition(scan, addition_candidates(scan, work, player), player, cfg, rng);
    if (!pick) return std::nullopt;
    return PartnerChoice{pick->j, pick->quote, pick->d_i, *pick->d_j};
}

TurnOutcome play_turn(GameState& state, PlayerId player, const DynamicsConfig& cfg, Rng& rng) {
    state.net.check_node(player);
    if (!state.joined[player]) throw StateError("player " + std::to_string(player) + " has not joined");
    const std::size_t budget = turn_budget(cfg, state);
    TurnOutcome out;

    if (cfg.rule == Rule::Rule2b || state.net.degree(player) == 0) {
        out.budget_hit = local_greedy(state, player, cfg, rng, budget, out.moves);
        return out;
    }

    // Rule 2a: compare staying put and improving locally against dropping
    // every link first and rebuilding from the disconnected position.
    const Rational start = objective(state, cfg.params, player);

    GameState local = state;
    Rng local_rng = rng;
    std::vector<Move> local_moves;
    const bool local_hit = local_greedy(local, player, cfg, local_rng, budget, local_moves);

    GameState rebuilt = state;
    Rng rebuilt_rng = rng;
    std::vector<Move> rebuilt_moves;
    const std::vector<PlayerId> neighbors = state.net.neighbors(player);
    for (PlayerId j : neighbors) {
        Scan scan(rebuilt, cfg.params);
        Rational d = scan.delta(player, player, j);
        if (cfg.transfers) d += rebuilt.payment(j, player) - rebuilt.payment(player, j);
        const Rational dj = scan.delta(j, player, j);
        Move m{make_edge(player, j), EdgeAction::Remove, player, j, kZero, d, dj};
        apply_move(rebuilt, m);
        rebuilt_moves.push_back(std::move(m));
    }
    bool rebuilt_hit = rebuilt_moves.size() >= budget;
    if (!rebuilt_hit) rebuilt_hit = local_greedy(rebuilt, player, cfg, rebuilt_rng, budget, rebuilt_moves);

    const Rational local_end = objective(local, cfg.params, player);
    const Rational rebuilt_end = objective(rebuilt, cfg.params, player);
    if (rebuilt_end < local_end && rebuilt_end < start) {
        state = std::move(rebuilt);
        rng = rebuilt_rng;
        out.moves = std::move(rebuilt_moves);
        out.budget_hit = rebuilt_hit;
    } else if (!local_moves.empty()) {
        state = std::move(local);
        rng = local_rng;
        out.moves = std::move(local_moves);
        out.budget_hit = local_hit;
    }
    return out;
}

PhaseCoords classify_phase(const GameState& state, const CostParams& p) {
    PhaseCoords out;
    const Network& net = state.net;
    std::optional<PlayerId> x;
    std::size_t x_deg = 0;
    std::size_t m_a = 0;
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (!state.joined[v]) continue;
        if (net.is_major(v)) {
            ++m_a;
            continue;
        }
        const std::size_t deg = minor_neighbors(state, v);
        if (!x || deg > x_deg) {
            x = v;
            x_deg = deg;
        }
    }
    if (!x) return out;
    out.star_center = x;
    for (PlayerId a : state.arrival_order) {
        if (net.is_major(a) && minor_neighbors(state, a) > 0) {
            out.hub = a;
            break;
        }
    }
    out.hub_linked_to_center = out.hub && net.has_edge(*out.hub, *x);

    bool fits = joined_major_clique(state);
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (!state.joined[v] || v == *x) continue;
        if (net.is_major(v)) {
            out.d_size += net.has_edge(v, *x) ? 1 : 0;
            continue;
        }
        const auto& nb = net.neighbors(v);
        if (nb.size() != 1 || (nb[0] != *x && (!out.hub || nb[0] != *out.hub))) {
            fits = false;
        } else if (nb[0] == *x) {
            ++out.s_size;
        } else {
            ++out.l_size;
        }
    }
    out.term1 = p.major_link_cost - Rational(static_cast<std::int64_t>(out.s_size)) - Rational(1);
    out.term2 = region_sign_value(p, out.s_size, out.l_size, out.d_size, m_a, out.hub_linked_to_center);
    if (fits) {
        out.classified = true;
        out.region = region_of(*out.term1, *out.term2);
    }
    return out;
}

PhaseCoords classify_reliable_phase(const GameState& state, const CostParams& p) {
    PhaseCoords out;
    if (p.mode != CostMode::Reliable || p.tau != 1) return out;
    const Network& net = state.net;

    auto best_of = [&](bool major, std::optional<PlayerId> skip, bool need_positive) {
        std::optional<PlayerId> best;
        std::size_t best_deg = 0;
        for (PlayerId v = 0; v < net.size(); ++v) {
            if (!state.joined[v] || net.is_major(v) != major || v == skip) continue;
            const std::size_t deg = minor_neighbors(state, v);
            if (need_positive && deg == 0) continue;
            if (!best || deg > best_deg) {
                best = v;
                best_deg = deg;
            }
        }
        return best;
    };
    out.star_center = best_of(false, std::nullopt, true);
    if (out.star_center) out.second_center = best_of(false, out.star_center, true);
    out.hub = best_of(true, std::nullopt, false);
    if (out.hub) out.second_hub = best_of(true, out.hub, false);

    auto linked = [&](PlayerId v, const std::optional<PlayerId>& w) { return w && net.has_edge(v, *w); };
    std::size_t minors = 0;
    bool fits = joined_major_clique(state);
    for (PlayerId v = 0; v < net.size(); ++v) {
        if (!state.joined[v]) continue;
        if (net.is_major(v)) {
            out.d_size += linked(v, out.star_center) ? 1 : 0;
            out.d2_size += linked(v, out.second_center) ? 1 : 0;
            continue;
        }
        ++minors;
        if (v == out.star_center || v == out.second_center) continue;
        const bool in_s1 = linked(v, out.star_center);
        const bool in_s2 = linked(v, out.second_center);
        const bool in_l = linked(v, out.hub) && linked(v, out.second_hub);
        out.s_size += in_s1 ? 1 : 0;
        out.s2_size += in_s2 ? 1 : 0;
        out.l_size += in_l ? 1 : 0;
        if (!in_s1 && !in_s2 && !in_l) fits = false;
        for (PlayerId w : net.neighbors(v)) {
            const bool allowed = w == out.star_center || w == out.second_center || net.is_major(w);
            if (!allowed) fits = false;
        }
    }
    out.classified = fits && minors > 0;
    return out;
}

Prediction convergence_prediction(const CostParams& p, const std::vector<PlayerClass>& arrival_history) {
    std::size_t k = 0;
    while (k < arrival_history.size() && arrival_history[k] == PlayerClass::MinorB) ++k;
    std::size_t k_a = 0;
    while (k + k_a < arrival_history.size() && arrival_history[k + k_a] == PlayerClass::MajorA) ++k_a;
    std::int64_t t_a = 0;
    std::int64_t t_b = 0;
    for (PlayerClass c : arrival_history) (c == PlayerClass::MajorA ? t_a : t_b) += 1;

    const Rational a = p.major_weight;
    const auto kk = static_cast<std::int64_t>(k);
    const auto ka = static_cast<std::int64_t>(k_a);
    const Rational initial = a * Rational(ka);
    const Rational final_pull = a * Rational(t_a);
    if (initial > Rational(kk + 1) || final_pull > Rational(t_b)) return Prediction::Optimal;
    if (initial < Rational(kk + 1) && final_pull < Rational(t_b) && kk > 0) {
        // The first k minors form a star (k - 1 leaves), then the k_A majors
        // all attach to its center.
        const Rational term1 = p.major_link_cost - Rational(kk - 1) - Rational(1);
        const Rational term2 = region_sign_value(p, static_cast<std::size_t>(kk - 1), 0, k_a, k_a, true);
        if (region_of(term1, term2) == 3) return Prediction::PromotedStar;
    }
    return Prediction::Indeterminate;
}

RunResult run_game(const DynamicsConfig& cfg, std::size_t n_major, std::size_t n_minor) {
    const std::size_t n = n_major + n_minor;
    if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    if (n == 0) throw std::invalid_argument("a game needs at least one player");
    cfg.params.validate(n);

    RunResult result;
    result.state = GameState(Network(n_major, n_minor), false);
    result.trace.n_major = n_major;
    result.trace.n_minor = n_minor;
    GameState& state = result.state;
    Rng schedule(derive_seed(cfg.scheduler.seed, 0));
    Rng ties(derive_seed(cfg.scheduler.seed, 1));

    std::vector<PlayerId> arrivals;
    std::vector<bool> listed(n, false);
    if (cfg.scheduler.kind == SchedulerKind::Scripted) {
        for (PlayerId v : cfg.scheduler.arrival_order) {
            if (v >= n || listed[v]) throw std::invalid_argument("scripted arrival order has a bad or repeated id");
            listed[v] = true;
            arrivals.push_back(v);
        }
    }
    for (PlayerId v = 0; v < n; ++v) {
        if (!listed[v]) arrivals.push_back(v);
    }
    if (cfg.scheduler.kind == SchedulerKind::UniformRandom) schedule.shuffle(arrivals);

    auto play = [&](PlayerId actor, bool arrival, int round) {
        if (arrival) state.join(actor);
        TurnOutcome outcome = play_turn(state, actor, cfg, ties);
        TurnRecord rec;
        rec.turn = result.trace.turns.size();
        rec.round = round;
        rec.actor = actor;
        rec.arrival = arrival;
        rec.budget_hit = outcome.budget_hit;
        rec.moves = std::move(outcome.moves);
        rec.social_cost = social_cost(state.net, cfg.params, &state.joined);
        rec.phase = cfg.params.mode == CostMode::Reliable ? classify_reliable_phase(state, cfg.params)
                                                          : classify_phase(state, cfg.params);
        result.budget_hit = result.budget_hit || rec.budget_hit;
        const std::size_t moved = rec.moves.size();
        state.turn = rec.turn + 1;
        result.trace.turns.push_back(std::move(rec));
        return moved;
    };

    std::size_t next_arrival = 0;
    if (cfg.scheduler.kind == SchedulerKind::Scripted) {
        for (PlayerId v : cfg.scheduler.turns) {
            if (v >= n) throw std::invalid_argument("scripted turn names an unknown player");
            if (state.joined[v]) {
                play(v, false, 0);
                continue;
            }
            if (next_arrival >= arrivals.size() || arrivals[next_arrival] != v) {
                throw std::invalid_argument("scripted turn for player " + std::to_string(v) +
                                            " comes before its arrival");
            }
            ++next_arrival;
            play(v, true, 0);
        }
    }
    std::size_t cursor = 0;
    for (; next_arrival < arrivals.size(); ++next_arrival) {
        const PlayerId newcomer = arrivals[next_arrival];
        play(newcomer, true, 0);
        if (cfg.scheduler.kind == SchedulerKind::Scripted) continue;
        for (std::size_t k = 0; k < cfg.scheduler.interleave; ++k) {
            std::vector<PlayerId> others;
            for (PlayerId v = 0; v < n; ++v) {
                if (state.joined[v] && v != newcomer) others.push_back(v);
            }
            if (others.empty()) break;
            PlayerId pick = 0;
            if (cfg.scheduler.kind == SchedulerKind::UniformRandom) {
                pick = others[schedule.below(others.size())];
            } else {
                auto it = std::lower_bound(others.begin(), others.end(), static_cast<PlayerId>(cursor));
                pick = it == others.end() ? others.front() : *it;
                cursor = pick + 1;
            }
            play(pick, false, 0);
        }
    }

    std::vector<PlayerId> order(n);
    for (PlayerId v = 0; v < n; ++v) order[v] = v;
    for (int round = 1; round <= cfg.max_rounds; ++round) {
        if (cfg.scheduler.kind == SchedulerKind::UniformRandom) schedule.shuffle(order);
        std::size_t moved = 0;
        for (PlayerId v : order) moved += play(v, false, round);
        result.rounds = round;
        if (moved == 0) {
            result.converged = true;
            break;
        }
        ++result.active_rounds;
    }
    return result;
}

GameState replay(const Trace& trace) {
    GameState state(Network(trace.n_major, trace.n_minor), false);
    for (const auto& rec : trace.turns) {
        if (rec.arrival) state.join(rec.actor);
        for (const auto& m : rec.moves) apply_move(state, m);
        state.turn = rec.turn + 1;
    }
    return state;
}

std::string to_string(Rule rule) { return rule == Rule::Rule2a ? "rule2a" : "rule2b"; }

std::string to_string(Preference preference) {
    return preference == Preference::EfficientPO1 ? "po1" : "po2";
}

std::string to_string(Pricing pricing) { return pricing == Pricing::Efficient ? "efficient" : "strategic"; }

std::string to_string(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::RoundRobin: return "round_robin";
        case SchedulerKind::UniformRandom: return "random";
        case SchedulerKind::Scripted: return "scripted";
    }
    return "unknown";
}

std::string to_string(Prediction prediction) {
    switch (prediction) {
        case Prediction::Optimal: return "optimal";
        case Prediction::PromotedStar: return "promoted_star";
        case Prediction::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

}  // namespace netform
