#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netform/cost.hpp"
#include "netform/game_state.hpp"
#include "netform/random.hpp"

namespace netform {

enum class Rule { Rule2a, Rule2b };
enum class Preference { EfficientPO1, CheapestEquivalentPO2 };
enum class Pricing { Efficient, Strategic };
enum class SchedulerKind { RoundRobin, UniformRandom, Scripted };

struct Scheduler {
    SchedulerKind kind = SchedulerKind::RoundRobin;
    std::uint64_t seed = 1;
    /// Scripted: players join in this order (ids missing from it join
    /// afterwards in id order).
    std::vector<PlayerId> arrival_order;
    /// Scripted: turns played before the regular rounds. A player's first
    /// entry is its arrival and must match the next id in arrival_order.
    std::vector<PlayerId> turns;
    /// Turns handed to already-joined players after each arrival (ignored by
    /// Scripted).
    std::size_t interleave = 1;
};

struct DynamicsConfig {
    CostParams params;
    Rule rule = Rule::Rule2b;
    bool transfers = false;
    Preference preference = Preference::EfficientPO1;
    Pricing pricing = Pricing::Efficient;
    Scheduler scheduler;
    int max_rounds = 50;
    /// Moves per turn; 0 means 2N.
    std::size_t turn_budget = 0;
};

struct Move {
    Edge edge;
    EdgeAction action = EdgeAction::Add;
    PlayerId actor = 0;
    PlayerId counterparty = 0;
    Rational payment;             ///< paid by the actor on Add
    Rational actor_delta;         ///< change of the actor's monetary cost
    Rational counterparty_delta;  ///< counterparty's cost change before payment
};

struct PhaseCoords {
    bool classified = false;
    std::optional<int> region;  ///< 1..4, bare template only
    std::optional<PlayerId> star_center;
    std::optional<PlayerId> hub;
    bool hub_linked_to_center = false;
    std::size_t s_size = 0;
    std::size_t l_size = 0;
    std::size_t d_size = 0;
    std::optional<Rational> term1;
    std::optional<Rational> term2;
    // Two-center template under survivability constraints.
    std::optional<PlayerId> second_center;
    std::optional<PlayerId> second_hub;
    std::size_t s2_size = 0;
    std::size_t d2_size = 0;
};

struct TurnRecord {
    std::size_t turn = 0;
    int round = 0;  ///< 0 while players are still arriving
    PlayerId actor = 0;
    bool arrival = false;
    std::vector<Move> moves;
    Rational social_cost;
    PhaseCoords phase;
    bool budget_hit = false;
};

struct Trace {
    std::size_t n_major = 0;
    std::size_t n_minor = 0;
    std::vector<TurnRecord> turns;
};

struct RunResult {
    GameState state;
    Trace trace;
    bool converged = false;
    int rounds = 0;         ///< post-arrival rounds played, including the quiet one
    int active_rounds = 0;  ///< post-arrival rounds with at least one move
    bool budget_hit = false;
};

/// Players 0..n_major-1 are majors, the rest minors.
RunResult run_game(const DynamicsConfig& cfg, std::size_t n_major, std::size_t n_minor);

struct TurnOutcome {
    std::vector<Move> moves;
    bool budget_hit = false;
};

/// Plays one full turn of `player` and applies its moves to `state`.
/// `rng` breaks ties among equivalent partners.
TurnOutcome play_turn(GameState& state, PlayerId player, const DynamicsConfig& cfg, Rng& rng);

/// Counterparty acceptance: its own change net of the payment must be
/// negative. With transfers a positive payment that exactly compensates the
/// loss is also accepted.
bool accepts(const Rational& counterparty_delta, const Rational& payment, bool transfers);
bool greedy_accept(const GameState& state, const CostParams& p, PlayerId counterparty, Edge edge,
                   const Rational& payment = Rational(0), bool transfers = false);

/// Price `payee` asks `payer` for a new link. Throws StateError if the edge
/// exists.
Rational price_quote(const GameState& state, const CostParams& p, PlayerId payer, PlayerId payee, Pricing pricing);

struct PartnerChoice {
    PlayerId partner = 0;
    Rational quote;
    Rational actor_delta;
    Rational counterparty_delta;
};

std::optional<PartnerChoice> choose_partner(const GameState& state, const CostParams& p, PlayerId player,
                                            Preference preference, Pricing pricing, Rng& rng);

PhaseCoords classify_phase(const GameState& state, const CostParams& p);
PhaseCoords classify_reliable_phase(const GameState& state, const CostParams& p);

enum class Prediction { Optimal, PromotedStar, Indeterminate };

/// Classes in arrival order, covering every player of the game.
Prediction convergence_prediction(const CostParams& p, const std::vector<PlayerClass>& arrival_history);

/// Rebuilds the final state from an empty game by applying the trace.
GameState replay(const Trace& trace);

std::string to_string(Rule rule);
std::string to_string(Preference preference);
std::string to_string(Pricing pricing);
std::string to_string(SchedulerKind kind);
std::string to_string(Prediction prediction);

}  // namespace netform
