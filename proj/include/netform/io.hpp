#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "netform/dynamics.hpp"
#include "netform/equilibrium.hpp"
#include "netform/topology.hpp"

namespace netform {

using Json = nlohmann::ordered_json;

std::string version();

/// Rationals travel as "p/q" strings (integers without the denominator).
Json rational_json(const Rational& r);
Json params_json(const CostParams& p, std::size_t n_players);
Json network_json(const Network& net);
/// Accepts {"classes": "AABB", "edges": [[0,1], ...]} or {"graph6": ..., "classes": ...}.
Network network_from_json(const Json& j);

Json stability_json(const StabilityReport& report);
Json price_report_json(const PriceReport& report);
Json reliability_json(const ReliabilityReport& report);
Json phase_json(const PhaseCoords& phase);
Json turn_json(const TurnRecord& turn);
Json motif_json(const MotifReport& report);

/// Flat "key = value" document; '#' starts a comment. Throws ParseError.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);

/// Reads A, c_A, c_B, delta, tau, Q, mode from `kv`, removing the keys it
/// consumed. Missing keys keep the defaults in `base`.
CostParams params_from_key_values(KeyValues& kv, CostParams base = {});

struct RunConfig {
    DynamicsConfig dynamics;
    std::size_t n_major = 0;
    std::size_t n_minor = 0;
    std::size_t replicas = 1;  ///< seeds seed, seed+1, ...
    unsigned jobs = 1;
    std::string trace_path;  ///< empty: no trace file
};

/// Unknown keys, bad values and max_rounds < 1 throw std::invalid_argument.
RunConfig run_config_from_key_values(KeyValues kv, std::uint64_t default_seed);
/// Every setting with defaults resolved, in a fixed order.
KeyValues resolved(const RunConfig& cfg);

}  // namespace netform
