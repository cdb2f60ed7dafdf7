#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "alec/sim.hpp"

namespace alec {

/// Configuration / usage errors that should surface as exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(PolicyKind policy);
std::string to_string(RelayPolicy relay);
PolicyKind policy_from_string(const std::string& s);
RelayPolicy relay_from_string(const std::string& s);

/// Emits every field explicitly, defaults included, so parse(dump(cfg)) is
/// the identity.
nlohmann::json config_to_json(const SimConfig& cfg);

/// Strict parse: unknown keys raise ConfigError naming the key; missing keys
/// take their defaults.
SimConfig config_from_json(const nlohmann::json& j);

/// Applies `value` to a config field addressed by key. Accepts the scalar
/// SimConfig keys plus dotted channel fields such as "uplink.p_s" or
/// "uplink.p_bg". ConfigError on unknown keys.
void apply_field(nlohmann::json& cfg_json, const std::string& key, double value);

} // namespace alec
