#include "alec/config_io.hpp"

#include <set>

namespace alec {

std::string to_string(PolicyKind policy) {
    switch (policy) {
    case PolicyKind::RR: return "rr";
    case PolicyKind::WC: return "wc";
    case PolicyKind::IWC: return "iwc";
    case PolicyKind::IWC_MF: return "iwc-mf";
    }
    return "?";
}

std::string to_string(RelayPolicy relay) {
    return relay == RelayPolicy::UC_R ? "uc-r" : "iwc-r";
}

PolicyKind policy_from_string(const std::string& s) {
    if (s == "rr") return PolicyKind::RR;
    if (s == "wc") return PolicyKind::WC;
    if (s == "iwc") return PolicyKind::IWC;
    if (s == "iwc-mf" || s == "iwc_mf") return PolicyKind::IWC_MF;
    throw ConfigError("unknown policy: " + s);
}

RelayPolicy relay_from_string(const std::string& s) {
    if (s == "uc-r" || s == "uc_r") return RelayPolicy::UC_R;
    if (s == "iwc-r" || s == "iwc_r") return RelayPolicy::IWC_R;
    throw ConfigError("unknown relay policy: " + s);
}

namespace {

nlohmann::json channel_to_json(const ChannelConfig& ch) {
    return {{"kind", ch.kind == ChannelKind::Bernoulli ? "bernoulli" : "ge"},
            {"p_s", ch.p_s},
            {"p_gb", ch.p_gb},
            {"p_bg", ch.p_bg}};
}

ChannelConfig channel_from_json(const nlohmann::json& j, const std::string& where) {
    ChannelConfig ch;
    static const std::set<std::string> known = {"kind", "p_s", "p_gb", "p_bg"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key: " + where + "." + key);
    if (j.contains("kind")) {
        const std::string k = j.at("kind").get<std::string>();
        if (k == "bernoulli")
            ch.kind = ChannelKind::Bernoulli;
        else if (k == "ge" || k == "gilbert-elliott")
            ch.kind = ChannelKind::GilbertElliott;
        else
            throw ConfigError("unknown channel kind: " + k);
    }
    if (j.contains("p_s")) ch.p_s = j.at("p_s").get<double>();
    if (j.contains("p_gb")) ch.p_gb = j.at("p_gb").get<double>();
    if (j.contains("p_bg")) ch.p_bg = j.at("p_bg").get<double>();
    return ch;
}

} // namespace

nlohmann::json config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["policy"] = to_string(cfg.policy);
    j["relay"] = cfg.relay ? to_string(*cfg.relay) : "none";
    j["n"] = cfg.n;
    j["delta"] = cfg.delta;
    j["b"] = cfg.b;
    j["d_nf"] = cfg.d_nf;
    j["l_m"] = cfg.l_m;
    j["l_o"] = cfg.l_o;
    j["r_t"] = cfg.r_t;
    j["r_m"] = cfg.r_m;
    j["p_fb"] = cfg.p_fb;
    j["payload_bits"] = cfg.payload_bits;
    j["seed"] = cfg.seed;
    j["uplink"] = channel_to_json(cfg.uplink);
    j["source_relay"] =
        cfg.source_relay ? channel_to_json(*cfg.source_relay) : nlohmann::json();
    j["relay_dest"] = cfg.relay_dest ? channel_to_json(*cfg.relay_dest) : nlohmann::json();
    j["feedback_overhear"] =
        cfg.feedback_overhear ? channel_to_json(*cfg.feedback_overhear) : nlohmann::json();
    j["mf_exclude_confirmed"] = cfg.mf_exclude_confirmed;
    j["mf_aggressive_fill"] = cfg.mf_aggressive_fill;
    j["trace"] = cfg.trace_path ? nlohmann::json(*cfg.trace_path) : nlohmann::json();
    return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "policy", "relay", "n", "delta", "b", "d_nf", "l_m", "l_o", "r_t", "r_m",
        "p_fb", "payload_bits", "seed", "uplink", "source_relay", "relay_dest",
        "feedback_overhear", "mf_exclude_confirmed", "mf_aggressive_fill", "trace"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key: " + key);

    SimConfig cfg;
    try {
        if (j.contains("policy")) cfg.policy = policy_from_string(j.at("policy"));
        if (j.contains("relay")) {
            const std::string r = j.at("relay").get<std::string>();
            if (r == "none")
                cfg.relay.reset();
            else
                cfg.relay = relay_from_string(r);
        }
        if (j.contains("n")) cfg.n = j.at("n").get<std::int64_t>();
        if (j.contains("delta")) cfg.delta = j.at("delta").get<Seq>();
        if (j.contains("b")) cfg.b = j.at("b").get<int>();
        if (j.contains("d_nf")) cfg.d_nf = j.at("d_nf").get<int>();
        if (j.contains("l_m")) cfg.l_m = j.at("l_m").get<int>();
        if (j.contains("l_o")) cfg.l_o = j.at("l_o").get<int>();
        if (j.contains("r_t")) cfg.r_t = j.at("r_t").get<int>();
        if (j.contains("r_m")) cfg.r_m = j.at("r_m").get<int>();
        if (j.contains("p_fb")) cfg.p_fb = j.at("p_fb").get<double>();
        if (j.contains("payload_bits")) cfg.payload_bits = j.at("payload_bits").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("uplink")) cfg.uplink = channel_from_json(j.at("uplink"), "uplink");
        auto opt_channel = [&](const char* key) -> std::optional<ChannelConfig> {
            if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
            return channel_from_json(j.at(key), key);
        };
        cfg.source_relay = opt_channel("source_relay");
        cfg.relay_dest = opt_channel("relay_dest");
        cfg.feedback_overhear = opt_channel("feedback_overhear");
        if (j.contains("mf_exclude_confirmed"))
            cfg.mf_exclude_confirmed = j.at("mf_exclude_confirmed").get<bool>();
        if (j.contains("mf_aggressive_fill"))
            cfg.mf_aggressive_fill = j.at("mf_aggressive_fill").get<bool>();
        if (j.contains("trace") && !j.at("trace").is_null())
            cfg.trace_path = j.at("trace").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

void apply_field(nlohmann::json& cfg_json, const std::string& key, double value) {
    static const std::set<std::string> int_keys = {"n",   "delta", "b",   "d_nf", "l_m",
                                                   "l_o", "r_t",   "r_m", "payload_bits",
                                                   "seed"};
    static const std::set<std::string> real_keys = {"p_fb"};
    static const std::set<std::string> chan_keys = {"p_s", "p_gb", "p_bg"};
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
        const std::string head = key.substr(0, dot);
        const std::string tail = key.substr(dot + 1);
        if ((head == "uplink" || head == "source_relay" || head == "relay_dest" ||
             head == "feedback_overhear") &&
            chan_keys.count(tail)) {
            if (!cfg_json[head].is_object())
                cfg_json[head] = channel_to_json(ChannelConfig{});
            cfg_json[head][tail] = value;
            return;
        }
        throw ConfigError("unknown sweep field: " + key);
    }
    if (int_keys.count(key)) {
        cfg_json[key] = static_cast<std::int64_t>(value);
        return;
    }
    if (real_keys.count(key)) {
        cfg_json[key] = value;
        return;
    }
    throw ConfigError("unknown sweep field: " + key);
}

} // namespace alec
