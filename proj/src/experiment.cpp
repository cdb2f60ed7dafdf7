#include "alec/experiment.hpp"

#include <cstdio>

#include "alec/config_io.hpp"

namespace alec {

namespace {

std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s;
    for (std::uint64_t k = 1; k <= 10; ++k) s.push_back(k);
    return s;
}

nlohmann::json scheme(const char* policy, const char* relay = nullptr, int r_t = 0) {
    nlohmann::json o;
    o["policy"] = policy;
    if (relay) o["relay"] = relay;
    if (r_t > 0) o["r_t"] = r_t;
    return o;
}

std::vector<double> linspace_int(int lo, int hi) {
    std::vector<double> v;
    for (int x = lo; x <= hi; ++x) v.push_back(static_cast<double>(x));
    return v;
}

ExperimentSpec base_spec(const std::string& name) {
    ExperimentSpec spec;
    spec.name = name;
    spec.base = SimConfig{};
    spec.base.uplink = ChannelConfig{ChannelKind::Bernoulli, 0.7, 0.25, 0.5};
    spec.seeds = default_seeds();
    return spec;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"fig-dfr-bernoulli", "fig-dfr-vs-b",      "fig-dfr-vs-nfd",
            "fig-dfr-vs-lm",     "fig-relay-bernoulli", "fig-relay-ge",
            "fig-dfr-vs-rt",     "fig-dfr-vs-rm"};
}

ExperimentSpec make_preset(const std::string& name) {
    ExperimentSpec spec = base_spec(name);
    if (name == "fig-dfr-bernoulli") {
        spec.axes = {{"uplink.p_s", {0.5, 0.6, 0.7, 0.8, 0.9}},
                     {"p_fb", {0.25, 0.75}}};
        spec.schemes = {{"RR", scheme("rr")},
                        {"WC", scheme("wc")},
                        {"IWC", scheme("iwc")},
                        {"IWC-MF", scheme("iwc-mf")}};
        return spec;
    }
    if (name == "fig-dfr-vs-b") {
        spec.axes = {{"b", linspace_int(2, 8)}};
        spec.schemes = {{"RR", scheme("rr")},
                        {"WC", scheme("wc")},
                        {"IWC", scheme("iwc")},
                        {"IWC-MF", scheme("iwc-mf")}};
        return spec;
    }
    if (name == "fig-dfr-vs-nfd") {
        spec.axes = {{"d_nf", linspace_int(1, 8)}, {"uplink.p_s", {0.5, 0.7, 0.9}}};
        spec.schemes = {{"IWC", scheme("iwc")}, {"IWC-MF", scheme("iwc-mf")}};
        return spec;
    }
    if (name == "fig-dfr-vs-lm") {
        spec.axes = {{"l_m", {2, 4, 6, 8, 10, 12, 14, 16}}};
        spec.schemes = {{"IWC", scheme("iwc")}, {"IWC-MF", scheme("iwc-mf")}};
        return spec;
    }
    if (name == "fig-relay-bernoulli") {
        spec.axes = {{"uplink.p_s", {0.5, 0.6, 0.7, 0.8, 0.9}}};
        spec.schemes = {{"IWC", scheme("iwc")},
                        {"UC-R", scheme("iwc", "uc-r")},
                        {"IWC-R", scheme("iwc", "iwc-r", 2)}};
        return spec;
    }
    if (name == "fig-relay-ge") {
        spec.base.uplink = ChannelConfig{ChannelKind::GilbertElliott, 0.7, 0.25, 0.5};
        spec.axes = {{"uplink.p_bg", {0.5, 0.6, 0.7, 0.8, 0.9}}};
        spec.schemes = {{"RR", scheme("rr")},
                        {"IWC", scheme("iwc")},
                        {"IWC-MF", scheme("iwc-mf")},
                        {"UC-R", scheme("iwc", "uc-r")},
                        {"IWC-R", scheme("iwc", "iwc-r", 5)}};
        return spec;
    }
    if (name == "fig-dfr-vs-rt") {
        spec.base.uplink = ChannelConfig{ChannelKind::GilbertElliott, 0.7, 0.25, 0.5};
        spec.axes = {{"r_t", linspace_int(1, 16)}, {"uplink.p_bg", {0.5, 0.8}}};
        spec.schemes = {{"IWC-R", scheme("iwc", "iwc-r")},
                        {"UC-R", scheme("iwc", "uc-r")}};
        return spec;
    }
    if (name == "fig-dfr-vs-rm") {
        spec.base.uplink = ChannelConfig{ChannelKind::GilbertElliott, 0.7, 0.25, 0.5};
        spec.axes = {{"r_m", linspace_int(5, 16)}};
        spec.schemes = {{"IWC-R (r_t=5)", scheme("iwc", "iwc-r", 5)},
                        {"IWC-R (r_t=10)", scheme("iwc", "iwc-r", 10)},
                        {"UC-R", scheme("iwc", "uc-r")}};
        return spec;
    }
    throw ConfigError("unknown preset: " + name);
}

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    try {
        spec.name = j.value("name", "experiment");
        spec.base = j.contains("base") ? config_from_json(j.at("base")) : SimConfig{};
        if (j.contains("sweep"))
            for (const auto& [key, values] : j.at("sweep").items()) {
                SweepAxis axis{key, {}};
                for (const auto& v : values) axis.values.push_back(v.get<double>());
                spec.axes.push_back(std::move(axis));
            }
        if (j.contains("schemes"))
            for (const auto& s : j.at("schemes")) {
                SchemeSpec sc;
                sc.name = s.at("name").get<std::string>();
                sc.overlay = s;
                sc.overlay.erase("name");
                spec.schemes.push_back(std::move(sc));
            }
        if (j.contains("seeds"))
            for (const auto& s : j.at("seeds")) spec.seeds.push_back(s.get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment file: ") + e.what());
    }
    if (spec.schemes.empty())
        spec.schemes.push_back({to_string(spec.base.policy), nlohmann::json::object()});
    if (spec.seeds.empty()) spec.seeds = default_seeds();
    return spec;
}

namespace {

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

} // namespace

std::string run_experiment(const ExperimentSpec& spec, unsigned threads) {
    if (spec.schemes.empty()) throw ConfigError("experiment has no schemes");
    if (spec.seeds.empty()) throw ConfigError("experiment has no seeds");

    // Enumerate sweep points in axis-major order (first axis outermost).
    std::vector<std::vector<double>> points;
    std::vector<double> current;
    auto expand = [&](auto&& self, std::size_t axis) -> void {
        if (axis == spec.axes.size()) {
            points.push_back(current);
            return;
        }
        for (double v : spec.axes[axis].values) {
            current.push_back(v);
            self(self, axis + 1);
            current.pop_back();
        }
    };
    expand(expand, 0);

    const nlohmann::json base_json = config_to_json(spec.base);
    std::vector<SimConfig> grid;
    grid.reserve(points.size() * spec.schemes.size());
    for (const auto& point : points) {
        for (const auto& sc : spec.schemes) {
            nlohmann::json j = base_json;
            for (const auto& [key, value] : sc.overlay.items()) j[key] = value;
            for (std::size_t a = 0; a < spec.axes.size(); ++a)
                apply_field(j, spec.axes[a].key, point[a]);
            grid.push_back(config_from_json(j));
        }
    }

    const auto rows = sweep(grid, spec.seeds, threads);

    std::string csv = "scheme";
    for (const auto& axis : spec.axes) csv += "," + axis.key;
    csv += ",mean_dfr,ci_low,ci_high,seeds\n";
    std::string seed_list;
    for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
        if (k) seed_list += ';';
        seed_list += std::to_string(spec.seeds[k]);
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
            const auto& row = rows[p * spec.schemes.size() + s];
            csv += spec.schemes[s].name;
            for (double v : points[p]) csv += "," + format_number(v);
            csv += "," + format_number(row.mean_dfr);
            csv += "," + format_number(row.ci_low);
            csv += "," + format_number(row.ci_high);
            csv += "," + seed_list + "\n";
        }
    }
    return csv;
}

} // namespace alec
