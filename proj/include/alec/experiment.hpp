#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "alec/sim.hpp"

namespace alec {

struct SweepAxis {
    std::string key; // SimConfig field, e.g. "b", "p_fb", "uplink.p_s"
    std::vector<double> values;
};

/// One plotted curve: a display name plus a JSON overlay merged onto the
/// base config (typically the policy/relay selection and any per-scheme
/// parameter such as r_t).
struct SchemeSpec {
    std::string name;
    nlohmann::json overlay;
};

struct ExperimentSpec {
    std::string name;
    SimConfig base;
    std::vector<SweepAxis> axes;
    std::vector<SchemeSpec> schemes;
    std::vector<std::uint64_t> seeds;
};

/// Built-in presets mirroring the simulator's figure-style studies.
std::vector<std::string> preset_names();
ExperimentSpec make_preset(const std::string& name);

/// Parses an experiment file: {"name", "base", "sweep": {key: [values]},
/// "schemes": [{"name", ...overlay}], "seeds": [...]}.
ExperimentSpec experiment_from_json(const nlohmann::json& j);

/// Runs the full (sweep point x scheme x seed) grid and renders the CSV:
/// header "scheme,<axis keys>,mean_dfr,ci_low,ci_high,seeds", one row per
/// (sweep point, scheme) in grid order. Byte-identical across reruns.
std::string run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

} // namespace alec
