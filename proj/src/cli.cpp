#include "alec/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "alec/airtime.hpp"
#include "alec/config_io.hpp"
#include "alec/degree.hpp"
#include "alec/experiment.hpp"
#include "alec/ingest.hpp"
#include "alec/sim.hpp"

namespace alec {

namespace {

struct SimFlags {
    std::optional<std::string> config_file;
    std::optional<std::string> policy;
    std::optional<std::string> relay;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> delta;
    std::optional<int> b, d_nf, l_m, l_o, r_t, r_m, payload_bits;
    std::optional<double> p_fb, p_s, p_gb, p_bg;
    std::optional<std::string> channel;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> trace;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--config", f.config_file, "JSON config file (flags override it)");
    cmd->add_option("--policy", f.policy, "rr | wc | iwc | iwc-mf");
    cmd->add_option("--relay", f.relay, "none | uc-r | iwc-r");
    cmd->add_option("--n", f.n, "symbols to generate");
    cmd->add_option("--delta", f.delta, "delay tolerance");
    cmd->add_option("--b", f.b, "max symbols per packet");
    cmd->add_option("--d-nf", f.d_nf, "no-feedback degree");
    cmd->add_option("--l-m", f.l_m, "feedback count/bitmap width in bits");
    cmd->add_option("--l-o", f.l_o, "feedback sequence field width in bits");
    cmd->add_option("--r-t", f.r_t, "relay threshold");
    cmd->add_option("--r-m", f.r_m, "relay memory (symbols)");
    cmd->add_option("--p-fb", f.p_fb, "feedback reception probability");
    cmd->add_option("--channel", f.channel, "uplink kind: bernoulli | ge");
    cmd->add_option("--p-s", f.p_s, "Bernoulli packet success probability");
    cmd->add_option("--p-gb", f.p_gb, "GE good-to-bad transition probability");
    cmd->add_option("--p-bg", f.p_bg, "GE bad-to-good transition probability");
    cmd->add_option("--payload-bits", f.payload_bits, "information symbol size l_s");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--trace", f.trace, "write a per-event trace file");
}

SimConfig resolve_config(const SimFlags& f) {
    nlohmann::json j;
    if (f.config_file) {
        std::ifstream in(*f.config_file);
        if (!in) throw ConfigError("cannot open config file: " + *f.config_file);
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad config JSON: ") + e.what());
        }
    } else {
        j = config_to_json(SimConfig{});
    }
    if (f.policy) j["policy"] = *f.policy;
    if (f.relay) j["relay"] = *f.relay;
    if (f.n) j["n"] = *f.n;
    if (f.delta) j["delta"] = *f.delta;
    if (f.b) j["b"] = *f.b;
    if (f.d_nf) j["d_nf"] = *f.d_nf;
    if (f.l_m) j["l_m"] = *f.l_m;
    if (f.l_o) j["l_o"] = *f.l_o;
    if (f.r_t) j["r_t"] = *f.r_t;
    if (f.r_m) j["r_m"] = *f.r_m;
    if (f.p_fb) j["p_fb"] = *f.p_fb;
    if (f.payload_bits) j["payload_bits"] = *f.payload_bits;
    if (f.seed) j["seed"] = *f.seed;
    if (f.channel) j["uplink"]["kind"] = *f.channel;
    if (f.p_s) j["uplink"]["p_s"] = *f.p_s;
    if (f.p_gb) j["uplink"]["p_gb"] = *f.p_gb;
    if (f.p_bg) j["uplink"]["p_bg"] = *f.p_bg;
    if (f.trace) j["trace"] = *f.trace;
    SimConfig cfg = config_from_json(j);
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

nlohmann::json result_to_json(const SimResult& r) {
    nlohmann::json j;
    j["n_generated"] = r.n_generated;
    j["n"] = r.n;
    j["m"] = r.m;
    j["dfr"] = r.dfr;
    j["counters"] = {{"tx_source", r.counters.tx_source},
                     {"tx_relay", r.counters.tx_relay},
                     {"coded_entries_source", r.counters.coded_entries_source},
                     {"coded_entries_relay", r.counters.coded_entries_relay},
                     {"xor_ops_source", r.counters.xor_ops_source},
                     {"xor_ops_relay", r.counters.xor_ops_relay},
                     {"feedbacks_emitted", r.counters.feedbacks_emitted},
                     {"feedbacks_received", r.counters.feedbacks_received}};
    if (r.payload_mismatches >= 0) j["payload_mismatches"] = r.payload_mismatches;
    return j;
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path);
    if (!out) throw std::runtime_error("cannot open output file: " + *path);
    out << text;
}

std::vector<std::uint64_t> resolve_seeds(const std::string& seeds_csv, int num_seeds) {
    std::vector<std::uint64_t> seeds;
    if (!seeds_csv.empty()) {
        std::stringstream ss(seeds_csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) seeds.push_back(std::stoull(tok));
    } else {
        for (int k = 1; k <= num_seeds; ++k)
            seeds.push_back(static_cast<std::uint64_t>(k));
    }
    if (seeds.empty()) throw ConfigError("empty seed list");
    return seeds;
}

std::string degree_table_csv(int max_gap) {
    if (max_gap < 3 || max_gap > 64)
        throw ConfigError("degree-table supports 3 <= max-gap <= 64");
    std::string csv = "gap,beta,d_closed,d_bruteforce,obj_closed,obj_max,equal\n";
    char line[160];
    for (int gap = 3; gap <= max_gap; ++gap) {
        for (int beta = 2; beta < gap; ++beta) {
            const DegreeContext ctx{gap, beta};
            const auto dc = optimal_degree_closed(ctx);
            const auto db = optimal_degree_bruteforce(ctx);
            const auto oc = objective(ctx, dc);
            const auto ob = objective(ctx, db);
            std::snprintf(line, sizeof line, "%d,%d,%lld,%lld,%.8g,%.8g,%d\n", gap,
                          beta, static_cast<long long>(dc), static_cast<long long>(db),
                          oc.value(), ob.value(), oc == ob ? 1 : 0);
            csv += line;
        }
    }
    return csv;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"alec: application-layer erasure coding simulator for "
                 "delay-sensitive IoT uplinks"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run one seeded simulation");
    SimFlags run_flags;
    add_sim_flags(run_cmd, run_flags);

    // experiment
    auto* exp_cmd =
        app.add_subcommand("experiment", "run a preset or experiment file, emit CSV");
    std::string exp_target;
    std::string exp_out;
    std::string exp_seeds_csv;
    int exp_num_seeds = 10;
    std::optional<std::int64_t> exp_n;
    unsigned exp_threads = 0;
    exp_cmd->add_option("target", exp_target, "preset name or experiment JSON file")
        ->required();
    exp_cmd->add_option("--out", exp_out, "output CSV path (default <name>.csv)");
    exp_cmd->add_option("--seeds", exp_seeds_csv, "comma-separated seed list");
    exp_cmd->add_option("--num-seeds", exp_num_seeds, "use seeds 1..k (default 10)");
    exp_cmd->add_option("--n", exp_n, "override symbols per run");
    exp_cmd->add_option("--threads", exp_threads, "worker threads (0 = hardware)");

    // airtime
    auto* air_cmd = app.add_subcommand("airtime", "LoRa airtime / duty-cycle table");
    LoRaParams lora;
    int b_max = 6;
    std::optional<std::string> air_out;
    air_cmd->add_option("--b-max", b_max, "largest symbols-per-frame row");
    air_cmd->add_option("--sf", lora.sf, "spreading factor");
    air_cmd->add_option("--bandwidth", lora.bandwidth_hz, "bandwidth in Hz");
    air_cmd->add_option("--preamble", lora.preamble_symbols, "preamble symbols");
    air_cmd->add_option("--header", lora.header_flag, "h flag (0 or 1)");
    air_cmd->add_option("--low-dr", lora.low_dr_flag, "q flag (0 or 1)");
    air_cmd->add_option("--cr", lora.coding_rate_index, "coding rate index c (1..4)");
    air_cmd->add_option("--bytes-per-symbol", lora.bytes_per_symbol, "m");
    air_cmd->add_option("--period-ms", lora.frame_period_ms, "inter-frame period T_p");
    air_cmd->add_option("--out", air_out, "output CSV path (default stdout)");

    // degree-table
    auto* deg_cmd =
        app.add_subcommand("degree-table", "closed-form vs brute-force degree table");
    int max_gap = 16;
    std::optional<std::string> deg_out;
    deg_cmd->add_option("--max-gap", max_gap, "largest i-u to tabulate (<= 64)");
    deg_cmd->add_option("--out", deg_out, "output CSV path (default stdout)");

    // ingest
    auto* ing_cmd =
        app.add_subcommand("ingest", "run a simulation over a measurement CSV");
    std::string ing_file;
    SimFlags ing_flags;
    ing_cmd->add_option("file", ing_file, "CSV with timestamp,value rows")->required();
    add_sim_flags(ing_cmd, ing_flags);

    // defaults
    app.add_subcommand("defaults", "print the default configuration as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand("defaults")) {
        std::cout << config_to_json(SimConfig{}).dump(2) << '\n';
        return 0;
    }
    if (app.got_subcommand(run_cmd)) {
        const SimConfig cfg = resolve_config(run_flags);
        const SimResult res = run(cfg);
        std::cout << result_to_json(res).dump(2) << '\n';
        return 0;
    }
    if (app.got_subcommand(exp_cmd)) {
        ExperimentSpec spec;
        if (exp_target.size() > 5 &&
            exp_target.substr(exp_target.size() - 5) == ".json") {
            std::ifstream in(exp_target);
            if (!in) throw ConfigError("cannot open experiment file: " + exp_target);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("bad experiment JSON: ") + e.what());
            }
            spec = experiment_from_json(j);
        } else {
            spec = make_preset(exp_target);
        }
        if (!exp_seeds_csv.empty() || exp_cmd->count("--num-seeds"))
            spec.seeds = resolve_seeds(exp_seeds_csv, exp_num_seeds);
        if (exp_n) spec.base.n = *exp_n;
        const std::string csv = run_experiment(spec, exp_threads);
        const std::string path = exp_out.empty() ? spec.name + ".csv" : exp_out;
        write_output(path, csv);
        std::cerr << "wrote " << path << '\n';
        return 0;
    }
    if (app.got_subcommand(air_cmd)) {
        write_output(air_out, duty_cycle_table_csv(b_max, lora));
        return 0;
    }
    if (app.got_subcommand(deg_cmd)) {
        write_output(deg_out, degree_table_csv(max_gap));
        return 0;
    }
    if (app.got_subcommand(ing_cmd)) {
        const MeasurementStream stream = read_measurements_file(ing_file);
        if (stream.payloads.empty()) throw ConfigError("no measurement rows in " + ing_file);
        SimConfig cfg = resolve_config(ing_flags);
        cfg.payload_bits = 32;
        if (cfg.n > static_cast<std::int64_t>(stream.payloads.size())) {
            std::cerr << "warning: only " << stream.payloads.size()
                      << " measurement rows; truncating n from " << cfg.n << '\n';
            cfg.n = static_cast<std::int64_t>(stream.payloads.size());
        }
        const SimResult res = run(cfg, stream.payloads);
        nlohmann::json j = result_to_json(res);
        j["rows_ingested"] = stream.payloads.size();
        std::vector<Seq> expired;
        for (std::int64_t k = 0; k < res.n; ++k)
            if (!res.delivered[static_cast<std::size_t>(k)]) expired.push_back(k);
        j["expired_undelivered"] = expired;
        j["payload_verification"] =
            res.payload_mismatches == 0 ? "ok" : "MISMATCH";
        std::cout << j.dump(2) << '\n';
        return res.payload_mismatches == 0 ? 0 : 1;
    }
    return 2;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace alec
