#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alec/channel.hpp"
#include "alec/core.hpp"
#include "alec/policies.hpp"
#include "alec/relay.hpp"
#include "alec/trace.hpp"

namespace alec {

struct SimConfig {
    PolicyKind policy = PolicyKind::IWC;
    std::optional<RelayPolicy> relay;

    std::int64_t n = 100000; // symbols to generate
    Seq delta = 16;
    int b = 3;
    int d_nf = 2;
    int l_m = 4;
    int l_o = 17;
    int r_t = 2;
    int r_m = 16;
    double p_fb = 0.25;
    int payload_bits = 32;

    ChannelConfig uplink{};
    // Relay-side links default to the uplink parameters when unset.
    std::optional<ChannelConfig> source_relay;
    std::optional<ChannelConfig> relay_dest;
    std::optional<ChannelConfig> feedback_overhear;

    bool mf_exclude_confirmed = true;
    bool mf_aggressive_fill = false;

    std::uint64_t seed = 1;
    bool record_trace = false;
    std::optional<std::string> trace_path;
};

void validate(const SimConfig& cfg);

struct Counters {
    std::int64_t tx_source = 0;
    std::int64_t tx_relay = 0;
    std::int64_t coded_entries_source = 0;
    std::int64_t coded_entries_relay = 0;
    std::int64_t xor_ops_source = 0;
    std::int64_t xor_ops_relay = 0;
    std::int64_t feedbacks_emitted = 0;
    std::int64_t feedbacks_received = 0;
    std::int64_t relay_symbols_buffered = 0;
};

struct SimResult {
    std::int64_t n_generated = 0; // symbols simulated
    std::int64_t n = 0;           // counted symbols (full expiry window seen)
    std::int64_t m = 0;           // of those, delivered before expiry
    double dfr = 0.0;             // (n - m) / n
    Counters counters;
    std::vector<std::uint8_t> delivered; // per generated seq
    std::int64_t payload_mismatches = -1; // >= 0 only for ingested payload runs
    std::optional<Trace> trace;
};

/// Deterministic synthetic payload for symbol `seq`.
Payload synthetic_payload(Seq seq, std::size_t bytes);

/// Runs one seeded simulation. Symbols whose expiry window extends past the
/// end of the run are excluded from both n and m. When `payloads` is
/// non-empty it replaces the synthetic payload stream (its size caps n) and
/// every delivered symbol is verified byte-for-byte against it.
SimResult run(const SimConfig& cfg, std::span<const Payload> payloads = {});

struct SweepRow {
    std::size_t config_index = 0;
    double mean_dfr = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<double> per_seed_dfr;
    std::vector<double> per_seed_tx_relay;
    std::vector<std::uint64_t> seeds;
};

/// Runs every (config, seed) pair and aggregates a mean and normal 95% CI
/// per config. Rows come back in grid order regardless of the number of
/// worker threads.
std::vector<SweepRow> sweep(const std::vector<SimConfig>& grid,
                            const std::vector<std::uint64_t>& seeds,
                            unsigned threads = 0);

struct Divergence {
    Seq step = 0;
    std::string what;
};

struct MirrorReport {
    std::vector<Divergence> divergences;
    bool ok() const { return divergences.empty(); }
};

/// Replays a trace's reception log through an independent reference decoder
/// and feedback generator, reporting any step where the recorded deliveries
/// or feedback fields disagree with the reference.
MirrorReport mirror_oracle_check(const Trace& trace);

} // namespace alec
