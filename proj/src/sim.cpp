#include "alec/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace alec {

void validate(const SimConfig& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("n must be >= 1");
    if (cfg.delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (cfg.b < 1) throw std::invalid_argument("b must be >= 1");
    if (cfg.d_nf < 1) throw std::invalid_argument("d_nf must be >= 1");
    if (cfg.l_m < 1 || cfg.l_m > 32) throw std::invalid_argument("l_m must be in [1, 32]");
    if (cfg.l_o < 1 || cfg.l_o > 32) throw std::invalid_argument("l_o must be in [1, 32]");
    if (cfg.r_t < 1) throw std::invalid_argument("r_t must be >= 1");
    if (cfg.r_m < 1) throw std::invalid_argument("r_m must be >= 1");
    if (!(cfg.p_fb >= 0.0 && cfg.p_fb <= 1.0))
        throw std::invalid_argument("p_fb must be in [0, 1]");
    if (cfg.payload_bits < 1) throw std::invalid_argument("payload_bits must be >= 1");
    validate(cfg.uplink);
    if (cfg.source_relay) validate(*cfg.source_relay);
    if (cfg.relay_dest) validate(*cfg.relay_dest);
    if (cfg.feedback_overhear) validate(*cfg.feedback_overhear);
}

Payload synthetic_payload(Seq seq, std::size_t bytes) {
    Payload p(bytes);
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < bytes; ++k) {
        if (k % 8 == 0)
            word = RngStream::mix64(static_cast<std::uint64_t>(seq) * 0x9E3779B97F4A7C15ull +
                                    k / 8 + 0xA1EC0DEull);
        p[k] = static_cast<std::uint8_t>(word >> ((k % 8) * 8));
    }
    return p;
}

SimResult run(const SimConfig& cfg, std::span<const Payload> payloads) {
    validate(cfg);

    const bool ingested = !payloads.empty();
    const std::int64_t n =
        ingested ? std::min<std::int64_t>(cfg.n, static_cast<std::int64_t>(payloads.size()))
                 : cfg.n;
    const std::size_t psize = ingested
                                  ? payloads.front().size()
                                  : payload_bytes(static_cast<std::size_t>(cfg.payload_bits));
    if (ingested)
        for (const auto& p : payloads)
            if (p.size() != psize)
                throw std::invalid_argument("ingested payloads must share one length");

    RngStream uplink_rng(cfg.seed, "uplink");
    RngStream feedback_rng(cfg.seed, "feedback");
    RngStream coding_rng(cfg.seed, "policy-coding");
    Channel uplink(cfg.uplink, uplink_rng);

    const bool with_relay = cfg.relay.has_value();
    std::optional<Channel> src_relay_ch, relay_dest_ch, fb_overhear_ch;
    std::optional<RelayState> relay;
    RngStream relay_coding_rng(cfg.seed, "relay-coding");
    if (with_relay) {
        src_relay_ch.emplace(cfg.source_relay.value_or(cfg.uplink),
                             RngStream(cfg.seed, "relay-uplink"));
        relay_dest_ch.emplace(cfg.relay_dest.value_or(cfg.uplink),
                              RngStream(cfg.seed, "relay-downlink"));
        fb_overhear_ch.emplace(cfg.feedback_overhear.value_or(cfg.uplink),
                               RngStream(cfg.seed, "relay-feedback"));
        relay.emplace(cfg.r_m, cfg.r_t, cfg.d_nf, cfg.delta, cfg.l_o);
    }

    SenderState::Params params;
    params.b = cfg.b;
    params.delta = cfg.delta;
    params.d_nf = cfg.d_nf;
    params.l_m = cfg.l_m;
    params.l_o = cfg.l_o;
    params.mf_exclude_confirmed = cfg.mf_exclude_confirmed;
    params.mf_aggressive_fill = cfg.mf_aggressive_fill;
    SenderState sender(params);
    ReceiverState receiver(cfg.delta, psize);

    SimResult res;
    res.n_generated = n;
    res.delivered.assign(static_cast<std::size_t>(n), 0);
    PolicyCounters pol_counters;
    RelayCounters rel_counters;

    const bool tracing = cfg.record_trace || cfg.trace_path.has_value();
    Trace trace;
    if (tracing) {
        trace.n = n;
        trace.delta = cfg.delta;
        trace.l_o = cfg.l_o;
        trace.l_m = cfg.l_m;
    }

    auto note_delivered = [&](std::span<const Seq> seqs) {
        for (Seq j : seqs) res.delivered[static_cast<std::size_t>(j)] = 1;
    };

    for (Seq i = 0; i < n; ++i) {
        // (1) generate s_i and build p_i from the feedback state after p_{i-1}
        sender.generate(SymbolRecord{
            i, ingested ? payloads[static_cast<std::size_t>(i)]
                        : synthetic_payload(i, psize)});
        Packet pkt = build_packet(cfg.policy, sender, i, coding_rng, &pol_counters);
        res.counters.tx_source += 1;

        // (2) uplink draw; destination decodes on delivery
        receiver.advance_to(i);
        const bool up_ok = uplink.transmit();
        std::size_t tx_event_idx = 0;
        if (tracing) {
            SourceTxEvent ev;
            ev.step = i;
            ev.uplink_delivered = up_ok;
            ev.relay_present = with_relay;
            for (const auto& e : pkt.entries) ev.entries.push_back(describe(e));
            tx_event_idx = trace.events.size();
            trace.events.emplace_back(std::move(ev));
        }
        if (up_ok) {
            for (const auto& entry : pkt.entries) {
                auto got = process_entry(receiver, entry);
                note_delivered(got);
                if (tracing)
                    trace.events.emplace_back(
                        EntryRxEvent{i, EntryOrigin::Source, describe(entry), got});
            }
        }

        // (3) relay phases: overhear, then forward through its own downlink
        if (with_relay) {
            const bool heard = src_relay_ch->transmit();
            if (heard) relay->overhear_packet(pkt, i);
            if (tracing)
                std::get<SourceTxEvent>(trace.events[tx_event_idx]).relay_overheard = heard;
            auto forwards =
                relay->forward_decision(*cfg.relay, i, relay_coding_rng, &rel_counters);
            for (const auto& entry : forwards) {
                res.counters.tx_relay += 1;
                const bool down_ok = relay_dest_ch->transmit();
                if (tracing)
                    trace.events.emplace_back(RelayTxEvent{i, describe(entry), down_ok});
                if (!down_ok) continue;
                auto got = process_entry(receiver, entry);
                note_delivered(got);
                if (tracing)
                    trace.events.emplace_back(
                        EntryRxEvent{i, EntryOrigin::Relay, describe(entry), got});
            }
        }

        // (4) the destination attempts a feedback every step; p_fb folds the
        // receiver's transmit opportunity and the feedback link into one draw
        {
            FeedbackMsg fb = make_feedback(cfg.policy, receiver, cfg.l_o, cfg.l_m);
            res.counters.feedbacks_emitted += 1;
            const bool snd_ok = feedback_arrives(cfg.p_fb, feedback_rng);
            if (snd_ok) {
                sender.accept_feedback(fb, i);
                res.counters.feedbacks_received += 1;
            }
            bool rel_ok = false;
            if (with_relay) {
                rel_ok = fb_overhear_ch->transmit();
                if (rel_ok) relay->overhear_feedback(fb, i);
            }
            if (tracing) {
                FeedbackEvent ev;
                ev.step = i;
                ev.form = fb.form;
                ev.u_field = fb.u_field;
                ev.beta_field = fb.beta_field;
                ev.bitmap = fb.bitmap;
                ev.sender_received = snd_ok;
                ev.relay_present = with_relay;
                ev.relay_overheard = rel_ok;
                trace.events.emplace_back(std::move(ev));
            }
        }
        // (5) expiry boundary advances with i
    }

    res.counters.coded_entries_source = pol_counters.coded_entries;
    res.counters.xor_ops_source = pol_counters.xor_ops;
    res.counters.coded_entries_relay = rel_counters.coded_entries;
    res.counters.xor_ops_relay = rel_counters.xor_ops;
    res.counters.relay_symbols_buffered = rel_counters.symbols_buffered;

    // Symbols whose expiry window outlives the run are censored: excluded
    // from both n and m.
    const std::int64_t counted = std::max<std::int64_t>(0, n - cfg.delta);
    res.n = counted;
    for (std::int64_t j = 0; j < counted; ++j)
        if (res.delivered[static_cast<std::size_t>(j)]) ++res.m;
    res.dfr = counted > 0 ? static_cast<double>(counted - res.m) /
                                static_cast<double>(counted)
                          : 0.0;

    if (ingested) {
        res.payload_mismatches = 0;
        for (std::int64_t j = 0; j < n; ++j) {
            if (!res.delivered[static_cast<std::size_t>(j)]) continue;
            const Payload* got = receiver.payload_of(j);
            if (!got || *got != payloads[static_cast<std::size_t>(j)])
                ++res.payload_mismatches;
        }
    }

    if (cfg.trace_path) write_trace_file(*cfg.trace_path, trace);
    if (cfg.record_trace) res.trace = std::move(trace);
    return res;
}

std::vector<SweepRow> sweep(const std::vector<SimConfig>& grid,
                            const std::vector<std::uint64_t>& seeds,
                            unsigned threads) {
    if (grid.empty() || seeds.empty())
        throw std::invalid_argument("sweep needs a non-empty grid and seed list");
    struct Cell {
        double dfr = 0.0;
        double tx_relay = 0.0;
    };
    std::vector<Cell> cells(grid.size() * seeds.size());
    std::atomic<std::size_t> cursor{0};
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));

    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= cells.size()) return;
            const std::size_t ci = k / seeds.size();
            const std::size_t si = k % seeds.size();
            SimConfig cfg = grid[ci];
            cfg.seed = seeds[si];
            cfg.record_trace = false;
            cfg.trace_path.reset();
            const SimResult r = run(cfg);
            cells[k].dfr = r.dfr;
            cells[k].tx_relay = static_cast<double>(r.counters.tx_relay);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<SweepRow> rows(grid.size());
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        SweepRow& row = rows[ci];
        row.config_index = ci;
        row.seeds = seeds;
        double sum = 0.0;
        for (std::size_t si = 0; si < seeds.size(); ++si) {
            const Cell& c = cells[ci * seeds.size() + si];
            row.per_seed_dfr.push_back(c.dfr);
            row.per_seed_tx_relay.push_back(c.tx_relay);
            sum += c.dfr;
        }
        const double mean = sum / static_cast<double>(seeds.size());
        double var = 0.0;
        for (double v : row.per_seed_dfr) var += (v - mean) * (v - mean);
        const double sd = seeds.size() > 1
                              ? std::sqrt(var / static_cast<double>(seeds.size() - 1))
                              : 0.0;
        const double half =
            1.96 * sd / std::sqrt(static_cast<double>(seeds.size()));
        row.mean_dfr = mean;
        row.ci_low = mean - half;
        row.ci_high = mean + half;
    }
    return rows;
}

namespace {

/// Reference decoder and feedback generator for trace replay. Written
/// against plain std::set state, independent of the engine's receive path.
class MirrorReceiver {
public:
    MirrorReceiver(Seq delta, int l_o, int l_m) : delta_(delta), l_o_(l_o), l_m_(l_m) {}

    std::vector<Seq> apply_entry(Seq step, const EntryDesc& e) {
        std::vector<Seq> out;
        if (e.kind == EntryKind::Uncoded) {
            const Seq j = e.constituents.at(0);
            if (j >= step - delta_ && j <= step && !delivered_.count(j)) {
                delivered_.insert(j);
                out.push_back(j);
            }
            return out;
        }
        Seq missing = kNoSeq;
        int unknown = 0;
        for (Seq c : e.constituents) {
            if (!delivered_.count(c)) {
                ++unknown;
                missing = c;
            }
        }
        if (unknown == 1 && missing >= step - delta_ && missing <= step) {
            delivered_.insert(missing);
            out.push_back(missing);
        }
        return out;
    }

    std::uint32_t expect_u_field(Seq step) const {
        return static_cast<std::uint32_t>(oldest(step) % (1ll << l_o_));
    }

    std::uint32_t expect_beta_field(Seq step) const {
        const std::int64_t cap = (1ll << l_m_) - 1;
        const std::int64_t beta = count_missing(step);
        return static_cast<std::uint32_t>(std::min(beta, cap));
    }

    std::vector<bool> expect_bitmap(Seq step) const {
        const Seq u = oldest(step);
        std::vector<bool> bits(static_cast<std::size_t>(l_m_));
        for (int k = 0; k < l_m_; ++k) {
            const Seq j = u + 1 + k;
            bits[static_cast<std::size_t>(k)] = j > step || delivered_.count(j) > 0;
        }
        return bits;
    }

private:
    Seq oldest(Seq step) const {
        for (Seq j = std::max<Seq>(0, step - delta_); j <= step; ++j)
            if (!delivered_.count(j)) return j;
        return step + 1;
    }

    std::int64_t count_missing(Seq step) const {
        std::int64_t beta = 0;
        for (Seq j = std::max<Seq>(0, step - delta_); j <= step; ++j)
            if (!delivered_.count(j)) ++beta;
        return beta;
    }

    Seq delta_;
    int l_o_;
    int l_m_;
    std::set<Seq> delivered_;
};

std::string seq_list(const std::vector<Seq>& v) {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << ',';
        os << v[k];
    }
    os << '}';
    return os.str();
}

} // namespace

MirrorReport mirror_oracle_check(const Trace& trace) {
    MirrorReport report;
    MirrorReceiver mirror(trace.delta, trace.l_o, trace.l_m);
    for (const auto& ev : trace.events) {
        if (const auto* rx = std::get_if<EntryRxEvent>(&ev)) {
            const auto expected = mirror.apply_entry(rx->step, rx->entry);
            if (expected != rx->recovered)
                report.divergences.push_back(
                    {rx->step, "deliveries: expected " + seq_list(expected) +
                                   ", recorded " + seq_list(rx->recovered)});
        } else if (const auto* fb = std::get_if<FeedbackEvent>(&ev)) {
            const auto u = mirror.expect_u_field(fb->step);
            if (u != fb->u_field)
                report.divergences.push_back(
                    {fb->step, "u field: expected " + std::to_string(u) +
                                   ", recorded " + std::to_string(fb->u_field)});
            if (fb->form == FeedbackForm::Cumulative) {
                const auto beta = mirror.expect_beta_field(fb->step);
                if (beta != fb->beta_field)
                    report.divergences.push_back(
                        {fb->step, "beta field: expected " + std::to_string(beta) +
                                       ", recorded " + std::to_string(fb->beta_field)});
            } else {
                if (mirror.expect_bitmap(fb->step) != fb->bitmap)
                    report.divergences.push_back({fb->step, "bitmap mismatch"});
            }
        }
    }
    return report;
}

} // namespace alec
