#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <variant>

#include "alec/sim.hpp"

using namespace alec;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.n = 2000;
    cfg.uplink = ChannelConfig{ChannelKind::Bernoulli, 0.7, 0.25, 0.5};
    cfg.record_trace = true;
    return cfg;
}

// Full GF(2) elimination decoder over the reception log, with expiry applied
// at recovery time. Anything the streaming decoder delivers must be a subset
// of what this recovers, quantifying the cost of discarding coded entries.
class Gf2Decoder {
public:
    explicit Gf2Decoder(Seq delta) : delta_(delta) {}

    // Keeps the equation system in reduced row echelon form: every pivot
    // appears only in its own row, so a symbol's value is derivable exactly
    // when its row is a singleton, and that happens at the event that made
    // it derivable (never deferred past expiry).
    void add_entry(Seq step, const EntryDesc& e) {
        std::set<Seq> row(e.constituents.begin(), e.constituents.end());
        for (const Seq c : std::vector<Seq>(row.begin(), row.end())) {
            if (!row.count(c)) continue; // cancelled by an earlier reduction
            auto it = rows_.find(c);
            if (it != rows_.end()) row = sym_diff(row, it->second);
        }
        if (row.empty()) return; // linearly dependent
        const Seq pivot = *row.begin();
        for (auto& [p, other] : rows_) {
            if (!other.count(pivot)) continue;
            other = sym_diff(other, row);
            if (other.size() == 1) determine(p, step);
        }
        rows_.emplace(pivot, row);
        if (row.size() == 1) determine(pivot, step);
    }

    const std::set<Seq>& delivered_in_time() const { return delivered_; }

private:
    static std::set<Seq> sym_diff(const std::set<Seq>& a, const std::set<Seq>& b) {
        std::set<Seq> out;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::inserter(out, out.begin()));
        return out;
    }

    void determine(Seq j, Seq step) {
        if (j >= step - delta_ && j <= step) delivered_.insert(j);
    }

    Seq delta_;
    std::set<Seq> delivered_;
    std::map<Seq, std::set<Seq>> rows_; // pivot -> row containing it
};

} // namespace

TEST_CASE("invalid configs are rejected before any work") {
    SimConfig cfg = base_config();
    cfg.n = 0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.p_fb = 1.5;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.uplink.p_s = -0.5;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.b = 0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("lossless channel delivers everything for every policy and relay mode") {
    for (auto policy :
         {PolicyKind::RR, PolicyKind::WC, PolicyKind::IWC, PolicyKind::IWC_MF}) {
        for (int relay_mode = 0; relay_mode < 3; ++relay_mode) {
            SimConfig cfg = base_config();
            cfg.record_trace = false;
            cfg.policy = policy;
            cfg.uplink.p_s = 1.0;
            if (relay_mode == 1) cfg.relay = RelayPolicy::UC_R;
            if (relay_mode == 2) cfg.relay = RelayPolicy::IWC_R;
            const auto res = run(cfg);
            CHECK(res.dfr == 0.0);
            CHECK(res.m == res.n);
        }
    }
}

TEST_CASE("dead channel delivers nothing") {
    SimConfig cfg = base_config();
    cfg.record_trace = false;
    cfg.uplink.p_s = 0.0;
    const auto res = run(cfg);
    CHECK(res.dfr == 1.0);
    CHECK(res.m == 0);
}

TEST_CASE("runs are deterministic under a seed and sensitive to it") {
    SimConfig cfg = base_config();
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.dfr == b.dfr);
    CHECK(a.m == b.m);
    CHECK(a.counters.xor_ops_source == b.counters.xor_ops_source);
    REQUIRE(a.trace.has_value());
    CHECK(a.trace->events.size() == b.trace->events.size());
    cfg.seed = 2;
    const auto c = run(cfg);
    auto uplink_outcomes = [](const Trace& t) {
        std::vector<bool> v;
        for (const auto& ev : t.events)
            if (const auto* tx = std::get_if<SourceTxEvent>(&ev))
                v.push_back(tx->uplink_delivered);
        return v;
    };
    CHECK(uplink_outcomes(*a.trace) == uplink_outcomes(*b.trace));
    CHECK(uplink_outcomes(*a.trace) != uplink_outcomes(*c.trace));
}

TEST_CASE("censored tail: the last delta symbols are excluded from n") {
    SimConfig cfg = base_config();
    cfg.record_trace = false;
    const auto res = run(cfg);
    CHECK(res.n_generated == cfg.n);
    CHECK(res.n == cfg.n - cfg.delta);
}

TEST_CASE("changing p_fb leaves the uplink erasure sequence untouched") {
    SimConfig lo = base_config();
    lo.p_fb = 0.1;
    SimConfig hi = base_config();
    hi.p_fb = 0.9;
    const auto a = run(lo), b = run(hi);
    std::vector<bool> ua, ub;
    for (const auto& ev : a.trace->events)
        if (const auto* tx = std::get_if<SourceTxEvent>(&ev)) ua.push_back(tx->uplink_delivered);
    for (const auto& ev : b.trace->events)
        if (const auto* tx = std::get_if<SourceTxEvent>(&ev)) ub.push_back(tx->uplink_delivered);
    CHECK(ua == ub);
}

TEST_CASE("mean dfr is non-increasing in p_fb") {
    auto mean_at = [](double p_fb) {
        double sum = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SimConfig cfg;
            cfg.n = 30000;
            cfg.uplink = ChannelConfig{ChannelKind::Bernoulli, 0.6, 0.25, 0.5};
            cfg.p_fb = p_fb;
            cfg.seed = seed;
            sum += run(cfg).dfr;
        }
        return sum / 10.0;
    };
    CHECK(mean_at(0.75) <= mean_at(0.25));
}

TEST_CASE("trace invariants: size, fresh symbol first, nothing expired on air") {
    for (auto policy :
         {PolicyKind::RR, PolicyKind::WC, PolicyKind::IWC, PolicyKind::IWC_MF}) {
        SimConfig cfg = base_config();
        cfg.policy = policy;
        cfg.relay = RelayPolicy::IWC_R;
        cfg.uplink.p_s = 0.6;
        const auto res = run(cfg);
        for (const auto& ev : res.trace->events) {
            if (const auto* tx = std::get_if<SourceTxEvent>(&ev)) {
                REQUIRE(!tx->entries.empty());
                REQUIRE(tx->entries.size() <= static_cast<std::size_t>(cfg.b));
                REQUIRE(tx->entries[0].kind == EntryKind::Uncoded);
                REQUIRE(tx->entries[0].constituents == std::vector<Seq>{tx->step});
                for (const auto& e : tx->entries)
                    for (Seq c : e.constituents) {
                        REQUIRE(c >= tx->step - cfg.delta);
                        REQUIRE(c <= tx->step);
                    }
            } else if (const auto* rtx = std::get_if<RelayTxEvent>(&ev)) {
                if (rtx->entry.kind == EntryKind::Uncoded)
                    REQUIRE(rtx->entry.constituents[0] >= rtx->step - cfg.delta);
            }
        }
    }
}

TEST_CASE("conservation: every delivered seq appears in exactly one rx recovery") {
    SimConfig cfg = base_config();
    cfg.relay = RelayPolicy::IWC_R;
    cfg.uplink.p_s = 0.6;
    const auto res = run(cfg);
    std::map<Seq, int> recovered_count;
    for (const auto& ev : res.trace->events)
        if (const auto* rx = std::get_if<EntryRxEvent>(&ev))
            for (Seq j : rx->recovered) recovered_count[j]++;
    for (const auto& [seq, count] : recovered_count) REQUIRE(count == 1);
    for (Seq j = 0; j < res.n_generated; ++j)
        REQUIRE(recovered_count.count(j) == (res.delivered[static_cast<std::size_t>(j)] ? 1u : 0u));
}

TEST_CASE("mirror oracle: engine traces replay divergence-free") {
    std::uint64_t salt = 0;
    for (auto policy :
         {PolicyKind::RR, PolicyKind::WC, PolicyKind::IWC, PolicyKind::IWC_MF}) {
        for (int relay_mode = 0; relay_mode < 3; ++relay_mode) {
            SimConfig cfg = base_config();
            cfg.n = 1000;
            cfg.policy = policy;
            cfg.uplink.p_s = 0.55;
            cfg.seed = 11 + salt++;
            if (relay_mode == 1) cfg.relay = RelayPolicy::UC_R;
            if (relay_mode == 2) cfg.relay = RelayPolicy::IWC_R;
            const auto res = run(cfg);
            const auto report = mirror_oracle_check(*res.trace);
            if (!report.ok()) {
                CAPTURE(report.divergences.front().step);
                CAPTURE(report.divergences.front().what);
            }
            REQUIRE(report.ok());
        }
    }
}

TEST_CASE("mirror oracle: a decoder that skips the in-packet cascade is caught") {
    Trace trace;
    trace.n = 10;
    trace.delta = 16;
    trace.l_o = 17;
    trace.l_m = 4;
    // delivered s_1 uncoded, then a cascading packet at step 3: s_2 uncoded,
    // coded{1,2,3}
    trace.events.push_back(EntryRxEvent{1, EntryOrigin::Source,
                                        EntryDesc{EntryKind::Uncoded, {1}}, {1}});
    EntryRxEvent uncoded2{3, EntryOrigin::Source, EntryDesc{EntryKind::Uncoded, {2}}, {2}};
    EntryRxEvent coded{3, EntryOrigin::Source, EntryDesc{EntryKind::Coded, {1, 2, 3}}, {3}};
    trace.events.push_back(uncoded2);
    trace.events.push_back(coded);
    CHECK(mirror_oracle_check(trace).ok());

    // a faulty decoder that missed the cascade recovery
    std::get<EntryRxEvent>(trace.events[2]).recovered.clear();
    const auto report = mirror_oracle_check(trace);
    REQUIRE_FALSE(report.ok());
    CHECK(report.divergences.front().step == 3);
}

TEST_CASE("mirror oracle: corrupted feedback fields are caught") {
    SimConfig cfg = base_config();
    cfg.n = 200;
    auto res = run(cfg);
    bool mutated = false;
    for (auto& ev : res.trace->events) {
        if (auto* fb = std::get_if<FeedbackEvent>(&ev)) {
            fb->beta_field += 1;
            mutated = true;
            break;
        }
    }
    REQUIRE(mutated);
    CHECK_FALSE(mirror_oracle_check(*res.trace).ok());
}

TEST_CASE("WC and IWC differ only at coded branches on the same seed") {
    SimConfig cfg = base_config();
    cfg.n = 600;
    cfg.policy = PolicyKind::WC;
    const auto wc = run(cfg);
    cfg.policy = PolicyKind::IWC;
    const auto iwc = run(cfg);
    CHECK(mirror_oracle_check(*wc.trace).ok());
    CHECK(mirror_oracle_check(*iwc.trace).ok());
    // both traces carry coded entries; their degree profiles differ
    auto degree_histogram = [](const Trace& t) {
        std::map<int, int> h;
        for (const auto& ev : t.events)
            if (const auto* tx = std::get_if<SourceTxEvent>(&ev))
                for (const auto& e : tx->entries)
                    if (e.kind == EntryKind::Coded) h[static_cast<int>(e.constituents.size())]++;
        return h;
    };
    CHECK(degree_histogram(*wc.trace) != degree_histogram(*iwc.trace));
}

TEST_CASE("GF(2) elimination replay delivers a superset of the streaming decoder") {
    for (auto policy : {PolicyKind::WC, PolicyKind::IWC}) {
        SimConfig cfg = base_config();
        cfg.n = 1200;
        cfg.policy = policy;
        cfg.relay = RelayPolicy::IWC_R;
        cfg.uplink.p_s = 0.55;
        const auto res = run(cfg);
        Gf2Decoder oracle(cfg.delta);
        for (const auto& ev : res.trace->events)
            if (const auto* rx = std::get_if<EntryRxEvent>(&ev))
                oracle.add_entry(rx->step, rx->entry);
        const auto& superset = oracle.delivered_in_time();
        std::int64_t streaming = 0;
        for (Seq j = 0; j < res.n_generated; ++j)
            if (res.delivered[static_cast<std::size_t>(j)]) {
                ++streaming;
                REQUIRE(superset.count(j) == 1);
            }
        CHECK(static_cast<std::int64_t>(superset.size()) >= streaming);
    }
}

TEST_CASE("counters: RR never XORs; IWC-MF codes less than IWC") {
    SimConfig cfg = base_config();
    cfg.record_trace = false;
    cfg.n = 20000;
    cfg.policy = PolicyKind::RR;
    const auto rr = run(cfg);
    CHECK(rr.counters.xor_ops_source == 0);
    CHECK(rr.counters.coded_entries_source == 0);
    cfg.policy = PolicyKind::IWC;
    const auto iwc = run(cfg);
    cfg.policy = PolicyKind::IWC_MF;
    const auto mf = run(cfg);
    CHECK(mf.counters.xor_ops_source < iwc.counters.xor_ops_source);
    CHECK(iwc.counters.tx_source == cfg.n);
}

TEST_CASE("IWC-R with R_t=1 and perfect overhear forwards the reported u") {
    SimConfig cfg = base_config();
    cfg.n = 1500;
    cfg.relay = RelayPolicy::IWC_R;
    cfg.r_t = 1;
    cfg.r_m = 1 << 20;
    cfg.uplink.p_s = 0.6;
    cfg.feedback_overhear = ChannelConfig{ChannelKind::Bernoulli, 1.0, 0, 0};
    const auto res = run(cfg);
    Seq last_u = kNoSeq;
    std::int64_t uncoded_forwards = 0;
    for (const auto& ev : res.trace->events) {
        if (const auto* rtx = std::get_if<RelayTxEvent>(&ev)) {
            if (rtx->entry.kind == EntryKind::Uncoded) {
                ++uncoded_forwards;
                REQUIRE(last_u != kNoSeq);
                REQUIRE(rtx->entry.constituents[0] == last_u);
            }
        } else if (const auto* fb = std::get_if<FeedbackEvent>(&ev)) {
            last_u = decode_seq_field(fb->u_field, fb->step + 1, cfg.l_o);
        }
    }
    CHECK(uncoded_forwards > 0);
}

TEST_CASE("payload overrides flow end to end byte-identically") {
    std::vector<Payload> payloads;
    for (int k = 0; k < 400; ++k)
        payloads.push_back(Payload{std::uint8_t(k), std::uint8_t(k >> 3),
                                   std::uint8_t(k * 7), std::uint8_t(255 - k)});
    SimConfig cfg = base_config();
    cfg.record_trace = false;
    cfg.n = 1000; // truncated to the payload count
    cfg.uplink.p_s = 0.8;
    const auto res = run(cfg, payloads);
    CHECK(res.n_generated == 400);
    CHECK(res.payload_mismatches == 0);
    CHECK(res.m > 0);
}

TEST_CASE("sweep aggregates deterministically in grid order") {
    SimConfig a = base_config();
    a.record_trace = false;
    a.n = 3000;
    SimConfig b = a;
    b.uplink.p_s = 0.5;
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const auto rows = sweep({a, b}, seeds, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].config_index == 0);
    CHECK(rows[1].config_index == 1);
    for (const auto& row : rows) {
        REQUIRE(row.per_seed_dfr.size() == 3);
        const double mean =
            (row.per_seed_dfr[0] + row.per_seed_dfr[1] + row.per_seed_dfr[2]) / 3.0;
        CHECK(row.mean_dfr == doctest::Approx(mean));
        CHECK(row.ci_low <= row.mean_dfr);
        CHECK(row.ci_high >= row.mean_dfr);
    }
    CHECK(rows[1].mean_dfr > rows[0].mean_dfr); // lossier channel fails more
    const auto rerun = sweep({a, b}, seeds, 1);
    CHECK(rerun[0].mean_dfr == rows[0].mean_dfr);
    CHECK(rerun[1].per_seed_dfr == rows[1].per_seed_dfr);
    CHECK_THROWS_AS(sweep({}, seeds), std::invalid_argument);
}

TEST_CASE("sweep over b: RR's mean dfr is non-increasing in the packet budget") {
    std::vector<SimConfig> grid;
    for (int b = 2; b <= 8; ++b) {
        SimConfig cfg;
        cfg.policy = PolicyKind::RR;
        cfg.n = 30000;
        cfg.b = b;
        cfg.uplink = ChannelConfig{ChannelKind::Bernoulli, 0.55, 0.25, 0.5};
        grid.push_back(cfg);
    }
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
    const auto rows = sweep(grid, seeds);
    for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(rows[k].mean_dfr <= rows[k - 1].mean_dfr);
}

TEST_CASE("trace files are line-oriented and carry the run header") {
    SimConfig cfg = base_config();
    cfg.n = 50;
    cfg.trace_path = "trace_test_out.txt";
    run(cfg);
    std::ifstream in("trace_test_out.txt");
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("# alec trace", 0) == 0);
    int events = 0;
    while (std::getline(in, line)) {
        ++events;
        CHECK((line.rfind("tx\t", 0) == 0 || line.rfind("rtx\t", 0) == 0 ||
               line.rfind("rx\t", 0) == 0 || line.rfind("fb\t", 0) == 0));
    }
    CHECK(events > 50);
    std::remove("trace_test_out.txt");
}
