#include "doctest.h"

#include "alec/relay.hpp"
#include "alec/sim.hpp"

using namespace alec;

namespace {

PayloadEntry uncoded_of(Seq j) { return xor_combine({{j, synthetic_payload(j, 1)}}); }

PayloadEntry coded_of(std::initializer_list<Seq> seqs) {
    std::vector<SymbolRecord> symbols;
    for (Seq j : seqs) symbols.push_back({j, synthetic_payload(j, 1)});
    return xor_combine(symbols);
}

FeedbackMsg cumulative(Seq u, std::int64_t beta) {
    FeedbackMsg fb;
    fb.form = FeedbackForm::Cumulative;
    fb.u_field = encode_seq_field(u, 17);
    fb.beta_field = saturate_count(beta, 4);
    return fb;
}

} // namespace

TEST_CASE("overhear: buffers uncoded entries, discards coded, counts new symbols") {
    RelayState relay(16, 2, 2, 16, 17);
    Packet pkt{9, {uncoded_of(9), uncoded_of(7), coded_of({3, 4})}};
    relay.overhear_packet(pkt, 9);
    CHECK(relay.buffered() == 2);
    CHECK(relay.new_since_last_tx() == 2);
}

TEST_CASE("overhear: full buffer evicts oldest first") {
    RelayState relay(3, 4, 2, 16, 17);
    for (Seq j = 0; j < 4; ++j) {
        Packet pkt{j, {uncoded_of(j)}};
        relay.overhear_packet(pkt, j);
    }
    CHECK(relay.buffered() == 3);
    // symbol 0 was evicted; forwarding phase can only pick from {1, 2, 3}
    RngStream rng(1, "relay-coding");
    auto out = relay.forward_decision(RelayPolicy::IWC_R, 3, rng);
    REQUIRE(out.size() == 1);
    for (Seq c : out[0].constituents) CHECK(c >= 1);
}

TEST_CASE("overhear: already-buffered symbols do not advance the counter") {
    RelayState relay(16, 10, 2, 16, 17);
    Packet pkt{5, {uncoded_of(5), uncoded_of(3)}};
    relay.overhear_packet(pkt, 5);
    CHECK(relay.new_since_last_tx() == 2);
    Packet again{6, {uncoded_of(5), uncoded_of(3)}};
    relay.overhear_packet(again, 6);
    CHECK(relay.new_since_last_tx() == 2);
    CHECK(relay.buffered() == 2);
}

TEST_CASE("overhear_feedback records u from either form") {
    RelayState relay(16, 2, 2, 16, 17);
    relay.overhear_feedback(cumulative(6, 2), 9);
    CHECK(relay.last_overheard_u() == 6);

    FeedbackMsg map;
    map.form = FeedbackForm::Bitmap;
    map.u_field = encode_seq_field(7, 17);
    map.bitmap = {false, true, false, true};
    relay.overhear_feedback(map, 10);
    CHECK(relay.last_overheard_u() == 7);
}

TEST_CASE("UC-R forwards each newly buffered symbol immediately") {
    RelayState relay(16, 2, 2, 16, 17);
    RngStream rng(1, "relay-coding");
    Packet pkt{9, {uncoded_of(9), uncoded_of(7), coded_of({3, 4})}};
    relay.overhear_packet(pkt, 9);
    auto out = relay.forward_decision(RelayPolicy::UC_R, 9, rng);
    REQUIRE(out.size() == 2);
    // forwarded in overhear order: the packet listed s_9 before s_7
    CHECK(out[0].constituents == std::vector<Seq>{9});
    CHECK(out[1].constituents == std::vector<Seq>{7});
    // nothing new on a silent step
    CHECK(relay.forward_decision(RelayPolicy::UC_R, 10, rng).empty());
    // a duplicate observation forwards nothing
    Packet dup{10, {uncoded_of(9)}};
    relay.overhear_packet(dup, 10);
    CHECK(relay.forward_decision(RelayPolicy::UC_R, 10, rng).empty());
}

TEST_CASE("IWC-R: fresh feedback with buffered s_u forwards it uncoded") {
    RelayState relay(16, 2, 2, 16, 17);
    RngStream rng(1, "relay-coding");
    Packet pkt{7, {uncoded_of(6), uncoded_of(7)}};
    relay.overhear_packet(pkt, 7);
    relay.overhear_feedback(cumulative(6, 2), 7);
    auto out = relay.forward_decision(RelayPolicy::IWC_R, 8, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == EntryKind::Uncoded);
    CHECK(out[0].constituents == std::vector<Seq>{6});
    CHECK(relay.new_since_last_tx() == 0);
}

TEST_CASE("IWC-R: no feedback overheard falls back to a coded symbol") {
    RelayState relay(16, 2, 2, 16, 17);
    RngStream rng(1, "relay-coding");
    Packet pkt{5, {uncoded_of(3), uncoded_of(4), uncoded_of(5)}};
    relay.overhear_packet(pkt, 5);
    auto out = relay.forward_decision(RelayPolicy::IWC_R, 5, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == EntryKind::Coded);
    CHECK(out[0].degree() == 2); // min(d_nf, m) = min(2, 3)
}

TEST_CASE("IWC-R: u older than the whole buffer falls back to a coded symbol") {
    RelayState relay(2, 2, 2, 32, 17);
    RngStream rng(1, "relay-coding");
    Packet p1{10, {uncoded_of(9), uncoded_of(10)}};
    relay.overhear_packet(p1, 10);
    relay.overhear_feedback(cumulative(4, 3), 10); // s_4 never buffered
    auto out = relay.forward_decision(RelayPolicy::IWC_R, 11, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == EntryKind::Coded);
}

TEST_CASE("IWC-R: stale feedback from before the last phase is ignored") {
    RelayState relay(16, 1, 2, 16, 17);
    RngStream rng(1, "relay-coding");
    relay.overhear_feedback(cumulative(3, 1), 4);
    Packet p{5, {uncoded_of(3), uncoded_of(5)}};
    relay.overhear_packet(p, 5);
    auto first = relay.forward_decision(RelayPolicy::IWC_R, 5, rng);
    REQUIRE(first.size() == 1);
    CHECK(first[0].constituents == std::vector<Seq>{3}); // feedback still fresh
    Packet p2{6, {uncoded_of(6)}};
    relay.overhear_packet(p2, 6);
    auto second = relay.forward_decision(RelayPolicy::IWC_R, 6, rng);
    REQUIRE(second.size() == 1);
    // no feedback since the phase at step 5: coded fallback
    CHECK(second[0].kind == EntryKind::Coded);
}

TEST_CASE("IWC-R: expired u is not forwarded uncoded") {
    RelayState relay(64, 1, 2, 4, 17);
    RngStream rng(1, "relay-coding");
    Packet p{10, {uncoded_of(10), uncoded_of(9)}};
    relay.overhear_packet(p, 10);
    relay.overhear_feedback(cumulative(9, 1), 10);
    // advance far enough that seq 9 is expired at the phase step
    Packet p2{20, {uncoded_of(20)}};
    relay.overhear_packet(p2, 20);
    relay.overhear_feedback(cumulative(9, 1), 20); // stale receiver view, u expired
    auto out = relay.forward_decision(RelayPolicy::IWC_R, 20, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == EntryKind::Coded);
}

TEST_CASE("IWC-R transmits at most once per R_t buffered symbols") {
    for (int r_t : {1, 2, 5}) {
        RelayState relay(16, r_t, 2, 1 << 20, 17);
        RngStream rng(7, "relay-coding");
        RngStream noise(8, "overhear-noise");
        std::int64_t buffered = 0, txs = 0;
        Seq next_seq = 0;
        for (Seq step = 0; step < 2000; ++step) {
            if (noise.bernoulli(0.7)) {
                Packet pkt{next_seq, {uncoded_of(next_seq)}};
                relay.overhear_packet(pkt, step);
                ++next_seq;
                ++buffered;
            }
            txs += static_cast<std::int64_t>(
                relay.forward_decision(RelayPolicy::IWC_R, step, rng).size());
        }
        CHECK(txs <= (buffered + r_t - 1) / r_t);
    }
}

TEST_CASE("energy proxy: IWC-R at R_t=2 transmits at most half of UC-R") {
    RelayState uc(16, 2, 2, 1 << 20, 17);
    RelayState iwc(16, 2, 2, 1 << 20, 17);
    RngStream rng_a(7, "relay-coding"), rng_b(7, "relay-coding");
    RngStream noise(9, "overhear-noise");
    std::int64_t uc_tx = 0, iwc_tx = 0;
    Seq next_seq = 0;
    for (Seq step = 0; step < 5000; ++step) {
        if (noise.bernoulli(0.6)) {
            Packet pkt{next_seq, {uncoded_of(next_seq)}};
            uc.overhear_packet(pkt, step);
            iwc.overhear_packet(pkt, step);
            ++next_seq;
        }
        uc_tx += static_cast<std::int64_t>(
            uc.forward_decision(RelayPolicy::UC_R, step, rng_a).size());
        iwc_tx += static_cast<std::int64_t>(
            iwc.forward_decision(RelayPolicy::IWC_R, step, rng_b).size());
    }
    CHECK(iwc_tx * 2 <= uc_tx);
    CHECK(uc_tx == next_seq); // UC-R forwarded every buffered symbol exactly once
}

TEST_CASE("relay parameter validation") {
    CHECK_THROWS(RelayState(0, 2, 2, 16, 17));
    CHECK_THROWS(RelayState(16, 0, 2, 16, 17));
    CHECK_THROWS(RelayState(16, 2, 0, 16, 17));
}
