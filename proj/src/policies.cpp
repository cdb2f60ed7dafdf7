#include "alec/policies.hpp"

#include <algorithm>
#include <stdexcept>

#include "alec/degree.hpp"

namespace alec {

FeedbackForm feedback_form(PolicyKind policy) {
    return policy == PolicyKind::IWC_MF ? FeedbackForm::Bitmap : FeedbackForm::Cumulative;
}

namespace {

// Draws d distinct elements uniformly from pool (d draws from rng).
std::vector<Seq> sample_distinct(std::vector<Seq> pool, std::int64_t d, RngStream& rng) {
    const auto n = static_cast<std::int64_t>(pool.size());
    std::vector<Seq> out;
    out.reserve(static_cast<std::size_t>(d));
    for (std::int64_t k = 0; k < d; ++k) {
        const auto pick = k + static_cast<std::int64_t>(
                                  rng.next_below(static_cast<std::uint64_t>(n - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
        out.push_back(pool[static_cast<std::size_t>(k)]);
    }
    return out;
}

class PacketBuilder {
public:
    PacketBuilder(const SenderState& snd, Seq i, PolicyCounters* counters)
        : snd_(snd), i_(i), counters_(counters) {
        pkt_.seq = i;
        oldest_alive_ = i - snd.params().delta;
        if (oldest_alive_ < 0) oldest_alive_ = 0;
    }

    bool room() const {
        return static_cast<int>(pkt_.entries.size()) < snd_.params().b;
    }

    bool has_uncoded(Seq j) const {
        for (const auto& e : pkt_.entries)
            if (e.kind == EntryKind::Uncoded && e.constituents[0] == j) return true;
        return false;
    }

    // Adds s_j uncoded unless the packet is full, j is expired, or j is
    // already aboard.
    bool add_uncoded(Seq j) {
        if (!room() || j < oldest_alive_ || has_uncoded(j)) return false;
        pkt_.entries.push_back(xor_combine({snd_.symbol(j)}));
        return true;
    }

    void add_coded(const std::vector<Seq>& constituents) {
        std::vector<SymbolRecord> symbols;
        symbols.reserve(constituents.size());
        for (Seq j : constituents) symbols.push_back(snd_.symbol(j));
        pkt_.entries.push_back(xor_combine(symbols));
        if (counters_) {
            counters_->coded_entries += 1;
            counters_->xor_ops += static_cast<std::int64_t>(constituents.size()) - 1;
        }
    }

    Seq oldest_alive() const { return oldest_alive_; }
    Packet take() { return std::move(pkt_); }

private:
    const SenderState& snd_;
    Seq i_;
    PolicyCounters* counters_;
    Seq oldest_alive_ = 0;
    Packet pkt_;
};

// WC / IWC after a fresh cumulative feedback (u, beta).
void fill_windowed_feedback(PacketBuilder& b, const SenderState& snd, Seq i, Seq u,
                            std::int64_t beta, PolicyKind policy, RngStream& rng) {
    if (u >= i) return; // nothing missing: the packet carries only s_i
    b.add_uncoded(u);
    const std::int64_t gap = i - u;
    const int budget = snd.params().b - 2; // slots alongside s_i and s_u
    if (beta <= 1) return;
    if (gap - 1 <= budget) {
        // The whole window fits; send it regardless of which symbols miss.
        for (Seq j = u + 1; j < i; ++j) b.add_uncoded(j);
        return;
    }
    if (beta == gap) {
        // Everything in the window is missing; oldest symbols first.
        for (Seq j = u + 1; j < i && b.room(); ++j) b.add_uncoded(j);
        return;
    }
    // 1 < beta < gap: code over the window.
    const DegreeContext ctx{gap, beta};
    const std::int64_t d = policy == PolicyKind::WC ? optimal_degree_bruteforce(ctx)
                                                    : optimal_degree_closed(ctx);
    std::vector<Seq> pool;
    pool.reserve(static_cast<std::size_t>(gap - 1));
    for (Seq j = u + 1; j < i; ++j) pool.push_back(j);
    while (b.room()) b.add_coded(sample_distinct(pool, d, rng));
}

// Shared no-feedback branch. `exclude_confirmed` removes symbols the latest
// bitmap feedback proved delivered (IWC-MF only).
void fill_no_feedback(PacketBuilder& b, const SenderState& snd, Seq i,
                      NoFeedbackRule rule, RngStream& rng, bool exclude_confirmed) {
    Seq u_last = kNoSeq;
    const auto& fb = snd.last_feedback();
    if (fb) u_last = fb->u;
    const Seq u_prime = std::max(b.oldest_alive(), u_last);
    const std::int64_t w_size = i - u_prime;
    if (w_size <= snd.params().b - 1) {
        for (Seq j = u_prime; j < i; ++j) b.add_uncoded(j);
        return;
    }
    std::vector<Seq> pool;
    pool.reserve(static_cast<std::size_t>(w_size));
    for (Seq j = u_prime; j < i; ++j) {
        if (exclude_confirmed && fb && fb->form == FeedbackForm::Bitmap) {
            const std::int64_t k = j - fb->u - 1;
            if (k >= 0 && k < static_cast<std::int64_t>(fb->bitmap.size()) &&
                fb->bitmap[static_cast<std::size_t>(k)])
                continue;
        }
        pool.push_back(j);
    }
    if (pool.empty()) return;
    const auto pool_size = static_cast<std::int64_t>(pool.size());
    while (b.room()) {
        const std::int64_t d =
            no_feedback_degree(rule, pool_size, snd.params().d_nf, rng);
        b.add_coded(sample_distinct(pool, d, rng));
    }
}

void fill_mf_feedback(PacketBuilder& b, const SenderState& snd, Seq i) {
    const auto& fb = *snd.last_feedback();
    const Seq u = fb.u;
    if (u >= i) return;
    b.add_uncoded(u);
    // Known-missing symbols, oldest first: they expire soonest.
    for (std::size_t k = 0; k < fb.bitmap.size() && b.room(); ++k) {
        if (fb.bitmap[k]) continue;
        const Seq j = u + 1 + static_cast<Seq>(k);
        if (j < i) b.add_uncoded(j);
    }
    if (!snd.params().mf_aggressive_fill) return;
    // Exploratory variant: pad leftover space with unknown-status window
    // symbols, oldest first.
    const Seq from = u + 1 + static_cast<Seq>(fb.bitmap.size());
    for (Seq j = std::max(from, b.oldest_alive()); j < i && b.room(); ++j)
        b.add_uncoded(j);
}

void fill_rr(PacketBuilder& b, const SenderState& snd, Seq i, bool fresh) {
    Seq u_last = kNoSeq;
    if (snd.last_feedback()) u_last = snd.last_feedback()->u;
    const Seq u_prime = std::max(b.oldest_alive(), u_last);
    if (fresh && u_last < i) b.add_uncoded(u_last);
    // Most recent unacknowledged symbols; add_uncoded skips the s_u already
    // aboard.
    for (Seq j = i - 1; j >= u_prime && b.room(); --j) b.add_uncoded(j);
}

} // namespace

Packet build_packet(PolicyKind policy, const SenderState& sender, Seq i,
                    RngStream& coding_rng, PolicyCounters* counters) {
    if (i < 0 || i != sender.next_seq() - 1)
        throw std::logic_error("build_packet: s_i must be the latest generated symbol");
    PacketBuilder b(sender, i, counters);
    b.add_uncoded(i); // always fits and is never expired
    const bool fresh = sender.feedback_fresh(i);
    switch (policy) {
    case PolicyKind::RR:
        fill_rr(b, sender, i, fresh);
        break;
    case PolicyKind::WC:
        if (fresh)
            fill_windowed_feedback(b, sender, i, sender.last_feedback()->u,
                                   sender.last_feedback()->beta, policy, coding_rng);
        else
            fill_no_feedback(b, sender, i, NoFeedbackRule::WC, coding_rng, false);
        break;
    case PolicyKind::IWC:
        if (fresh)
            fill_windowed_feedback(b, sender, i, sender.last_feedback()->u,
                                   sender.last_feedback()->beta, policy, coding_rng);
        else
            fill_no_feedback(b, sender, i, NoFeedbackRule::IWC, coding_rng, false);
        break;
    case PolicyKind::IWC_MF:
        if (fresh)
            fill_mf_feedback(b, sender, i);
        else
            fill_no_feedback(b, sender, i, NoFeedbackRule::IWC, coding_rng,
                             sender.params().mf_exclude_confirmed);
        break;
    }
    return b.take();
}

std::vector<Seq> process_entry(ReceiverState& receiver, const PayloadEntry& entry) {
    std::vector<Seq> recovered;
    for (Seq c : entry.constituents) {
        if (c < 0 || c > receiver.current_time())
            throw std::logic_error("received entry references an ungenerated seq");
    }
    if (entry.kind == EntryKind::Uncoded) {
        const Seq j = entry.constituents.at(0);
        if (receiver.deliver(j, entry.payload)) recovered.push_back(j);
        return recovered;
    }
    // Degree-d coded entry: useful only when exactly one constituent is
    // still unknown and worth knowing.
    Seq missing = kNoSeq;
    int known = 0;
    for (Seq c : entry.constituents) {
        if (receiver.delivered(c))
            ++known;
        else
            missing = c;
    }
    if (known != entry.degree() - 1) return recovered;
    if (receiver.expired(missing)) return recovered;
    Payload pl = entry.payload;
    for (Seq c : entry.constituents) {
        if (c == missing) continue;
        const Payload& known_pl = *receiver.payload_of(c);
        for (std::size_t k = 0; k < pl.size(); ++k) pl[k] ^= known_pl[k];
    }
    if (receiver.deliver(missing, std::move(pl))) recovered.push_back(missing);
    return recovered;
}

std::vector<Seq> receive_packet(ReceiverState& receiver, const Packet& pkt) {
    std::vector<Seq> all;
    for (const auto& entry : pkt.entries) {
        auto got = process_entry(receiver, entry);
        all.insert(all.end(), got.begin(), got.end());
    }
    return all;
}

FeedbackMsg make_feedback(PolicyKind policy, const ReceiverState& receiver,
                          int l_o, int l_m) {
    FeedbackMsg fb;
    fb.form = feedback_form(policy);
    const auto [u, beta] = oldest_undelivered(receiver);
    fb.u_field = encode_seq_field(u, l_o);
    if (fb.form == FeedbackForm::Cumulative)
        fb.beta_field = saturate_count(beta, l_m);
    else
        fb.bitmap = delivery_bitmap(receiver, u, l_m);
    return fb;
}

} // namespace alec
