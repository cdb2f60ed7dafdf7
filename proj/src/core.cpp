#include "alec/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace alec {

std::uint32_t encode_seq_field(Seq u, int l_o) {
    if (l_o < 1 || l_o > 32) throw std::invalid_argument("l_o must be in [1, 32]");
    const std::uint64_t mod = 1ull << l_o;
    std::int64_t r = u % static_cast<std::int64_t>(mod);
    if (r < 0) r += static_cast<std::int64_t>(mod);
    return static_cast<std::uint32_t>(r);
}

Seq decode_seq_field(std::uint32_t field, Seq reference, int l_o) {
    if (l_o < 1 || l_o > 32) throw std::invalid_argument("l_o must be in [1, 32]");
    const std::int64_t mod = 1ll << l_o;
    std::int64_t diff = (reference - static_cast<std::int64_t>(field)) % mod;
    if (diff < 0) diff += mod;
    return reference - diff;
}

std::uint32_t saturate_count(std::int64_t count, int l_m) {
    if (l_m < 1 || l_m > 32) throw std::invalid_argument("l_m must be in [1, 32]");
    if (count < 0) throw std::invalid_argument("negative count");
    const std::uint64_t cap = (l_m == 32) ? 0xFFFFFFFFull : (1ull << l_m) - 1;
    const auto v = static_cast<std::uint64_t>(count);
    return static_cast<std::uint32_t>(v < cap ? v : cap);
}

ReceiverState::ReceiverState(Seq delta, std::size_t payload_size_bytes)
    : delta_(delta), payload_size_(payload_size_bytes) {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (payload_size_bytes == 0) throw std::invalid_argument("payload size must be > 0");
}

void ReceiverState::advance_to(Seq now) {
    if (now > now_) now_ = now;
}

bool ReceiverState::delivered(Seq j) const {
    return j >= 0 && static_cast<std::size_t>(j) < delivered_.size() &&
           delivered_[static_cast<std::size_t>(j)] != 0;
}

const Payload* ReceiverState::payload_of(Seq j) const {
    if (!delivered(j)) return nullptr;
    return &payloads_[static_cast<std::size_t>(j)];
}

bool ReceiverState::deliver(Seq j, Payload payload) {
    if (j < 0 || j > now_ || expired(j) || delivered(j)) return false;
    if (payload.size() != payload_size_)
        throw std::invalid_argument("payload size mismatch on delivery");
    const auto idx = static_cast<std::size_t>(j);
    if (idx >= delivered_.size()) {
        delivered_.resize(idx + 1, 0);
        payloads_.resize(idx + 1);
    }
    delivered_[idx] = 1;
    payloads_[idx] = std::move(payload);
    return true;
}

std::vector<Seq> ReceiverState::undelivered_in_window() const {
    std::vector<Seq> out;
    if (now_ < 0) return out;
    for (Seq j = window_begin(); j <= now_; ++j)
        if (!delivered(j)) out.push_back(j);
    return out;
}

PayloadEntry xor_combine(const std::vector<SymbolRecord>& symbols) {
    if (symbols.empty()) throw std::invalid_argument("xor_combine: empty input");
    const std::size_t len = symbols.front().payload.size();
    PayloadEntry entry;
    entry.payload.assign(len, 0);
    entry.constituents.reserve(symbols.size());
    for (const auto& s : symbols) {
        if (s.payload.size() != len)
            throw std::invalid_argument("xor_combine: payload length mismatch");
        entry.constituents.push_back(s.seq);
        for (std::size_t k = 0; k < len; ++k) entry.payload[k] ^= s.payload[k];
    }
    std::sort(entry.constituents.begin(), entry.constituents.end());
    if (std::adjacent_find(entry.constituents.begin(), entry.constituents.end()) !=
        entry.constituents.end())
        throw std::invalid_argument("xor_combine: duplicate seq");
    entry.kind = symbols.size() == 1 ? EntryKind::Uncoded : EntryKind::Coded;
    return entry;
}

std::pair<Seq, std::int64_t> oldest_undelivered(const ReceiverState& state) {
    const Seq now = state.current_time();
    Seq u = kNoSeq;
    std::int64_t beta = 0;
    for (Seq j = state.window_begin(); j <= now; ++j) {
        if (!state.delivered(j)) {
            if (u == kNoSeq) u = j;
            ++beta;
        }
    }
    if (u == kNoSeq) u = now + 1; // fully delivered window: next-expected seq
    return {u, beta};
}

std::vector<bool> delivery_bitmap(const ReceiverState& state, Seq u, int l_m) {
    if (l_m < 1) throw std::invalid_argument("l_m must be >= 1");
    std::vector<bool> bits(static_cast<std::size_t>(l_m));
    for (int k = 0; k < l_m; ++k) {
        const Seq j = u + 1 + k;
        bits[static_cast<std::size_t>(k)] = j > state.current_time() || state.delivered(j);
    }
    return bits;
}

void SenderState::generate(SymbolRecord s) {
    if (s.seq != next_seq())
        throw std::invalid_argument("symbols must be generated in sequence");
    log_.push_back(std::move(s));
}

void SenderState::accept_feedback(const FeedbackMsg& fb, Seq step) {
    FeedbackView v;
    v.step = step;
    // The reported u never exceeds the next-expected seq at formation time.
    v.u = decode_seq_field(fb.u_field, step + 1, params_.l_o);
    v.form = fb.form;
    if (fb.form == FeedbackForm::Cumulative) {
        v.beta = fb.beta_field;
    } else {
        v.bitmap = fb.bitmap;
    }
    last_feedback_ = std::move(v);
}

} // namespace alec
