#include "alec/relay.hpp"

#include <algorithm>
#include <stdexcept>

namespace alec {

RelayState::RelayState(int r_m, int r_t, int d_nf, Seq delta, int l_o)
    : r_m_(r_m), r_t_(r_t), d_nf_(d_nf), delta_(delta), l_o_(l_o) {
    if (r_m < 1) throw std::invalid_argument("R_m must be >= 1");
    if (r_t < 1) throw std::invalid_argument("R_t must be >= 1");
    if (d_nf < 1) throw std::invalid_argument("d_nf must be >= 1");
}

bool RelayState::in_buffer(Seq j) const { return find(j) != nullptr; }

const SymbolRecord* RelayState::find(Seq j) const {
    for (const auto& s : buffer_)
        if (s.seq == j) return &s;
    return nullptr;
}

void RelayState::overhear_packet(const Packet& pkt, Seq step) {
    if (fresh_step_ != step) {
        fresh_this_step_.clear();
        fresh_step_ = step;
    }
    for (const auto& e : pkt.entries) {
        if (e.kind != EntryKind::Uncoded) continue; // coded symbols are discarded
        const Seq j = e.constituents.at(0);
        if (in_buffer(j)) continue;
        if (static_cast<int>(buffer_.size()) == r_m_) buffer_.pop_front();
        buffer_.push_back(SymbolRecord{j, e.payload});
        fresh_this_step_.push_back(j);
        ++new_since_tx_;
    }
}

void RelayState::overhear_feedback(const FeedbackMsg& fb, Seq step) {
    last_u_ = decode_seq_field(fb.u_field, step + 1, l_o_);
    last_fb_step_ = step;
}

std::vector<PayloadEntry> RelayState::forward_decision(RelayPolicy policy, Seq step,
                                                       RngStream& rng,
                                                       RelayCounters* counters) {
    std::vector<PayloadEntry> out;
    if (fresh_step_ == step && counters)
        counters->symbols_buffered += static_cast<std::int64_t>(fresh_this_step_.size());

    if (policy == RelayPolicy::UC_R) {
        if (fresh_step_ != step) return out;
        for (Seq j : fresh_this_step_) {
            const SymbolRecord* s = find(j);
            if (!s || s->seq < step - delta_) continue;
            out.push_back(xor_combine({*s}));
        }
        fresh_this_step_.clear();
        return out;
    }

    if (new_since_tx_ < r_t_) return out;
    new_since_tx_ = 0;
    const Seq phase_step = last_forward_step_;
    last_forward_step_ = step;
    if (buffer_.empty()) return out;

    // Uncoded s_u only on feedback heard since the previous forwarding phase
    // whose u is still unexpired and buffered.
    if (last_fb_step_ && *last_fb_step_ >= phase_step && last_u_ &&
        *last_u_ >= step - delta_) {
        if (const SymbolRecord* s = find(*last_u_)) {
            out.push_back(xor_combine({*s}));
            return out;
        }
    }

    const auto m = static_cast<std::int64_t>(buffer_.size());
    const std::int64_t d = std::min<std::int64_t>(d_nf_, m);
    // Partial Fisher-Yates over buffer indices: d distinct picks, d draws.
    std::vector<std::int64_t> idx(buffer_.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<std::int64_t>(k);
    std::vector<SymbolRecord> chosen;
    chosen.reserve(static_cast<std::size_t>(d));
    for (std::int64_t k = 0; k < d; ++k) {
        const auto pick = k + static_cast<std::int64_t>(
                                  rng.next_below(static_cast<std::uint64_t>(m - k)));
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
        chosen.push_back(buffer_[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]);
    }
    PayloadEntry entry = xor_combine(chosen);
    // A degree-1 pick degenerates to an uncoded transmission; suppress it if
    // the symbol is already expired.
    if (entry.kind == EntryKind::Uncoded && entry.constituents[0] < step - delta_)
        return out;
    if (counters && entry.kind == EntryKind::Coded) {
        counters->coded_entries += 1;
        counters->xor_ops += d - 1;
    }
    out.push_back(std::move(entry));
    return out;
}

} // namespace alec
