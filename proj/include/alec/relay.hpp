#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "alec/core.hpp"
#include "alec/rng.hpp"

namespace alec {

enum class RelayPolicy { UC_R, IWC_R };

struct RelayCounters {
    std::int64_t xor_ops = 0;
    std::int64_t coded_entries = 0;
    std::int64_t symbols_buffered = 0; // total symbols ever newly buffered
};

/// Overhearing relay. It buffers uncoded symbols from overheard source
/// packets (FIFO, capacity R_m, deduplicated against the current buffer) and
/// notes the oldest-undelivered seq from overheard feedback. UC-R forwards
/// every newly buffered symbol immediately, one transmission each. IWC-R
/// forwards one entry per R_t newly buffered symbols: the oldest undelivered
/// symbol s_u when a feedback has been overheard since the last forwarding
/// phase, its u is still unexpired and the symbol sits in the buffer;
/// otherwise a coded symbol of degree min(d_nf, buffer occupancy).
class RelayState {
public:
    RelayState(int r_m, int r_t, int d_nf, Seq delta, int l_o);

    /// Reception phase, packets: buffers uncoded entries (coded entries are
    /// discarded), bumps the new-symbol counter.
    void overhear_packet(const Packet& pkt, Seq step);

    /// Reception phase, feedback: notes u (decoded to an absolute seq) and
    /// when it was heard.
    void overhear_feedback(const FeedbackMsg& fb, Seq step);

    /// Forwarding phase; call once per timestep after overhearing. Each
    /// returned entry is one relay transmission.
    std::vector<PayloadEntry> forward_decision(RelayPolicy policy, Seq step,
                                               RngStream& rng,
                                               RelayCounters* counters = nullptr);

    int buffered() const { return static_cast<int>(buffer_.size()); }
    int new_since_last_tx() const { return new_since_tx_; }
    std::optional<Seq> last_overheard_u() const { return last_u_; }

private:
    bool in_buffer(Seq j) const;
    const SymbolRecord* find(Seq j) const;

    int r_m_;
    int r_t_;
    int d_nf_;
    Seq delta_;
    int l_o_;
    std::deque<SymbolRecord> buffer_;
    std::vector<Seq> fresh_this_step_;
    Seq fresh_step_ = -1;
    int new_since_tx_ = 0;
    std::optional<Seq> last_u_;
    std::optional<Seq> last_fb_step_;
    Seq last_forward_step_ = -1;
};

} // namespace alec
