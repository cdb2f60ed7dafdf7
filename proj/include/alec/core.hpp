#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace alec {

/// Sequence number of an information symbol; equals its generation timestep.
using Seq = std::int64_t;

constexpr Seq kNoSeq = -1;

using Payload = std::vector<std::uint8_t>;

inline std::size_t payload_bytes(std::size_t payload_bits) {
    return (payload_bits + 7) / 8;
}

/// One information symbol: a sensor measurement identified by its
/// generation instant.
struct SymbolRecord {
    Seq seq = kNoSeq;
    Payload payload;
};

enum class EntryKind { Uncoded, Coded };

/// One symbol slot of a packet: either a plain information symbol or the
/// bitwise XOR of several. `constituents` is kept sorted and distinct; its
/// size is the entry's degree. Constituent lists travel as free simulator
/// metadata (the model's payload accounting counts only the symbol bits).
struct PayloadEntry {
    EntryKind kind = EntryKind::Uncoded;
    std::vector<Seq> constituents;
    Payload payload;

    int degree() const { return static_cast<int>(constituents.size()); }
};

/// Source packet triggered by symbol `seq`. entries[0] always carries that
/// symbol uncoded; total entries never exceed the per-packet budget b.
struct Packet {
    Seq seq = kNoSeq;
    std::vector<PayloadEntry> entries;
};

enum class FeedbackForm { Cumulative, Bitmap };

/// Receiver feedback. `u_field` is the oldest undelivered unexpired
/// sequence number reduced mod 2^l_o (or the next-expected seq when nothing
/// is missing). Cumulative form carries the undelivered count saturated at
/// 2^l_m - 1; Bitmap form carries per-symbol delivery bits for the l_m
/// symbols after u.
struct FeedbackMsg {
    FeedbackForm form = FeedbackForm::Cumulative;
    std::uint32_t u_field = 0;
    std::uint32_t beta_field = 0;
    std::vector<bool> bitmap;
};

/// u -> wire field (mod 2^l_o).
std::uint32_t encode_seq_field(Seq u, int l_o);

/// Wire field -> absolute seq: the largest seq <= reference congruent to
/// the field mod 2^l_o. Exact whenever the true u lies within 2^l_o of the
/// reference, which l_o > log2(delta + 2) guarantees.
Seq decode_seq_field(std::uint32_t field, Seq reference, int l_o);

/// Count -> l_m-bit wire field, saturating at 2^l_m - 1.
std::uint32_t saturate_count(std::int64_t count, int l_m);

/// Destination-side delivery bookkeeping. Delivery is a permanent fact
/// (payloads of delivered symbols are retained for XOR decoding); the
/// unexpired *window* view used for feedback is derived from the current
/// time, so pruning falls out of the expiry rule.
class ReceiverState {
public:
    ReceiverState(Seq delta, std::size_t payload_size_bytes);

    void advance_to(Seq now);

    Seq current_time() const { return now_; }
    Seq delta() const { return delta_; }
    std::size_t payload_size() const { return payload_size_; }

    /// Oldest unexpired seq, clamped at 0.
    Seq window_begin() const { return now_ - delta_ < 0 ? 0 : now_ - delta_; }

    bool expired(Seq j) const { return j < now_ - delta_; }
    bool delivered(Seq j) const;

    /// Payload of a delivered symbol; nullptr otherwise.
    const Payload* payload_of(Seq j) const;

    /// Marks j delivered and stores its payload. Returns false (no-op) when
    /// j is expired, not yet generated, or already delivered.
    bool deliver(Seq j, Payload payload);

    /// Unexpired generated seqs not yet delivered, ascending.
    std::vector<Seq> undelivered_in_window() const;

private:
    Seq now_ = -1;
    Seq delta_;
    std::size_t payload_size_;
    std::vector<std::uint8_t> delivered_; // indexed by seq
    std::vector<Payload> payloads_;       // indexed by seq, set iff delivered
};

/// Sender-side state: the symbol log plus the most recent feedback, decoded
/// to absolute sequence numbers on acceptance.
class SenderState {
public:
    struct Params {
        int b = 3;
        Seq delta = 16;
        int d_nf = 2;
        int l_m = 4;
        int l_o = 17;
        bool mf_exclude_confirmed = true;
        bool mf_aggressive_fill = false;
    };

    struct FeedbackView {
        Seq step = -1;       // timestep the feedback arrived
        Seq u = kNoSeq;      // decoded absolute
        std::int64_t beta = 0;
        FeedbackForm form = FeedbackForm::Cumulative;
        std::vector<bool> bitmap;
    };

    explicit SenderState(Params params) : params_(params) {}

    const Params& params() const { return params_; }

    /// Appends the symbol generated at this timestep; seqs must arrive in
    /// strict 0,1,2,... order.
    void generate(SymbolRecord s);

    void accept_feedback(const FeedbackMsg& fb, Seq step);

    Seq next_seq() const { return static_cast<Seq>(log_.size()); }
    const SymbolRecord& symbol(Seq j) const { return log_.at(static_cast<std::size_t>(j)); }

    const std::optional<FeedbackView>& last_feedback() const { return last_feedback_; }
    bool feedback_fresh(Seq i) const {
        return last_feedback_ && last_feedback_->step == i - 1;
    }

private:
    Params params_;
    std::vector<SymbolRecord> log_;
    std::optional<FeedbackView> last_feedback_;
};

/// XOR of distinct symbols; degree 1 yields an Uncoded entry.
/// Throws std::invalid_argument on empty input, mismatched payload lengths,
/// or duplicate seqs.
PayloadEntry xor_combine(const std::vector<SymbolRecord>& symbols);

/// (u, beta) over the unexpired window: u is the smallest unexpired
/// generated seq not delivered, or currentTime + 1 when the window is fully
/// delivered; beta counts unexpired undelivered seqs.
std::pair<Seq, std::int64_t> oldest_undelivered(const ReceiverState& state);

/// R(u+1) .. R(u+l_m): 1 if delivered, 0 if missing. Positions beyond the
/// receiver's current time report 1 so the sender never acts on symbols
/// that do not exist yet.
std::vector<bool> delivery_bitmap(const ReceiverState& state, Seq u, int l_m);

} // namespace alec
