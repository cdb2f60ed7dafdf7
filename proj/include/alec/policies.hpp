#pragma once

#include <cstdint>
#include <vector>

#include "alec/core.hpp"
#include "alec/rng.hpp"

namespace alec {

enum class PolicyKind { RR, WC, IWC, IWC_MF };

/// RR, WC and IWC report (u, beta) cumulative feedback; IWC-MF replaces the
/// count with a per-symbol delivery bitmap of the same width.
FeedbackForm feedback_form(PolicyKind policy);

struct PolicyCounters {
    std::int64_t xor_ops = 0;       // XORs spent building coded entries
    std::int64_t coded_entries = 0; // coded entries placed in packets
};

/// Builds packet p_i for the given policy. entries[0] is always s_i; the
/// remaining slots follow the policy's feedback/no-feedback branches. Never
/// materializes an expired symbol; degenerate windows simply yield smaller
/// packets. Coded constituents are drawn uniformly without replacement from
/// the branch's coding set.
Packet build_packet(PolicyKind policy, const SenderState& sender, Seq i,
                    RngStream& coding_rng, PolicyCounters* counters = nullptr);

/// Processes one received entry. Uncoded: delivers the symbol when unexpired
/// and new. Coded (degree d): recovers the single missing constituent when
/// exactly d-1 are already delivered and the last one is unexpired and
/// undelivered; anything else is discarded on the spot, never buffered.
/// Returns newly delivered seqs. Throws std::logic_error if a constituent
/// refers to a seq the receiver cannot have seen generated yet.
std::vector<Seq> process_entry(ReceiverState& receiver, const PayloadEntry& entry);

/// Single pass over the packet's entries in payload order; recoveries made
/// earlier in the pass count as delivered for later entries.
std::vector<Seq> receive_packet(ReceiverState& receiver, const Packet& pkt);

/// Feedback for the policy at the receiver's current instant, field widths
/// enforced (u mod 2^l_o, beta saturated at 2^l_m - 1).
FeedbackMsg make_feedback(PolicyKind policy, const ReceiverState& receiver,
                          int l_o, int l_m);

} // namespace alec
