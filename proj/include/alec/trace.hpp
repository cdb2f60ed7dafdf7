#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "alec/core.hpp"

namespace alec {

struct EntryDesc {
    EntryKind kind = EntryKind::Uncoded;
    std::vector<Seq> constituents;
};

EntryDesc describe(const PayloadEntry& entry);

/// One source packet as transmitted, with the uplink and relay-overhear
/// outcomes.
struct SourceTxEvent {
    Seq step = 0;
    std::vector<EntryDesc> entries;
    bool uplink_delivered = false;
    bool relay_present = false;
    bool relay_overheard = false;
};

/// One relay transmission (one entry per transmission).
struct RelayTxEvent {
    Seq step = 0;
    EntryDesc entry;
    bool downlink_delivered = false;
};

enum class EntryOrigin { Source, Relay };

/// One entry processed at the destination, with the deliveries it caused.
struct EntryRxEvent {
    Seq step = 0;
    EntryOrigin origin = EntryOrigin::Source;
    EntryDesc entry;
    std::vector<Seq> recovered;
};

/// One feedback emission with its wire fields and who received it.
struct FeedbackEvent {
    Seq step = 0;
    FeedbackForm form = FeedbackForm::Cumulative;
    std::uint32_t u_field = 0;
    std::uint32_t beta_field = 0;
    std::vector<bool> bitmap;
    bool sender_received = false;
    bool relay_present = false;
    bool relay_overheard = false;
};

using TraceEvent = std::variant<SourceTxEvent, RelayTxEvent, EntryRxEvent, FeedbackEvent>;

/// Full per-run event log plus the parameters a replayer needs.
struct Trace {
    std::int64_t n = 0;
    Seq delta = 16;
    int l_o = 17;
    int l_m = 4;
    std::vector<TraceEvent> events;
};

/// Line-oriented text form, one record per event, stable field order:
///
///   tx  <step> up=<0|1> rel=<0|1|-> <entry>[;<entry>...]
///   rtx <step> down=<0|1> <entry>
///   rx  <step> <src|rel> <entry> -> [<seq>[,<seq>...]]
///   fb  <step> cum u=<field> beta=<field> snd=<0|1> rel=<0|1|->
///   fb  <step> map u=<field> bits=<01...> snd=<0|1> rel=<0|1|->
///
/// with <entry> = u:<seq> for uncoded and c:<seq>,<seq>,... for coded.
void write_trace(std::ostream& os, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);

} // namespace alec
