#include "alec/trace.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace alec {

EntryDesc describe(const PayloadEntry& entry) {
    return EntryDesc{entry.kind, entry.constituents};
}

namespace {

void put_entry(std::ostream& os, const EntryDesc& e) {
    os << (e.kind == EntryKind::Uncoded ? "u:" : "c:");
    for (std::size_t k = 0; k < e.constituents.size(); ++k) {
        if (k) os << ',';
        os << e.constituents[k];
    }
}

char tri(bool present, bool value) { return present ? (value ? '1' : '0') : '-'; }

struct Writer {
    std::ostream& os;

    void operator()(const SourceTxEvent& e) const {
        os << "tx\t" << e.step << "\tup=" << (e.uplink_delivered ? '1' : '0')
           << "\trel=" << tri(e.relay_present, e.relay_overheard) << '\t';
        for (std::size_t k = 0; k < e.entries.size(); ++k) {
            if (k) os << ';';
            put_entry(os, e.entries[k]);
        }
        os << '\n';
    }
    void operator()(const RelayTxEvent& e) const {
        os << "rtx\t" << e.step << "\tdown=" << (e.downlink_delivered ? '1' : '0') << '\t';
        put_entry(os, e.entry);
        os << '\n';
    }
    void operator()(const EntryRxEvent& e) const {
        os << "rx\t" << e.step << '\t'
           << (e.origin == EntryOrigin::Source ? "src" : "rel") << '\t';
        put_entry(os, e.entry);
        os << "\t->\t";
        for (std::size_t k = 0; k < e.recovered.size(); ++k) {
            if (k) os << ',';
            os << e.recovered[k];
        }
        os << '\n';
    }
    void operator()(const FeedbackEvent& e) const {
        os << "fb\t" << e.step << '\t'
           << (e.form == FeedbackForm::Cumulative ? "cum" : "map")
           << "\tu=" << e.u_field;
        if (e.form == FeedbackForm::Cumulative) {
            os << "\tbeta=" << e.beta_field;
        } else {
            os << "\tbits=";
            for (bool bit : e.bitmap) os << (bit ? '1' : '0');
        }
        os << "\tsnd=" << (e.sender_received ? '1' : '0')
           << "\trel=" << tri(e.relay_present, e.relay_overheard) << '\n';
    }
};

} // namespace

void write_trace(std::ostream& os, const Trace& trace) {
    os << "# alec trace n=" << trace.n << " delta=" << trace.delta
       << " l_o=" << trace.l_o << " l_m=" << trace.l_m << '\n';
    Writer w{os};
    for (const auto& ev : trace.events) std::visit(w, ev);
}

void write_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open trace file: " + path);
    write_trace(os, trace);
}

} // namespace alec
