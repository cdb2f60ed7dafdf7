#include "alec/ingest.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace alec {

namespace {

bool parse_float(const std::string& text, float& out) {
    const char* s = text.c_str();
    char* end = nullptr;
    out = std::strtof(s, &end);
    if (end == s) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

Payload float_payload(float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    return Payload{static_cast<std::uint8_t>(bits),
                   static_cast<std::uint8_t>(bits >> 8),
                   static_cast<std::uint8_t>(bits >> 16),
                   static_cast<std::uint8_t>(bits >> 24)};
}

} // namespace

MeasurementStream read_measurements(std::istream& in) {
    MeasurementStream out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        std::string ts = comma == std::string::npos ? "" : line.substr(0, comma);
        std::string value_text =
            comma == std::string::npos ? line : line.substr(comma + 1);
        float v = 0.0f;
        if (comma == std::string::npos || !parse_float(value_text, v)) {
            if (lineno == 1) continue; // header row
            std::ostringstream msg;
            msg << "line " << lineno << ": cannot parse measurement value '"
                << value_text << "'";
            throw std::runtime_error(msg.str());
        }
        out.timestamps.push_back(std::move(ts));
        out.values.push_back(v);
        out.payloads.push_back(float_payload(v));
    }
    return out;
}

MeasurementStream read_measurements_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open measurement file: " + path);
    return read_measurements(in);
}

} // namespace alec
