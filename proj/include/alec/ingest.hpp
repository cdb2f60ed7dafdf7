#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "alec/core.hpp"

namespace alec {

/// Measurement rows parsed from a (timestamp, value) CSV. Each value is
/// carried as the 4 little-endian bytes of its 32-bit float representation.
struct MeasurementStream {
    std::vector<Payload> payloads;
    std::vector<float> values;
    std::vector<std::string> timestamps;
};

/// Parses a measurement CSV. A first line whose value column is not numeric
/// is treated as a header; any later malformed row raises std::runtime_error
/// naming the line number.
MeasurementStream read_measurements(std::istream& in);
MeasurementStream read_measurements_file(const std::string& path);

} // namespace alec
