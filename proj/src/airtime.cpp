#include "alec/airtime.hpp"

#include <cstdio>
#include <stdexcept>

namespace alec {

void validate(const LoRaParams& p) {
    if (p.sf < 7 || p.sf > 12) throw std::invalid_argument("SF must be in [7, 12]");
    if (p.bandwidth_hz <= 0) throw std::invalid_argument("bandwidth must be > 0");
    if (p.preamble_symbols < 0) throw std::invalid_argument("preamble count must be >= 0");
    if (p.header_flag != 0 && p.header_flag != 1)
        throw std::invalid_argument("h must be 0 or 1");
    if (p.low_dr_flag != 0 && p.low_dr_flag != 1)
        throw std::invalid_argument("q must be 0 or 1");
    if (p.coding_rate_index < 1 || p.coding_rate_index > 4)
        throw std::invalid_argument("c must be in [1, 4]");
    if (p.bytes_per_symbol < 1) throw std::invalid_argument("m must be >= 1");
    if (!(p.frame_period_ms > 0)) throw std::invalid_argument("T_p must be > 0");
    if (p.sf - 2 * p.low_dr_flag <= 0)
        throw std::invalid_argument("SF - 2q must be > 0");
}

double frame_airtime_ms(int b, const LoRaParams& p) {
    validate(p);
    if (b < 1) throw std::invalid_argument("b must be >= 1");
    const std::int64_t num = 2ll * b * p.bytes_per_symbol - p.sf - 5ll * p.header_flag + 11;
    const std::int64_t den = p.sf - 2ll * p.low_dr_flag;
    const std::int64_t ceil_term = num <= 0 ? 0 : (num + den - 1) / den;
    std::int64_t payload_symbols = ceil_term * (p.coding_rate_index + 4);
    if (payload_symbols < 0) payload_symbols = 0;
    // quarter-symbol units: n_pr + 4.25 preamble, 8 sync, payload
    const std::int64_t quarter_symbols =
        4ll * p.preamble_symbols + 17 + 32 + 4ll * payload_symbols;
    // ms = quarter_symbols * 2^SF * 1000 / (4 * w)
    const double num_ms =
        static_cast<double>(quarter_symbols) * static_cast<double>(1ll << p.sf) * 250.0;
    return num_ms / static_cast<double>(p.bandwidth_hz);
}

double duty_cycle(int b, const LoRaParams& p) {
    return frame_airtime_ms(b, p) / p.frame_period_ms;
}

double min_coding_rate(int b) {
    if (b < 1) throw std::invalid_argument("b must be >= 1");
    return 1.0 / static_cast<double>(b);
}

std::string duty_cycle_table_csv(int b_max, const LoRaParams& p) {
    if (b_max < 1) throw std::invalid_argument("b_max must be >= 1");
    std::string out = "b,airtime_ms,mcr,duty_cycle_pct\n";
    char line[128];
    for (int b = 1; b <= b_max; ++b) {
        std::snprintf(line, sizeof line, "%d,%.3f,%.2f,%.3f\n", b,
                      frame_airtime_ms(b, p), min_coding_rate(b),
                      100.0 * duty_cycle(b, p));
        out += line;
    }
    return out;
}

} // namespace alec
