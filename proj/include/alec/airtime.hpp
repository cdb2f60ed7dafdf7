#pragma once

#include <cstdint>
#include <string>

namespace alec {

/// LoRa frame parameters. SF 7 / 125 kHz / 4-byte symbols / one frame per
/// minute match the energy-monitoring deployment; preamble 8, explicit
/// header off, low-data-rate off, coding-rate index 1 are the reference
/// airtime-table settings.
struct LoRaParams {
    int sf = 7;                     // spreading factor, 7..12
    std::int64_t bandwidth_hz = 125000;
    int preamble_symbols = 8;       // n_pr
    int header_flag = 0;            // h: 1 disables the explicit header
    int low_dr_flag = 0;            // q: 1 when low-data-rate optimization is on
    int coding_rate_index = 1;      // c, 1..4
    int bytes_per_symbol = 4;       // m
    double frame_period_ms = 60000; // T_p
};

void validate(const LoRaParams& p);

/// On-air time of a frame carrying b application symbols, in milliseconds:
///
///   l_f(b) = [(n_pr + 4.25) + 8
///             + max(ceil((2bm - SF - 5h + 11) / (SF - 2q)) * (c + 4), 0)]
///            * 2^SF / w
///
/// Computed in integer quarter-symbols so the millisecond value is exact up
/// to one double rounding.
double frame_airtime_ms(int b, const LoRaParams& p);

/// frame_airtime_ms(b) / T_p, as a fraction.
double duty_cycle(int b, const LoRaParams& p);

/// Worst-case ratio of fresh information to frame symbols: exactly 1/b.
double min_coding_rate(int b);

/// The duty-cycle table as CSV: airtime at three decimals, MCR at two, duty
/// cycle at three decimals of percent.
/// Columns: b,airtime_ms,mcr,duty_cycle_pct
std::string duty_cycle_table_csv(int b_max, const LoRaParams& p);

} // namespace alec
