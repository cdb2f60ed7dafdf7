#pragma once

#include <cstdint>

#include "alec/rng.hpp"

namespace alec {

/// Sender's view when coding after a feedback: gap = i - u spans s_u through
/// s_{i-1}; beta of those are undelivered. Coding only happens in the regime
/// 1 < beta < gap, so that is the validity domain.
struct DegreeContext {
    std::int64_t gap;
    std::int64_t beta;
};

void validate_context(const DegreeContext& ctx);

/// Exact nonnegative rational. Comparison cross-multiplies in 128 bits,
/// which is exact for every value the degree objective can produce with
/// gap <= 64 (numerators stay below 2^63).
struct Rational64 {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational64& a, const Rational64& b) {
        return static_cast<unsigned __int128>(a.num) * b.den ==
               static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend bool operator<(const Rational64& a, const Rational64& b) {
        return static_cast<unsigned __int128>(a.num) * b.den <
               static_cast<unsigned __int128>(b.num) * a.den;
    }
};

/// C(n, k) computed exactly. Requires n <= 66 so the result fits in 64 bits.
std::uint64_t binomial_exact(int n, int k);

/// Probability that a degree-d draw from the coding set {s_{u+1}..s_{i-1}}
/// (gap - 1 symbols, beta - 1 of them undelivered) hits exactly one
/// undelivered symbol:
///
///     (beta - 1) * C(gap - beta, d - 1) / C(gap - 1, d)
///
/// Evaluated exactly; requires gap <= 64 (use objective_log beyond that).
/// Throws std::invalid_argument when d is outside [1, gap - beta].
Rational64 objective(const DegreeContext& ctx, std::int64_t d);

/// Same objective in log domain via lgamma; relative error ~1e-12. Valid for
/// any gap the int64 fields can hold.
double objective_log(const DegreeContext& ctx, std::int64_t d);

/// Smallest d in [1, gap - beta] maximizing the objective. Exact-rational
/// scan for gap <= 64, log-domain scan (tolerance 1e-9 treated as a tie)
/// above that.
std::int64_t optimal_degree_bruteforce(const DegreeContext& ctx);

/// Closed-form optimal degree: min(floor(gap / (beta - 1)), gap - beta).
/// Constant number of integer operations; always lands in [1, gap - beta]
/// and attains the brute-force maximum (ties possible at the peak, so the
/// chosen index may differ from the scan's smallest-on-tie answer).
std::int64_t optimal_degree_closed(const DegreeContext& ctx);

enum class NoFeedbackRule { WC, IWC };

/// Degree for coded symbols built without fresh feedback: WC draws uniformly
/// from {1..codingSetSize}; IWC uses the fixed no-feedback degree capped at
/// the set size.
std::int64_t no_feedback_degree(NoFeedbackRule rule, std::int64_t coding_set_size,
                                std::int64_t d_nf, RngStream& rng);

} // namespace alec
