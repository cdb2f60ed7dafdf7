#include "alec/degree.hpp"

#include <cmath>
#include <stdexcept>

namespace alec {

void validate_context(const DegreeContext& ctx) {
    if (ctx.gap < 2) throw std::invalid_argument("degree context: gap must be >= 2");
    if (!(ctx.beta > 1 && ctx.beta < ctx.gap))
        throw std::invalid_argument("degree context: need 1 < beta < gap");
}

std::uint64_t binomial_exact(int n, int k) {
    if (n < 0 || n > 66) throw std::invalid_argument("binomial_exact: n out of range");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<std::uint64_t>(n - k + i);
        r /= static_cast<std::uint64_t>(i); // exact: r holds C(n-k+i, i)
    }
    return static_cast<std::uint64_t>(r);
}

static void check_degree_range(const DegreeContext& ctx, std::int64_t d) {
    validate_context(ctx);
    if (d < 1 || d > ctx.gap - ctx.beta)
        throw std::invalid_argument("degree out of range [1, gap - beta]");
}

Rational64 objective(const DegreeContext& ctx, std::int64_t d) {
    check_degree_range(ctx, d);
    if (ctx.gap > 64)
        throw std::invalid_argument("exact objective supports gap <= 64");
    const int gap = static_cast<int>(ctx.gap);
    const int beta = static_cast<int>(ctx.beta);
    const int deg = static_cast<int>(d);
    Rational64 r;
    r.num = static_cast<std::uint64_t>(beta - 1) * binomial_exact(gap - beta, deg - 1);
    r.den = binomial_exact(gap - 1, deg);
    return r;
}

double objective_log(const DegreeContext& ctx, std::int64_t d) {
    check_degree_range(ctx, d);
    auto log_binom = [](double n, double k) {
        return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
    };
    const double gap = static_cast<double>(ctx.gap);
    const double beta = static_cast<double>(ctx.beta);
    const double deg = static_cast<double>(d);
    return std::log(beta - 1) + log_binom(gap - beta, deg - 1) - log_binom(gap - 1, deg);
}

std::int64_t optimal_degree_bruteforce(const DegreeContext& ctx) {
    validate_context(ctx);
    const std::int64_t d_max = ctx.gap - ctx.beta;
    if (ctx.gap <= 64) {
        std::int64_t best = 1;
        Rational64 best_val = objective(ctx, 1);
        for (std::int64_t d = 2; d <= d_max; ++d) {
            const Rational64 v = objective(ctx, d);
            if (best_val < v) {
                best = d;
                best_val = v;
            }
        }
        return best;
    }
    std::int64_t best = 1;
    double best_val = objective_log(ctx, 1);
    for (std::int64_t d = 2; d <= d_max; ++d) {
        const double v = objective_log(ctx, d);
        if (v > best_val + 1e-9) {
            best = d;
            best_val = v;
        }
    }
    return best;
}

std::int64_t optimal_degree_closed(const DegreeContext& ctx) {
    validate_context(ctx);
    const std::int64_t by_slope = ctx.gap / (ctx.beta - 1);
    const std::int64_t cap = ctx.gap - ctx.beta;
    return by_slope < cap ? by_slope : cap;
}

std::int64_t no_feedback_degree(NoFeedbackRule rule, std::int64_t coding_set_size,
                                std::int64_t d_nf, RngStream& rng) {
    if (coding_set_size < 1) throw std::invalid_argument("coding set must be non-empty");
    if (d_nf < 1) throw std::invalid_argument("d_nf must be >= 1");
    if (rule == NoFeedbackRule::WC)
        return 1 + static_cast<std::int64_t>(
                       rng.next_below(static_cast<std::uint64_t>(coding_set_size)));
    return d_nf < coding_set_size ? d_nf : coding_set_size;
}

} // namespace alec
