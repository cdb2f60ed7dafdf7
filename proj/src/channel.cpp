#include "alec/channel.hpp"

#include <stdexcept>

namespace alec {

static void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

void validate(const ChannelConfig& cfg) {
    check_prob(cfg.p_s, "p_s");
    check_prob(cfg.p_gb, "p_gb");
    check_prob(cfg.p_bg, "p_bg");
}

Channel::Channel(const ChannelConfig& cfg, RngStream stream)
    : cfg_(cfg), stream_(stream) {
    validate(cfg_);
    if (cfg_.kind == ChannelKind::GilbertElliott) {
        const double denom = cfg_.p_gb + cfg_.p_bg;
        const double p_good = denom > 0.0 ? cfg_.p_bg / denom : 1.0;
        good_ = stream_.bernoulli(p_good);
    }
}

bool Channel::transmit() {
    if (cfg_.kind == ChannelKind::Bernoulli)
        return stream_.bernoulli(cfg_.p_s);
    const bool delivered = good_;
    const double flip = good_ ? cfg_.p_gb : cfg_.p_bg;
    if (stream_.bernoulli(flip)) good_ = !good_;
    return delivered;
}

bool feedback_arrives(double p_fb, RngStream& rng) {
    check_prob(p_fb, "p_fb");
    return rng.bernoulli(p_fb);
}

} // namespace alec
