#pragma once

#include "alec/rng.hpp"

namespace alec {

enum class ChannelKind { Bernoulli, GilbertElliott };

struct ChannelConfig {
    ChannelKind kind = ChannelKind::Bernoulli;
    double p_s = 0.7;   // Bernoulli: probability of correct reception
    double p_gb = 0.25; // GE: good -> bad transition probability
    double p_bg = 0.5;  // GE: bad -> good transition probability
};

void validate(const ChannelConfig& cfg);

/// Packet-erasure channel over a dedicated RNG substream.
///
/// Every transmit() consumes exactly one draw from the substream, for both
/// kinds: Bernoulli uses it for the erasure itself; Gilbert-Elliott decides
/// the outcome from the current state (good delivers, bad erases) and uses
/// the draw for the state transition at the packet boundary. The GE initial
/// state costs one additional draw at construction (sampled from the
/// stationary distribution, so short runs carry no burn-in bias).
class Channel {
public:
    Channel(const ChannelConfig& cfg, RngStream stream);

    bool transmit();

    bool ge_in_good_state() const { return good_; }

private:
    ChannelConfig cfg_;
    RngStream stream_;
    bool good_ = true;
};

/// Independent Bernoulli(p_fb) draw deciding whether an emitted feedback
/// reaches the sender. p_fb folds together the receiver's opportunity to
/// transmit and the feedback link's erasure.
bool feedback_arrives(double p_fb, RngStream& rng);

} // namespace alec
