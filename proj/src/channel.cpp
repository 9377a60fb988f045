#include "vdtp/channel.hpp"

#include <cmath>

namespace vdtp {

void validate(const MobilityProfile& m) {
    if (!(m.speed_min > 0) || m.speed_min > m.speed_max) {
        throw std::invalid_argument("mobility: need 0 < speed_min <= speed_max");
    }
    if (!(m.distance_min < m.mean_distance && m.mean_distance < m.distance_max)) {
        throw std::invalid_argument("mobility: need d_min < mean_distance < d_max");
    }
    if (!(m.reversion_rate > 0) || !(m.noise_coefficient >= 0)) {
        throw std::invalid_argument("mobility: negative rate or noise");
    }
}

double advance_distance(const MobilityProfile& m, double d, double speed_kmh, double dt,
                        Rng& rng) {
    double xi = rng.gaussian();
    double next = d + m.reversion_rate * (m.mean_distance - d) * dt +
                  m.noise_coefficient * speed_kmh * std::sqrt(dt) * xi;
    while (next < m.distance_min || next > m.distance_max) {
        if (next < m.distance_min) next = 2 * m.distance_min - next;
        if (next > m.distance_max) next = 2 * m.distance_max - next;
    }
    return next;
}

void validate(const ChannelParams& c) {
    if (!(c.capacity > 0)) {
        throw std::invalid_argument("channel: capacity must be positive");
    }
    if (!(c.base_loss >= 0 && c.base_loss < 1)) {
        throw std::invalid_argument("channel: base_loss must be in [0, 1)");
    }
    if (!(c.loss_exponent > 0)) {
        throw std::invalid_argument("channel: loss_exponent must be positive");
    }
    if (!(c.radio_range > 0)) {
        throw std::invalid_argument("channel: radio_range must be positive");
    }
    if (!(c.processing_delay >= 0)) {
        throw std::invalid_argument("channel: processing_delay must be non-negative");
    }
}

double loss_probability(double distance, const ChannelParams& c) {
    if (distance >= c.radio_range) return 1.0;
    return c.base_loss +
           (1.0 - c.base_loss) * std::pow(distance / c.radio_range, c.loss_exponent);
}

std::optional<Delivered> transmit(std::size_t packet_bytes, double distance,
                                  const ChannelParams& c, Rng& rng, double now) {
    if (rng.uniform01() < loss_probability(distance, c)) {
        return std::nullopt;
    }
    double arrival = now + static_cast<double>(packet_bytes) * 8.0 / c.capacity +
                     distance / 3e8 + c.processing_delay;
    return Delivered{arrival};
}

}  // namespace vdtp
