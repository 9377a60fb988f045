#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vdtp/rng.hpp"

namespace vdtp {

// ---- mobility -------------------------------------------------------------

// One speed regime and the inter-node distance process it drives: a
// mean-reverting random walk whose noise scales with vehicle speed, so
// faster regimes wander further into the lossy far zone.
struct MobilityProfile {
    std::string name;          // "low", "high"
    double speed_min = 20.0;   // km/h
    double speed_max = 30.0;   // km/h
    double mean_distance = 77.0;   // meters
    double distance_min = 5.0;     // meters
    double distance_max = 350.0;   // meters
    double reversion_rate = 0.05;  // 1/seconds
    double noise_coefficient = 0.5;  // meters per sqrt(second) per (km/h)

    bool operator==(const MobilityProfile&) const = default;
};

void validate(const MobilityProfile& m);

inline MobilityProfile low_speed_profile() {
    return MobilityProfile{"low", 20.0, 30.0, 77.0, 5.0, 350.0, 0.05, 0.5};
}

inline MobilityProfile high_speed_profile() {
    return MobilityProfile{"high", 40.0, 50.0, 77.0, 5.0, 350.0, 0.05, 0.5};
}

// One step of the distance process over dt seconds at the given speed
// (km/h), reflected into [distance_min, distance_max]. The normal draw xi
// comes from rng.
double advance_distance(const MobilityProfile& m, double d, double speed_kmh, double dt, Rng& rng);

// Seconds between distance updates in the simulator.
inline constexpr double kMobilityTick = 0.1;

// ---- channel ---------------------------------------------------------------

struct ChannelParams {
    double capacity = 5'500'000.0;  // bits/second
    double radio_range = 1100.0;    // meters; at or beyond, loss is certain
    double base_loss = 1.2e-4;      // probability at zero distance
    double loss_exponent = 4.0;
    double processing_delay = 0.002;  // seconds per hop direction
    uint64_t rng_seed = 0;

    bool operator==(const ChannelParams&) const = default;
};

void validate(const ChannelParams& c);

// p = 1 at or beyond radio_range, else
// base_loss + (1 - base_loss) * (d / radio_range)^loss_exponent.
double loss_probability(double distance, const ChannelParams& c);

// Outcome of pushing one datagram across the link.
struct Delivered {
    double arrival = 0;  // absolute seconds
};

// Samples loss at the current distance; nullopt means dropped. On delivery
// the arrival time adds serialization (bytes*8/capacity), propagation
// (d / 3e8), and processing_delay.
std::optional<Delivered> transmit(std::size_t packet_bytes, double distance,
                                  const ChannelParams& c, Rng& rng, double now);

}  // namespace vdtp
