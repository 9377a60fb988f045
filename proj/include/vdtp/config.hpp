#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vdtp/packet.hpp"

namespace vdtp {

// The three knobs governing one transfer: segment size, petitioner timeout,
// and how many retransmissions a single request may consume before the
// transfer is refused (total sends per request = 1 + max_attempts).
struct ProtocolConfig {
    std::string name;
    uint32_t chunk_size = 25600;
    double retransmission_time = 8.0;
    uint32_t max_attempts = 8;

    bool operator==(const ProtocolConfig&) const = default;
};

inline void validate(const ProtocolConfig& c) {
    if (c.chunk_size < 1 || c.chunk_size > kMaxChunkSize) {
        throw std::invalid_argument("chunk_size must be in [1, " +
                                    std::to_string(kMaxChunkSize) + "]: " + c.name);
    }
    if (!(c.retransmission_time > 0)) {
        throw std::invalid_argument("retransmission_time must be positive: " + c.name);
    }
    if (c.max_attempts < 1) {
        throw std::invalid_argument("max_attempts must be at least 1: " + c.name);
    }
}

// The six benchmark configurations, in the order they are reported.
inline const std::array<ProtocolConfig, 6>& preset_configs() {
    static const std::array<ProtocolConfig, 6> kPresets{{
        {"PSO", 41358, 10.00, 3},
        {"DE", 28278, 6.00, 9},
        {"ES", 23433, 10.00, 8},
        {"GA", 31196, 3.83, 9},
        {"SA", 19756, 6.43, 3},
        {"EXPERTS", 25600, 8.00, 8},
    }};
    return kPresets;
}

inline std::optional<ProtocolConfig> find_preset(std::string_view name) {
    for (const auto& c : preset_configs()) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

}  // namespace vdtp
