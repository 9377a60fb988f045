#pragma once

#include <cstdint>
#include <string>

namespace vdtp {

enum class LogLevel : uint8_t { error = 0, warn = 1, info = 2, debug = 3 };

// Threshold from the VDTP_LOG environment variable ("error", "warn",
// "info", "debug"), read once; defaults to warn, unknown values included.
LogLevel log_threshold();

inline bool log_enabled(LogLevel level) {
    return static_cast<uint8_t>(level) <= static_cast<uint8_t>(log_threshold());
}

// Writes "[level] msg\n" to stderr when the level is enabled.
void log_line(LogLevel level, const std::string& msg);

}  // namespace vdtp
