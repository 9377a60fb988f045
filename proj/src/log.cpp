#include "vdtp/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace vdtp {

LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("VDTP_LOG");
        if (env == nullptr) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

void log_line(LogLevel level, const std::string& msg) {
    if (!log_enabled(level)) return;
    const char* name = "warn";
    switch (level) {
        case LogLevel::error: name = "error"; break;
        case LogLevel::warn: name = "warn"; break;
        case LogLevel::info: name = "info"; break;
        case LogLevel::debug: name = "debug"; break;
    }
    std::fprintf(stderr, "[%s] %s\n", name, msg.c_str());
}

}  // namespace vdtp
