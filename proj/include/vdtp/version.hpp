#pragma once

namespace vdtp {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace vdtp
