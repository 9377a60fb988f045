#pragma once

#include <cstddef>
#include <cstdint>

namespace vdtp {

// CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320), the common
// zlib/PNG/gzip checksum. Streamable: feed chunks via the running form.
//
//   uint32_t c = crc32_init();
//   c = crc32_update(c, buf, len);   // repeat per chunk
//   uint32_t digest = crc32_final(c);
//
// crc32_of() is the one-shot convenience. Check vector: "123456789"
// digests to 0xCBF43926.

inline constexpr uint32_t crc32_init() { return 0xFFFFFFFFu; }

uint32_t crc32_update(uint32_t state, const void* data, std::size_t len);

inline constexpr uint32_t crc32_final(uint32_t state) { return state ^ 0xFFFFFFFFu; }

inline uint32_t crc32_of(const void* data, std::size_t len) {
    return crc32_final(crc32_update(crc32_init(), data, len));
}

}  // namespace vdtp
