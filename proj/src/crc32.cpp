#include "vdtp/crc32.hpp"

#include <array>
#include <cstring>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#define VDTP_CRC32_CLMUL 1
#endif

namespace vdtp {
namespace {

// Slicing-by-16 tables: tbl[0] is the classic byte-at-a-time table for the
// reflected polynomial; tbl[s] shifts a byte's contribution s positions
// deeper so 16 input bytes fold in per iteration.
struct Tables {
    std::array<std::array<uint32_t, 256>, 16> t;

    constexpr Tables() : t{} {
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) {
                c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            }
            t[0][i] = c;
        }
        for (std::size_t s = 1; s < 16; ++s) {
            for (uint32_t i = 0; i < 256; ++i) {
                t[s][i] = (t[s - 1][i] >> 8) ^ t[0][t[s - 1][i] & 0xFFu];
            }
        }
    }
};

constexpr Tables kTables{};

uint32_t update_table(uint32_t state, const uint8_t* p, std::size_t len) {
    const auto& t = kTables.t;
    uint32_t crc = state;

    // Align to 8 bytes so the wide loads below are aligned.
    while (len > 0 && (reinterpret_cast<uintptr_t>(p) & 7u) != 0) {
        crc = (crc >> 8) ^ t[0][(crc ^ *p++) & 0xFFu];
        --len;
    }
    while (len >= 16) {
        uint64_t a;
        uint64_t b;
        std::memcpy(&a, p, 8);
        std::memcpy(&b, p + 8, 8);
        a ^= crc;
        crc = t[15][a & 0xFF] ^ t[14][(a >> 8) & 0xFF] ^ t[13][(a >> 16) & 0xFF] ^
              t[12][(a >> 24) & 0xFF] ^ t[11][(a >> 32) & 0xFF] ^ t[10][(a >> 40) & 0xFF] ^
              t[9][(a >> 48) & 0xFF] ^ t[8][(a >> 56) & 0xFF] ^ t[7][b & 0xFF] ^
              t[6][(b >> 8) & 0xFF] ^ t[5][(b >> 16) & 0xFF] ^ t[4][(b >> 24) & 0xFF] ^
              t[3][(b >> 32) & 0xFF] ^ t[2][(b >> 40) & 0xFF] ^ t[1][(b >> 48) & 0xFF] ^
              t[0][(b >> 56) & 0xFF];
        p += 16;
        len -= 16;
    }
    while (len-- > 0) {
        crc = (crc >> 8) ^ t[0][(crc ^ *p++) & 0xFFu];
    }
    return crc;
}

#ifdef VDTP_CRC32_CLMUL

// Carry-less-multiply kernel. Bytes loaded little-endian put the first
// (highest-degree) message bit in register bit 0, so a 128-bit lane holds the
// bit-reversed message polynomial. Folding a lane onto data k bits later
// multiplies its low qword by x^(k+64) and its high qword by x^k; in this
// reversed layout the constant for "multiply by x^m" is the reflected 33-bit
// value of x^(m-32) mod P. Four independent lanes cover 64 bytes per step.
__attribute__((target("pclmul,sse2"))) inline __m128i fold_lane(__m128i x, __m128i k) {
    return _mm_xor_si128(_mm_clmulepi64_si128(x, k, 0x00),
                         _mm_clmulepi64_si128(x, k, 0x11));
}

__attribute__((target("pclmul,sse2")))
uint32_t update_clmul(uint32_t state, const uint8_t* p, std::size_t len) {
    // Callers guarantee len >= 64.
    const __m128i k512 = _mm_set_epi64x(0x00000001c6e41596, 0x0000000154442bd4);  // x^512, x^576
    const __m128i k384 = _mm_set_epi64x(0x0000000174359406, 0x0000000003db1ecdc);  // x^384, x^448
    const __m128i k256 = _mm_set_epi64x(0x000000015a546366, 0x00000000f1da05aa);   // x^256, x^320
    const __m128i k128 = _mm_set_epi64x(0x00000000ccaa009e, 0x00000001751997d0);   // x^128, x^192

    const __m128i* q = reinterpret_cast<const __m128i*>(p);
    __m128i x0 = _mm_xor_si128(_mm_loadu_si128(q + 0), _mm_cvtsi32_si128(static_cast<int>(state)));
    __m128i x1 = _mm_loadu_si128(q + 1);
    __m128i x2 = _mm_loadu_si128(q + 2);
    __m128i x3 = _mm_loadu_si128(q + 3);
    p += 64;
    len -= 64;

    while (len >= 64) {
        q = reinterpret_cast<const __m128i*>(p);
        x0 = _mm_xor_si128(fold_lane(x0, k512), _mm_loadu_si128(q + 0));
        x1 = _mm_xor_si128(fold_lane(x1, k512), _mm_loadu_si128(q + 1));
        x2 = _mm_xor_si128(fold_lane(x2, k512), _mm_loadu_si128(q + 2));
        x3 = _mm_xor_si128(fold_lane(x3, k512), _mm_loadu_si128(q + 3));
        p += 64;
        len -= 64;
    }

    // Lanes sit 48/32/16/0 bytes ahead of the stream position; collapse them.
    __m128i y = _mm_xor_si128(_mm_xor_si128(fold_lane(x0, k384), fold_lane(x1, k256)),
                              _mm_xor_si128(fold_lane(x2, k128), x3));
    while (len >= 16) {
        y = _mm_xor_si128(fold_lane(y, k128), _mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
        p += 16;
        len -= 16;
    }

    // y is congruent (mod P) to the message consumed so far, with the incoming
    // state already folded in, so running its raw bytes through the table path
    // from a zero state reduces it to the 32-bit CRC state.
    alignas(16) uint8_t buf[16];
    _mm_store_si128(reinterpret_cast<__m128i*>(buf), y);
    uint32_t crc = update_table(0, buf, 16);
    return update_table(crc, p, len);
}

bool cpu_has_clmul() {
    static const bool ok = __builtin_cpu_supports("pclmul") != 0;
    return ok;
}

#endif  // VDTP_CRC32_CLMUL

}  // namespace

uint32_t crc32_update(uint32_t state, const void* data, std::size_t len) {
    const auto* p = static_cast<const uint8_t*>(data);
#ifdef VDTP_CRC32_CLMUL
    if (len >= 64 && cpu_has_clmul()) {
        return update_clmul(state, p, len);
    }
#endif
    return update_table(state, p, len);
}

}  // namespace vdtp
