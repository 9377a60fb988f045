#pragma once

#include <cstdint>
#include <stdexcept>

namespace vdtp {

// How a file of file_size bytes splits into 1-based chunks of chunk_size
// bytes each, the last one possibly shorter. A zero-byte file has no chunks.
struct TransferPlan {
    uint64_t file_size = 0;
    uint32_t chunk_size = 0;
    uint32_t n_chunks = 0;
    uint32_t last_chunk_size = 0;

    // Length of chunk i (1-based).
    uint32_t chunk_length(uint32_t index) const {
        return index == n_chunks ? last_chunk_size : chunk_size;
    }
    // Byte offset of chunk i (1-based).
    uint64_t chunk_offset(uint32_t index) const {
        return static_cast<uint64_t>(index - 1) * chunk_size;
    }

    bool operator==(const TransferPlan&) const = default;
};

inline TransferPlan make_plan(uint64_t file_size, uint32_t chunk_size) {
    if (chunk_size < 1) {
        throw std::invalid_argument("chunk_size must be at least 1");
    }
    TransferPlan p;
    p.file_size = file_size;
    p.chunk_size = chunk_size;
    p.n_chunks = static_cast<uint32_t>((file_size + chunk_size - 1) / chunk_size);
    uint64_t rem = file_size % chunk_size;
    p.last_chunk_size = p.n_chunks == 0 ? 0 : (rem == 0 ? chunk_size : static_cast<uint32_t>(rem));
    return p;
}

}  // namespace vdtp
