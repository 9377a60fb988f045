#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vdtp {

// ---- wire messages -------------------------------------------------------
//
// One packet per datagram, big-endian, 8-byte common header:
//   magic 0x56 0x44 | version 0x01 | type u8 | transfer_id u32
// Types: 1 FIRQ, 2 FIRP, 3 DRQ, 4 DRP, 5 ABORT.

inline constexpr uint8_t kMagic0 = 0x56;
inline constexpr uint8_t kMagic1 = 0x44;
inline constexpr uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 8;
inline constexpr std::size_t kMaxDatagram = 65507;   // UDP payload limit
inline constexpr std::size_t kMaxFileName = 1024;    // bytes of UTF-8
inline constexpr uint32_t kMaxChunkSize = 65000;     // DRP must fit one datagram

enum class FirpStatus : uint8_t { ok = 0, not_found = 1 };
enum class AbortReason : uint8_t { refused = 1, user_cancel = 2 };

struct Firq {
    uint32_t transfer_id = 0;
    uint32_t requested_chunk_size = 0;
    std::string file_name;
    bool operator==(const Firq&) const = default;
};

struct Firp {
    uint32_t transfer_id = 0;
    FirpStatus status = FirpStatus::ok;
    uint64_t file_size = 0;
    uint32_t file_crc32 = 0;
    bool operator==(const Firp&) const = default;
};

struct Drq {
    uint32_t transfer_id = 0;
    uint32_t chunk_index = 0;  // 1-based
    bool operator==(const Drq&) const = default;
};

struct Drp {
    uint32_t transfer_id = 0;
    uint32_t chunk_index = 0;  // 1-based
    std::vector<uint8_t> data;
    bool operator==(const Drp&) const = default;
};

struct Abort {
    uint32_t transfer_id = 0;
    AbortReason reason = AbortReason::refused;
    bool operator==(const Abort&) const = default;
};

using Packet = std::variant<Firq, Firp, Drq, Drp, Abort>;

uint32_t transfer_id_of(const Packet& p);
const char* packet_type_name(const Packet& p);  // "FIRQ", "FIRP", ...

// ---- codec ---------------------------------------------------------------

enum class CodecErrorKind {
    bad_magic,
    unsupported_version,
    unknown_type,
    truncated,           // fewer bytes than the layout requires
    length_mismatch,     // an internal length field disagrees with the payload
    trailing_bytes,      // well-formed packet followed by garbage
    field_out_of_range,  // enum-coded field holds an undefined value
    oversize_name,       // file_name > 1,024 bytes
    oversize_data,       // encode: datagram would exceed 65,507 bytes
    invalid_utf8,
};

class CodecError : public std::runtime_error {
  public:
    CodecError(CodecErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    CodecErrorKind kind() const { return kind_; }

  private:
    CodecErrorKind kind_;
};

// Exact on-wire size of the encoding without materializing it.
std::size_t encoded_size(const Packet& p);

// Throws CodecError (oversize_name / oversize_data / invalid_utf8) on
// packets violating the wire invariants.
std::vector<uint8_t> encode_packet(const Packet& p);

// Throws CodecError; decode(encode(p)) == p for every valid p, and any
// trailing bytes after a well-formed packet are an error.
Packet decode_packet(std::span<const uint8_t> bytes);

bool is_valid_utf8(std::span<const uint8_t> bytes);

}  // namespace vdtp
