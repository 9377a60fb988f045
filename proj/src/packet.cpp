#include "vdtp/packet.hpp"

#include <cstring>

namespace vdtp {
namespace {

constexpr uint8_t kTypeFirq = 0x01;
constexpr uint8_t kTypeFirp = 0x02;
constexpr uint8_t kTypeDrq = 0x03;
constexpr uint8_t kTypeDrp = 0x04;
constexpr uint8_t kTypeAbort = 0x05;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v >> 32));
    put_u32(out, static_cast<uint32_t>(v));
}

// Bounds-checked big-endian reader over the datagram.
class Reader {
  public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(bytes_[pos_] << 8 | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_ + i];
        pos_ += 4;
        return v;
    }
    uint64_t u64() {
        uint64_t hi = u32();
        return hi << 32 | u32();
    }
    std::span<const uint8_t> raw(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

  private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            throw CodecError(CodecErrorKind::truncated,
                             "packet truncated: need " + std::to_string(n) + " more bytes, have " +
                                 std::to_string(bytes_.size() - pos_));
        }
    }

    std::span<const uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void encode_header(std::vector<uint8_t>& out, uint8_t type, uint32_t transfer_id) {
    out.push_back(kMagic0);
    out.push_back(kMagic1);
    out.push_back(kWireVersion);
    out.push_back(type);
    put_u32(out, transfer_id);
}

}  // namespace

uint32_t transfer_id_of(const Packet& p) {
    return std::visit([](const auto& m) { return m.transfer_id; }, p);
}

const char* packet_type_name(const Packet& p) {
    struct Namer {
        const char* operator()(const Firq&) const { return "FIRQ"; }
        const char* operator()(const Firp&) const { return "FIRP"; }
        const char* operator()(const Drq&) const { return "DRQ"; }
        const char* operator()(const Drp&) const { return "DRP"; }
        const char* operator()(const Abort&) const { return "ABORT"; }
    };
    return std::visit(Namer{}, p);
}

bool is_valid_utf8(std::span<const uint8_t> b) {
    std::size_t i = 0;
    while (i < b.size()) {
        uint8_t c = b[i];
        std::size_t len;
        uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1Fu;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0Fu;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07u;
        } else {
            return false;
        }
        if (i + len > b.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((b[i + k] & 0xC0) != 0x80) return false;
            cp = cp << 6 | (b[i + k] & 0x3Fu);
        }
        // Reject overlong forms, surrogates, and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
            return false;
        }
        i += len;
    }
    return true;
}

std::size_t encoded_size(const Packet& p) {
    struct Sizer {
        std::size_t operator()(const Firq& m) const { return kHeaderSize + 4 + 2 + m.file_name.size(); }
        std::size_t operator()(const Firp&) const { return kHeaderSize + 1 + 8 + 4; }
        std::size_t operator()(const Drq&) const { return kHeaderSize + 4; }
        std::size_t operator()(const Drp& m) const { return kHeaderSize + 4 + 4 + m.data.size(); }
        std::size_t operator()(const Abort&) const { return kHeaderSize + 1; }
    };
    return std::visit(Sizer{}, p);
}

std::vector<uint8_t> encode_packet(const Packet& p) {
    std::vector<uint8_t> out;
    out.reserve(encoded_size(p));

    struct Encoder {
        std::vector<uint8_t>& out;

        void operator()(const Firq& m) const {
            if (m.file_name.size() > kMaxFileName) {
                throw CodecError(CodecErrorKind::oversize_name,
                                 "file name exceeds " + std::to_string(kMaxFileName) + " bytes");
            }
            if (!is_valid_utf8({reinterpret_cast<const uint8_t*>(m.file_name.data()),
                                m.file_name.size()})) {
                throw CodecError(CodecErrorKind::invalid_utf8, "file name is not valid UTF-8");
            }
            encode_header(out, kTypeFirq, m.transfer_id);
            put_u32(out, m.requested_chunk_size);
            put_u16(out, static_cast<uint16_t>(m.file_name.size()));
            out.insert(out.end(), m.file_name.begin(), m.file_name.end());
        }
        void operator()(const Firp& m) const {
            encode_header(out, kTypeFirp, m.transfer_id);
            out.push_back(static_cast<uint8_t>(m.status));
            put_u64(out, m.file_size);
            put_u32(out, m.file_crc32);
        }
        void operator()(const Drq& m) const {
            encode_header(out, kTypeDrq, m.transfer_id);
            put_u32(out, m.chunk_index);
        }
        void operator()(const Drp& m) const {
            if (kHeaderSize + 8 + m.data.size() > kMaxDatagram) {
                throw CodecError(CodecErrorKind::oversize_data,
                                 "DRP data of " + std::to_string(m.data.size()) +
                                     " bytes exceeds the datagram limit");
            }
            encode_header(out, kTypeDrp, m.transfer_id);
            put_u32(out, m.chunk_index);
            put_u32(out, static_cast<uint32_t>(m.data.size()));
            out.insert(out.end(), m.data.begin(), m.data.end());
        }
        void operator()(const Abort& m) const {
            encode_header(out, kTypeAbort, m.transfer_id);
            out.push_back(static_cast<uint8_t>(m.reason));
        }
    };
    std::visit(Encoder{out}, p);
    return out;
}

Packet decode_packet(std::span<const uint8_t> bytes) {
    Reader r(bytes);
    if (r.u8() != kMagic0 || r.u8() != kMagic1) {
        throw CodecError(CodecErrorKind::bad_magic, "bad magic bytes");
    }
    if (uint8_t v = r.u8(); v != kWireVersion) {
        throw CodecError(CodecErrorKind::unsupported_version,
                         "unsupported wire version " + std::to_string(v));
    }
    uint8_t type = r.u8();
    uint32_t transfer_id = r.u32();

    Packet result;
    switch (type) {
        case kTypeFirq: {
            Firq m;
            m.transfer_id = transfer_id;
            m.requested_chunk_size = r.u32();
            uint16_t name_len = r.u16();
            if (name_len > kMaxFileName) {
                throw CodecError(CodecErrorKind::oversize_name,
                                 "file name length field " + std::to_string(name_len) +
                                     " exceeds the limit");
            }
            if (r.remaining() < name_len) {
                throw CodecError(CodecErrorKind::truncated, "FIRQ name shorter than name_len");
            }
            auto raw = r.raw(name_len);
            if (!is_valid_utf8(raw)) {
                throw CodecError(CodecErrorKind::invalid_utf8, "FIRQ file name is not valid UTF-8");
            }
            m.file_name.assign(raw.begin(), raw.end());
            result = std::move(m);
            break;
        }
        case kTypeFirp: {
            Firp m;
            m.transfer_id = transfer_id;
            uint8_t st = r.u8();
            if (st > 1) {
                throw CodecError(CodecErrorKind::field_out_of_range,
                                 "FIRP status byte " + std::to_string(st) + " out of range");
            }
            m.status = static_cast<FirpStatus>(st);
            m.file_size = r.u64();
            m.file_crc32 = r.u32();
            result = std::move(m);
            break;
        }
        case kTypeDrq: {
            Drq m;
            m.transfer_id = transfer_id;
            m.chunk_index = r.u32();
            result = std::move(m);
            break;
        }
        case kTypeDrp: {
            Drp m;
            m.transfer_id = transfer_id;
            m.chunk_index = r.u32();
            uint32_t data_len = r.u32();
            if (r.remaining() < data_len) {
                throw CodecError(CodecErrorKind::length_mismatch,
                                 "DRP data_len " + std::to_string(data_len) + " but only " +
                                     std::to_string(r.remaining()) + " bytes follow");
            }
            auto raw = r.raw(data_len);
            m.data.assign(raw.begin(), raw.end());
            result = std::move(m);
            break;
        }
        case kTypeAbort: {
            Abort m;
            m.transfer_id = transfer_id;
            uint8_t reason = r.u8();
            if (reason != 1 && reason != 2) {
                throw CodecError(CodecErrorKind::field_out_of_range,
                                 "ABORT reason " + std::to_string(reason) + " out of range");
            }
            m.reason = static_cast<AbortReason>(reason);
            result = std::move(m);
            break;
        }
        default:
            throw CodecError(CodecErrorKind::unknown_type,
                             "unknown packet type " + std::to_string(type));
    }
    if (r.remaining() != 0) {
        throw CodecError(CodecErrorKind::trailing_bytes,
                         std::to_string(r.remaining()) + " trailing bytes after packet");
    }
    return result;
}

}  // namespace vdtp
