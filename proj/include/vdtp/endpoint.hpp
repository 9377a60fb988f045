#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vdtp {

// IPv4 UDP socket with "ip:port" peer addressing. Datagrams arrive whole or
// not at all; duplication and reordering are the network's business.
class UdpEndpoint {
  public:
    // bind_addr like "127.0.0.1:9000"; port 0 picks a free one. Throws
    // std::system_error on socket/bind failure, std::invalid_argument on a
    // malformed address.
    explicit UdpEndpoint(const std::string& bind_addr);
    ~UdpEndpoint();

    UdpEndpoint(const UdpEndpoint&) = delete;
    UdpEndpoint& operator=(const UdpEndpoint&) = delete;

    // The bound address with the real port filled in.
    std::string local_address() const;

    // Fire-and-forget send. Throws std::invalid_argument when the datagram
    // exceeds 65,507 bytes or the peer is malformed, std::system_error on
    // socket errors.
    void send(const std::vector<uint8_t>& datagram, const std::string& peer);

    struct Received {
        std::vector<uint8_t> bytes;
        std::string peer;
    };

    // Blocks up to timeout_s; nullopt means the deadline passed quietly.
    std::optional<Received> receive(double timeout_s);

  private:
    int fd_ = -1;
};

}  // namespace vdtp
