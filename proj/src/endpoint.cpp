#include "vdtp/endpoint.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <system_error>

#include "vdtp/packet.hpp"

namespace vdtp {

namespace {

sockaddr_in parse_address(const std::string& addr) {
    std::size_t colon = addr.rfind(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("address must be ip:port, got '" + addr + "'");
    }
    std::string host = addr.substr(0, colon);
    std::string port_str = addr.substr(colon + 1);
    if (host.empty()) host = "0.0.0.0";

    char* end = nullptr;
    long port = std::strtol(port_str.c_str(), &end, 10);
    if (port_str.empty() || *end != '\0' || port < 0 || port > 65535) {
        throw std::invalid_argument("bad port in '" + addr + "'");
    }

    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(static_cast<uint16_t>(port));
    if (inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
        throw std::invalid_argument("bad IPv4 address in '" + addr + "'");
    }
    return sa;
}

std::string format_address(const sockaddr_in& sa) {
    char host[INET_ADDRSTRLEN] = {};
    inet_ntop(AF_INET, &sa.sin_addr, host, sizeof(host));
    return std::string(host) + ":" + std::to_string(ntohs(sa.sin_port));
}

}  // namespace

UdpEndpoint::UdpEndpoint(const std::string& bind_addr) {
    sockaddr_in sa = parse_address(bind_addr);
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
        throw std::system_error(errno, std::generic_category(), "socket");
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
        int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw std::system_error(err, std::generic_category(), "bind " + bind_addr);
    }
}

UdpEndpoint::~UdpEndpoint() {
    if (fd_ >= 0) ::close(fd_);
}

std::string UdpEndpoint::local_address() const {
    sockaddr_in sa{};
    socklen_t len = sizeof(sa);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len) != 0) {
        throw std::system_error(errno, std::generic_category(), "getsockname");
    }
    return format_address(sa);
}

void UdpEndpoint::send(const std::vector<uint8_t>& datagram, const std::string& peer) {
    if (datagram.size() > kMaxDatagram) {
        throw std::invalid_argument("datagram of " + std::to_string(datagram.size()) +
                                    " bytes exceeds the UDP payload limit");
    }
    sockaddr_in sa = parse_address(peer);
    ssize_t n = ::sendto(fd_, datagram.data(), datagram.size(), 0,
                         reinterpret_cast<sockaddr*>(&sa), sizeof(sa));
    if (n < 0) {
        throw std::system_error(errno, std::generic_category(), "sendto " + peer);
    }
}

std::optional<UdpEndpoint::Received> UdpEndpoint::receive(double timeout_s) {
    pollfd pfd{fd_, POLLIN, 0};
    int timeout_ms = timeout_s <= 0 ? 0 : static_cast<int>(std::ceil(timeout_s * 1000.0));
    int ready = ::poll(&pfd, 1, timeout_ms);
    if (ready < 0) {
        if (errno == EINTR) return std::nullopt;  // interrupted: caller re-checks its deadline
        throw std::system_error(errno, std::generic_category(), "poll");
    }
    if (ready == 0) return std::nullopt;

    std::vector<uint8_t> buf(65536);
    sockaddr_in sa{};
    socklen_t len = sizeof(sa);
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&sa), &len);
    if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) return std::nullopt;
        throw std::system_error(errno, std::generic_category(), "recvfrom");
    }
    buf.resize(static_cast<std::size_t>(n));
    return Received{std::move(buf), format_address(sa)};
}

}  // namespace vdtp
