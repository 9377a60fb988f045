#include "vdtp/transfer.hpp"

#include <chrono>

#include "vdtp/log.hpp"
#include "vdtp/packet.hpp"
#include "vdtp/petitioner.hpp"
#include "vdtp/owner.hpp"

namespace vdtp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

FetchResult fetch_file(UdpEndpoint& endpoint, const std::string& peer,
                       const std::string& file_name, const ProtocolConfig& config) {
    auto start = std::chrono::steady_clock::now();
    Petitioner pet(config, file_name, peer, next_transfer_id());

    FetchResult res;
    double deadline = 0;
    bool done = false;

    auto process = [&](Actions&& actions) {
        for (auto& a : actions) {
            if (auto* send = std::get_if<SendAction>(&a)) {
                endpoint.send(encode_packet(send->packet), send->peer);
            } else if (auto* arm = std::get_if<ArmTimerAction>(&a)) {
                deadline = arm->deadline;
            } else if (auto* complete = std::get_if<CompleteAction>(&a)) {
                res.outcome = TrialOutcome::complete;
                res.bytes = std::move(complete->file_bytes);
                res.elapsed_s = seconds_since(start);
                done = true;
            } else if (auto* fail = std::get_if<FailAction>(&a)) {
                res.outcome = fail->reason == FailReason::refused ? TrialOutcome::refused
                                                                  : TrialOutcome::failed;
                res.fail_reason = fail->reason;
                res.elapsed_s = seconds_since(start);
                done = true;
            }
            if (done) break;
        }
    };

    process(pet.start(seconds_since(start)));
    while (!done) {
        double wait = deadline - seconds_since(start);
        auto received = endpoint.receive(wait > 0 ? wait : 0);
        if (received.has_value()) {
            try {
                Packet p = decode_packet(received->bytes);
                process(pet.on_packet(p, seconds_since(start)));
            } catch (const CodecError& e) {
                log_line(LogLevel::warn, std::string("ignoring undecodable datagram: ") +
                                             e.what());
            }
            continue;
        }
        if (seconds_since(start) >= deadline) {
            process(pet.on_timeout(seconds_since(start)));
            if (!done) ++res.retransmissions;
        }
    }
    return res;
}

void serve_loop(UdpEndpoint& endpoint, FileProvider& store, const ProtocolConfig& config,
                const volatile std::sig_atomic_t* stop) {
    auto start = std::chrono::steady_clock::now();
    Owner owner(store, 10.0 * config.retransmission_time);

    while (*stop == 0) {
        auto received = endpoint.receive(0.2);
        double now = seconds_since(start);
        owner.collect_idle(now);
        if (!received.has_value()) continue;

        Packet p;
        try {
            p = decode_packet(received->bytes);
        } catch (const CodecError& e) {
            log_line(LogLevel::warn, "ignoring undecodable datagram from " + received->peer +
                                         ": " + e.what());
            continue;
        }

        if (const auto* firq = std::get_if<Firq>(&p)) {
            log_line(LogLevel::info, "FIRQ '" + firq->file_name + "' from " + received->peer);
        } else if (std::get_if<Abort>(&p) != nullptr) {
            log_line(LogLevel::info, "ABORT from " + received->peer);
        } else if (log_enabled(LogLevel::debug)) {
            log_line(LogLevel::debug,
                     std::string(packet_type_name(p)) + " from " + received->peer);
        }

        Actions actions = owner.on_packet(p, received->peer, now);
        for (auto& a : actions) {
            if (auto* send = std::get_if<SendAction>(&a)) {
                endpoint.send(encode_packet(send->packet), send->peer);
                if (const auto* firp = std::get_if<Firp>(&send->packet)) {
                    log_line(LogLevel::info,
                             firp->status == FirpStatus::ok
                                 ? "-> FIRP ok, " + std::to_string(firp->file_size) + " bytes"
                                 : "-> FIRP not-found");
                }
            }
        }
    }
    log_line(LogLevel::info, "shutting down");
}

}  // namespace vdtp
