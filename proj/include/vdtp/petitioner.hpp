#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vdtp/actions.hpp"
#include "vdtp/config.hpp"
#include "vdtp/plan.hpp"

namespace vdtp {

// Downloader side of a transfer: FIRQ handshake, then DRQ(1)..DRQ(n) in
// strict stop-and-wait order, retransmitting the outstanding request on
// timeout until max_attempts retransmissions are spent, then refusing.
//
// Pure event-driven stepper: no clocks, sockets, or timers inside. The
// driver executes SendAction/ArmTimerAction and calls on_packet/on_timeout.
// Every ArmTimerAction supersedes the previous one; a fired timer whose
// deadline is not the most recently armed one must not be delivered.
class Petitioner {
  public:
    enum class Phase { awaiting_firp, awaiting_drp, done, refused, failed };

    Petitioner(ProtocolConfig cfg, std::string file_name, Peer peer, uint32_t transfer_id);

    // Emits Send(Firq) + ArmTimer. Call exactly once, before any events.
    Actions start(double now);

    // Feed any decoded datagram; stale, duplicate, or mismatched packets are
    // ignored without state change.
    Actions on_packet(const Packet& p, double now);

    // Deliver only a fired, still-armed timer (see class comment).
    Actions on_timeout(double now);

    Phase phase() const { return phase_; }
    bool terminal() const {
        return phase_ == Phase::done || phase_ == Phase::refused || phase_ == Phase::failed;
    }
    uint32_t transfer_id() const { return transfer_id_; }
    uint32_t attempts_used() const { return attempts_used_; }
    const std::optional<TransferPlan>& plan() const { return plan_; }
    std::optional<FailReason> fail_reason() const { return fail_reason_; }

  private:
    Actions send_current_request(double now);
    Packet current_request() const;

    ProtocolConfig cfg_;
    std::string file_name_;
    Peer peer_;
    uint32_t transfer_id_;

    Phase phase_ = Phase::awaiting_firp;
    std::optional<TransferPlan> plan_;
    uint32_t expected_crc_ = 0;
    uint32_t next_chunk_ = 0;     // index awaited while in awaiting_drp
    uint32_t attempts_used_ = 0;  // retransmissions spent on the outstanding request
    std::vector<uint8_t> assembled_;
    std::optional<FailReason> fail_reason_;
};

// Process-wide allocator for fresh transfer ids; successive calls never
// return the same value. Closed-world drivers (the simulator) may instead
// pick ids themselves, since they control both ends.
uint32_t next_transfer_id();

}  // namespace vdtp
