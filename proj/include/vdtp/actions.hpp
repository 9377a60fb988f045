#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vdtp/packet.hpp"

namespace vdtp {

// Opaque peer address; "ip:port" for UDP, a node label in the simulator.
using Peer = std::string;

// Why a transfer ended without the file.
enum class FailReason {
    refused,         // a request exhausted 1 + max_attempts sends
    file_not_found,  // owner answered FIRP{not-found}
    corrupt,         // assembled bytes fail the FIRP checksum
};

// ---- state-machine outputs ------------------------------------------------
//
// A stepper call returns zero or more of these for the driver to execute.
// Complete/Fail are terminal; a terminal machine emits nothing further.

struct SendAction {
    Packet packet;
    Peer peer;
};

struct ArmTimerAction {
    double deadline = 0;  // absolute seconds on the driver's clock
};

struct CompleteAction {
    std::vector<uint8_t> file_bytes;
};

struct FailAction {
    FailReason reason = FailReason::refused;
};

using Action = std::variant<SendAction, ArmTimerAction, CompleteAction, FailAction>;
using Actions = std::vector<Action>;

inline const char* fail_reason_name(FailReason r) {
    switch (r) {
        case FailReason::refused: return "refused";
        case FailReason::file_not_found: return "not-found";
        case FailReason::corrupt: return "corrupt";
    }
    return "?";
}

}  // namespace vdtp
