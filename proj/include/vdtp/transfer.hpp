#pragma once

#include <csignal>
#include <string>
#include <vector>

#include "vdtp/actions.hpp"
#include "vdtp/config.hpp"
#include "vdtp/endpoint.hpp"
#include "vdtp/file_store.hpp"
#include "vdtp/sim.hpp"

namespace vdtp {

struct FetchResult {
    TrialOutcome outcome = TrialOutcome::failed;  // complete | refused | failed
    std::optional<FailReason> fail_reason;        // set unless complete
    std::vector<uint8_t> bytes;                   // assembled file when complete
    double elapsed_s = 0;
    // Timeout-driven resends. Over real UDP the sender cannot observe drops
    // directly, so this stands in for the lost-packet count.
    uint64_t retransmissions = 0;
};

// Runs a petitioner against a live owner at `peer`, driving timers off the
// wall clock. Blocks until the transfer reaches a terminal state.
FetchResult fetch_file(UdpEndpoint& endpoint, const std::string& peer,
                       const std::string& file_name, const ProtocolConfig& config);

// Answers FIRQ/DRQ out of `store` until *stop becomes nonzero. The config
// only scales the idle timeout used to garbage-collect dead transfers.
void serve_loop(UdpEndpoint& endpoint, FileProvider& store, const ProtocolConfig& config,
                const volatile std::sig_atomic_t* stop);

}  // namespace vdtp
