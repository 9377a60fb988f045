#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdtp/channel.hpp"
#include "vdtp/config.hpp"
#include "vdtp/file_store.hpp"

namespace vdtp {

// ---- trace ----------------------------------------------------------------

enum class TraceEvent : uint8_t { send, deliver, drop, timeout, done };

struct TraceRecord {
    double time = 0;
    TraceEvent event = TraceEvent::send;
    std::string node;         // "petitioner" | "owner"
    std::string packet_type;  // "FIRQ".."ABORT", empty for done/timeout rows
    uint32_t transfer_id = 0;
    std::optional<uint32_t> chunk_index;
    std::size_t size_bytes = 0;
    double distance = 0;
    std::string outcome;  // done rows: complete|refused|incomplete|not-found|corrupt
};

// Newline-delimited records:
//   time_s,event,node,packet_type,transfer_id,chunk_index,size_bytes,distance_m,outcome
std::string trace_to_csv(const std::vector<TraceRecord>& trace);

// ---- one simulated transfer -------------------------------------------------

enum class TrialOutcome : uint8_t { complete, refused, incomplete, failed };

const char* trial_outcome_name(TrialOutcome o);

struct SimScenario {
    ProtocolConfig config;
    uint64_t file_size = 0;       // served file is generated deterministically
    MobilityProfile mobility;
    ChannelParams channel;
    uint64_t seed = 0;            // drives mobility, loss, and speeds
    double time_limit = 600.0;    // virtual seconds before incomplete
    bool collect_trace = false;
    // When set, serve these bytes instead of generating file_size bytes.
    const StoredFile* file = nullptr;
    std::string file_name = "payload.bin";
};

struct SimResult {
    TrialOutcome outcome = TrialOutcome::incomplete;
    double elapsed = 0;           // virtual seconds until terminal/limit
    uint64_t lost_packets = 0;    // dropped datagrams, any type
    uint64_t lost_bytes = 0;      // on-wire sizes of dropped datagrams
    uint64_t sent_packets = 0;
    uint64_t delivered_packets = 0;
    std::vector<uint8_t> file_bytes;  // assembled file when complete
    std::vector<TraceRecord> trace;   // only when collect_trace
};

// Runs petitioner vs. owner over the simulated channel on a virtual clock
// until a terminal state or the time limit. Deterministic in (scenario,
// seed): identical seeds yield bit-identical traces.
SimResult sim_run(const SimScenario& scenario);

// Seed for generated payload content. One fixed value, so every trial of a
// given size serves identical bytes whether or not the caller pre-builds them.
inline constexpr uint64_t kPayloadContentSeed = 0x7061796C6F6164ull;

// Deterministic pseudorandom payload; prefix-stable (the first n bytes do
// not depend on size), so benchmark file sizes can share one buffer.
std::vector<uint8_t> generate_payload(uint64_t size, uint64_t seed);

}  // namespace vdtp
