#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "vdtp/actions.hpp"
#include "vdtp/file_store.hpp"
#include "vdtp/plan.hpp"

namespace vdtp {

// Serving side: answers FIRQ with the file metadata and each DRQ(i) with the
// i-th slice, statelessly re-answering retransmitted requests. Holds one
// independent serving record per (peer, transfer_id); records are released
// on ABORT and garbage-collected after idle_timeout without traffic.
//
// Pure stepper like Petitioner: the caller owns sockets and clocks.
class Owner {
  public:
    // idle_timeout: seconds without traffic before a record is dropped;
    // the recommended value is 10 x the serving configuration's
    // retransmission_time.
    Owner(FileProvider& store, double idle_timeout);

    Actions on_packet(const Packet& p, const Peer& from, double now);

    // Drop records idle since before now - idle_timeout.
    void collect_idle(double now);

    std::size_t active_transfers() const { return transfers_.size(); }

  private:
    struct Serving {
        TransferPlan plan;
        StoredFile file;
        double last_activity = 0;
    };

    FileProvider& store_;
    double idle_timeout_;
    std::map<std::pair<Peer, uint32_t>, Serving> transfers_;
};

}  // namespace vdtp
