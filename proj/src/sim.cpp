#include "vdtp/sim.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <queue>

#include "vdtp/owner.hpp"
#include "vdtp/petitioner.hpp"

namespace vdtp {

const char* trial_outcome_name(TrialOutcome o) {
    switch (o) {
        case TrialOutcome::complete: return "complete";
        case TrialOutcome::refused: return "refused";
        case TrialOutcome::incomplete: return "incomplete";
        case TrialOutcome::failed: return "failed";
    }
    return "?";
}

std::vector<uint8_t> generate_payload(uint64_t size, uint64_t seed) {
    std::vector<uint8_t> out(size);
    uint64_t i = 0;
    for (; i + 8 <= size; i += 8) {
        uint64_t w = splitmix64(seed + i / 8);
        std::memcpy(out.data() + i, &w, 8);
    }
    if (i < size) {
        uint64_t w = splitmix64(seed + i / 8);
        std::memcpy(out.data() + i, &w, size - i);
    }
    return out;
}

namespace {

struct Event {
    enum Kind : uint8_t { tick, deliver, timer };

    double time = 0;
    uint64_t seq = 0;
    Kind kind = tick;
    bool to_petitioner = false;  // deliver: receiving node
    std::size_t wire_size = 0;   // deliver
    Packet packet;               // deliver
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

std::optional<uint32_t> chunk_index_of(const Packet& p) {
    if (const auto* drq = std::get_if<Drq>(&p)) return drq->chunk_index;
    if (const auto* drp = std::get_if<Drp>(&p)) return drp->chunk_index;
    return std::nullopt;
}

void append_csv(std::string& out, const TraceRecord& r) {
    char buf[160];
    const char* event = "";
    switch (r.event) {
        case TraceEvent::send: event = "send"; break;
        case TraceEvent::deliver: event = "deliver"; break;
        case TraceEvent::drop: event = "drop"; break;
        case TraceEvent::timeout: event = "timeout"; break;
        case TraceEvent::done: event = "done"; break;
    }
    std::snprintf(buf, sizeof(buf), "%.6f,%s,%s,%s,%" PRIu32 ",", r.time, event, r.node.c_str(),
                  r.packet_type.c_str(), r.transfer_id);
    out += buf;
    if (r.chunk_index.has_value()) {
        out += std::to_string(*r.chunk_index);
    }
    std::snprintf(buf, sizeof(buf), ",%zu,%.3f,%s\n", r.size_bytes, r.distance,
                  r.outcome.c_str());
    out += buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::string out =
        "time_s,event,node,packet_type,transfer_id,chunk_index,size_bytes,distance_m,outcome\n";
    for (const auto& r : trace) {
        append_csv(out, r);
    }
    return out;
}

SimResult sim_run(const SimScenario& sc) {
    validate(sc.config);
    validate(sc.mobility);
    validate(sc.channel);

    SimResult res;
    Rng rng(sc.seed);

    // Owner's store: caller-provided bytes or a generated payload.
    MemoryStore store;
    if (sc.file != nullptr) {
        store.add(sc.file_name, *sc.file);
    } else {
        store.add(sc.file_name, generate_payload(sc.file_size, kPayloadContentSeed));
    }
    Owner owner(store, 10.0 * sc.config.retransmission_time);
    Petitioner pet(sc.config, sc.file_name, "owner", 1);

    std::priority_queue<Event, std::vector<Event>, EventLater> queue;
    uint64_t seq = 0;
    double now = 0;
    double distance = sc.mobility.mean_distance;
    double armed_deadline = -1;
    bool finished = false;

    auto trace_packet = [&](TraceEvent ev, const char* node, const Packet& p, std::size_t size) {
        if (!sc.collect_trace) return;
        TraceRecord r;
        r.time = now;
        r.event = ev;
        r.node = node;
        r.packet_type = packet_type_name(p);
        r.transfer_id = transfer_id_of(p);
        r.chunk_index = chunk_index_of(p);
        r.size_bytes = size;
        r.distance = distance;
        res.trace.push_back(std::move(r));
    };

    auto finish = [&](TrialOutcome outcome, const char* detail) {
        res.outcome = outcome;
        res.elapsed = now;
        finished = true;
        if (sc.collect_trace) {
            TraceRecord r;
            r.time = now;
            r.event = TraceEvent::done;
            r.node = "petitioner";
            r.transfer_id = pet.transfer_id();
            r.distance = distance;
            r.outcome = detail;
            res.trace.push_back(std::move(r));
        }
    };

    auto process = [&](Actions&& actions, bool from_petitioner) {
        for (auto& a : actions) {
            if (auto* send = std::get_if<SendAction>(&a)) {
                std::size_t size = encoded_size(send->packet);
                ++res.sent_packets;
                trace_packet(TraceEvent::send, from_petitioner ? "petitioner" : "owner",
                             send->packet, size);
                auto delivered = transmit(size, distance, sc.channel, rng, now);
                if (!delivered.has_value()) {
                    ++res.lost_packets;
                    res.lost_bytes += size;
                    trace_packet(TraceEvent::drop, from_petitioner ? "petitioner" : "owner",
                                 send->packet, size);
                    continue;
                }
                Event ev;
                ev.time = delivered->arrival;
                ev.seq = seq++;
                ev.kind = Event::deliver;
                ev.to_petitioner = !from_petitioner;
                ev.wire_size = size;
                ev.packet = std::move(send->packet);
                queue.push(std::move(ev));
            } else if (auto* arm = std::get_if<ArmTimerAction>(&a)) {
                armed_deadline = arm->deadline;
                Event ev;
                ev.time = arm->deadline;
                ev.seq = seq++;
                ev.kind = Event::timer;
                queue.push(std::move(ev));
            } else if (auto* complete = std::get_if<CompleteAction>(&a)) {
                res.file_bytes = std::move(complete->file_bytes);
                finish(TrialOutcome::complete, "complete");
            } else if (auto* fail = std::get_if<FailAction>(&a)) {
                finish(fail->reason == FailReason::refused ? TrialOutcome::refused
                                                           : TrialOutcome::failed,
                       fail_reason_name(fail->reason));
            }
            if (finished) break;
        }
    };

    // First mobility tick, then the opening FIRQ.
    {
        Event ev;
        ev.time = kMobilityTick;
        ev.seq = seq++;
        ev.kind = Event::tick;
        queue.push(std::move(ev));
    }
    process(pet.start(now), true);

    while (!finished && !queue.empty()) {
        Event ev = std::move(const_cast<Event&>(queue.top()));
        queue.pop();
        if (ev.time > sc.time_limit) {
            now = sc.time_limit;
            finish(TrialOutcome::incomplete, "incomplete");
            break;
        }
        now = ev.time;
        switch (ev.kind) {
            case Event::tick: {
                double speed = rng.uniform(sc.mobility.speed_min, sc.mobility.speed_max);
                distance = advance_distance(sc.mobility, distance, speed, kMobilityTick, rng);
                owner.collect_idle(now);
                Event next;
                next.time = now + kMobilityTick;
                next.seq = seq++;
                next.kind = Event::tick;
                queue.push(std::move(next));
                break;
            }
            case Event::deliver: {
                ++res.delivered_packets;
                if (ev.to_petitioner) {
                    trace_packet(TraceEvent::deliver, "petitioner", ev.packet, ev.wire_size);
                    process(pet.on_packet(ev.packet, now), true);
                } else {
                    trace_packet(TraceEvent::deliver, "owner", ev.packet, ev.wire_size);
                    process(owner.on_packet(ev.packet, "petitioner", now), false);
                }
                break;
            }
            case Event::timer: {
                if (pet.terminal() || ev.time != armed_deadline) {
                    break;  // stale: superseded by a later re-arm or a reply
                }
                if (sc.collect_trace) {
                    TraceRecord r;
                    r.time = now;
                    r.event = TraceEvent::timeout;
                    r.node = "petitioner";
                    r.transfer_id = pet.transfer_id();
                    r.distance = distance;
                    res.trace.push_back(std::move(r));
                }
                process(pet.on_timeout(now), true);
                break;
            }
        }
    }

    if (!finished) {
        now = sc.time_limit;
        finish(TrialOutcome::incomplete, "incomplete");
    }
    return res;
}

}  // namespace vdtp
