#include "vdtp/owner.hpp"

namespace vdtp {

Owner::Owner(FileProvider& store, double idle_timeout)
    : store_(store), idle_timeout_(idle_timeout) {}

Actions Owner::on_packet(const Packet& p, const Peer& from, double now) {
    if (const auto* firq = std::get_if<Firq>(&p)) {
        auto key = std::make_pair(from, firq->transfer_id);
        if (auto it = transfers_.find(key); it != transfers_.end()) {
            // Retransmitted FIRQ: re-answer from the existing record so the
            // transfer keeps one consistent view of the file.
            it->second.last_activity = now;
            const auto& s = it->second;
            return {SendAction{
                Firp{firq->transfer_id, FirpStatus::ok, s.plan.file_size, s.file.crc32}, from}};
        }
        if (firq->requested_chunk_size < 1 || firq->requested_chunk_size > kMaxChunkSize) {
            return {SendAction{Firp{firq->transfer_id, FirpStatus::not_found, 0, 0}, from}};
        }
        auto file = store_.find(firq->file_name);
        if (!file.has_value()) {
            return {SendAction{Firp{firq->transfer_id, FirpStatus::not_found, 0, 0}, from}};
        }
        Serving s;
        s.plan = make_plan(file->bytes->size(), firq->requested_chunk_size);
        s.file = std::move(*file);
        s.last_activity = now;
        auto firp = Firp{firq->transfer_id, FirpStatus::ok, s.plan.file_size, s.file.crc32};
        transfers_.emplace(std::move(key), std::move(s));
        return {SendAction{std::move(firp), from}};
    }

    if (const auto* drq = std::get_if<Drq>(&p)) {
        auto it = transfers_.find(std::make_pair(from, drq->transfer_id));
        if (it == transfers_.end()) {
            return {};  // unknown transfer: stale or never handshaken
        }
        const auto& s = it->second;
        if (drq->chunk_index < 1 || drq->chunk_index > s.plan.n_chunks) {
            return {};  // out-of-range index
        }
        it->second.last_activity = now;
        uint64_t off = s.plan.chunk_offset(drq->chunk_index);
        uint32_t len = s.plan.chunk_length(drq->chunk_index);
        Drp drp;
        drp.transfer_id = drq->transfer_id;
        drp.chunk_index = drq->chunk_index;
        drp.data.assign(s.file.bytes->begin() + static_cast<std::ptrdiff_t>(off),
                        s.file.bytes->begin() + static_cast<std::ptrdiff_t>(off + len));
        return {SendAction{std::move(drp), from}};
    }

    if (const auto* abort = std::get_if<Abort>(&p)) {
        transfers_.erase(std::make_pair(from, abort->transfer_id));
        return {};
    }

    return {};  // FIRP/DRP addressed to an owner: ignore
}

void Owner::collect_idle(double now) {
    for (auto it = transfers_.begin(); it != transfers_.end();) {
        if (now - it->second.last_activity > idle_timeout_) {
            it = transfers_.erase(it);
        } else {
            ++it;
        }
    }
}

}  // namespace vdtp
