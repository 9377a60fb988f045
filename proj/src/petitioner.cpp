#include "vdtp/petitioner.hpp"

#include <atomic>

#include "vdtp/crc32.hpp"

namespace vdtp {

uint32_t next_transfer_id() {
    static std::atomic<uint32_t> counter{0};
    return counter.fetch_add(1, std::memory_order_relaxed) + 1;
}

Petitioner::Petitioner(ProtocolConfig cfg, std::string file_name, Peer peer, uint32_t transfer_id)
    : cfg_(std::move(cfg)),
      file_name_(std::move(file_name)),
      peer_(std::move(peer)),
      transfer_id_(transfer_id) {
    validate(cfg_);
}

Packet Petitioner::current_request() const {
    if (phase_ == Phase::awaiting_firp) {
        return Firq{transfer_id_, cfg_.chunk_size, file_name_};
    }
    return Drq{transfer_id_, next_chunk_};
}

Actions Petitioner::send_current_request(double now) {
    Actions out;
    out.push_back(SendAction{current_request(), peer_});
    out.push_back(ArmTimerAction{now + cfg_.retransmission_time});
    return out;
}

Actions Petitioner::start(double now) {
    attempts_used_ = 0;
    return send_current_request(now);
}

Actions Petitioner::on_packet(const Packet& p, double now) {
    if (terminal() || transfer_id_of(p) != transfer_id_) {
        return {};
    }

    if (phase_ == Phase::awaiting_firp) {
        const auto* firp = std::get_if<Firp>(&p);
        if (firp == nullptr) {
            return {};
        }
        if (firp->status == FirpStatus::not_found) {
            phase_ = Phase::failed;
            fail_reason_ = FailReason::file_not_found;
            return {FailAction{FailReason::file_not_found}};
        }
        plan_ = make_plan(firp->file_size, cfg_.chunk_size);
        expected_crc_ = firp->file_crc32;
        attempts_used_ = 0;
        if (plan_->n_chunks == 0) {
            // Zero-byte file: nothing to request.
            if (expected_crc_ != crc32_of(nullptr, 0)) {
                phase_ = Phase::failed;
                fail_reason_ = FailReason::corrupt;
                return {FailAction{FailReason::corrupt}};
            }
            phase_ = Phase::done;
            return {CompleteAction{{}}};
        }
        assembled_.reserve(firp->file_size);
        phase_ = Phase::awaiting_drp;
        next_chunk_ = 1;
        return send_current_request(now);
    }

    // awaiting_drp
    const auto* drp = std::get_if<Drp>(&p);
    if (drp == nullptr || drp->chunk_index != next_chunk_ ||
        drp->data.size() != plan_->chunk_length(next_chunk_)) {
        return {};
    }
    assembled_.insert(assembled_.end(), drp->data.begin(), drp->data.end());
    attempts_used_ = 0;
    if (next_chunk_ == plan_->n_chunks) {
        if (crc32_of(assembled_.data(), assembled_.size()) != expected_crc_) {
            phase_ = Phase::failed;
            fail_reason_ = FailReason::corrupt;
            return {FailAction{FailReason::corrupt}};
        }
        phase_ = Phase::done;
        return {CompleteAction{std::move(assembled_)}};
    }
    ++next_chunk_;
    return send_current_request(now);
}

Actions Petitioner::on_timeout(double now) {
    if (terminal()) {
        return {};
    }
    if (attempts_used_ < cfg_.max_attempts) {
        ++attempts_used_;
        return send_current_request(now);
    }
    phase_ = Phase::refused;
    fail_reason_ = FailReason::refused;
    Actions out;
    out.push_back(SendAction{Abort{transfer_id_, AbortReason::refused}, peer_});
    out.push_back(FailAction{FailReason::refused});
    return out;
}

}  // namespace vdtp
