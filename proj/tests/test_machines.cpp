#include <doctest.h>

#include <optional>
#include <vector>

#include "vdtp/crc32.hpp"
#include "vdtp/owner.hpp"
#include "vdtp/petitioner.hpp"
#include "vdtp/sim.hpp"

using namespace vdtp;

namespace {

const ProtocolConfig kExperts = preset_configs()[5];

const SendAction* find_send(const Actions& acts) {
    for (const auto& a : acts) {
        if (const auto* s = std::get_if<SendAction>(&a)) return s;
    }
    return nullptr;
}

const ArmTimerAction* find_timer(const Actions& acts) {
    for (const auto& a : acts) {
        if (const auto* t = std::get_if<ArmTimerAction>(&a)) return t;
    }
    return nullptr;
}

// Relays packets both ways with no loss; returns the assembled bytes on
// Complete, nullopt on Fail. Collects the DRQ indices the petitioner sent.
std::optional<std::vector<uint8_t>> run_lossless(Petitioner& pet, Owner& owner,
                                                 std::vector<uint32_t>* drq_indices = nullptr) {
    double now = 0;
    Actions acts = pet.start(now);
    for (int step = 0; step < 100'000; ++step) {
        const SendAction* send = nullptr;
        for (auto& a : acts) {
            if (auto* s = std::get_if<SendAction>(&a)) {
                send = s;
            } else if (auto* c = std::get_if<CompleteAction>(&a)) {
                return std::move(c->file_bytes);
            } else if (std::get_if<FailAction>(&a) != nullptr) {
                return std::nullopt;
            }
        }
        REQUIRE(send != nullptr);
        if (drq_indices != nullptr) {
            if (const auto* drq = std::get_if<Drq>(&send->packet)) {
                drq_indices->push_back(drq->chunk_index);
            }
        }
        now += 0.01;
        Actions owner_acts = owner.on_packet(send->packet, "pet", now);
        const SendAction* reply = find_send(owner_acts);
        REQUIRE(reply != nullptr);
        now += 0.01;
        acts = pet.on_packet(reply->packet, now);
    }
    FAIL("transfer did not terminate");
    return std::nullopt;
}

}  // namespace

TEST_CASE("complete exchange reassembles the file in strict stop-and-wait order") {
    MemoryStore store;
    auto payload = generate_payload(66'000, 11);
    store.add("f.bin", payload);
    Owner owner(store, 80.0);
    Petitioner pet(kExperts, "f.bin", "owner", 1);

    std::vector<uint32_t> drqs;
    auto bytes = run_lossless(pet, owner, &drqs);
    REQUIRE(bytes.has_value());
    CHECK(*bytes == payload);
    CHECK(pet.phase() == Petitioner::Phase::done);
    CHECK(drqs == std::vector<uint32_t>{1, 2, 3});
}

TEST_CASE("owner answers FIRQ with metadata and serves the last short chunk") {
    MemoryStore store;
    auto payload = generate_payload(1'000'000, 3);
    store.add("big.bin", payload);
    Owner owner(store, 80.0);

    auto acts = owner.on_packet(Firq{9, 25'600, "big.bin"}, "pet", 0.0);
    const SendAction* send = find_send(acts);
    REQUIRE(send != nullptr);
    const auto* firp = std::get_if<Firp>(&send->packet);
    REQUIRE(firp != nullptr);
    CHECK(firp->status == FirpStatus::ok);
    CHECK(firp->file_size == 1'000'000);
    CHECK(firp->file_crc32 == crc32_of(payload.data(), payload.size()));

    acts = owner.on_packet(Drq{9, 40}, "pet", 0.1);
    send = find_send(acts);
    REQUIRE(send != nullptr);
    const auto* drp = std::get_if<Drp>(&send->packet);
    REQUIRE(drp != nullptr);
    CHECK(drp->chunk_index == 40);
    CHECK(drp->data.size() == 1'600);
    CHECK(std::vector<uint8_t>(payload.end() - 1'600, payload.end()) == drp->data);
}

TEST_CASE("missing file fails the transfer with not-found") {
    MemoryStore store;
    Owner owner(store, 80.0);
    Petitioner pet(kExperts, "absent.bin", "owner", 2);
    auto bytes = run_lossless(pet, owner);
    CHECK_FALSE(bytes.has_value());
    CHECK(pet.phase() == Petitioner::Phase::failed);
    CHECK(pet.fail_reason() == FailReason::file_not_found);
}

TEST_CASE("silence refuses after exactly 1 + max_attempts sends") {
    ProtocolConfig cfg{"t", 1'000, 2.0, 3};
    Petitioner pet(cfg, "f.bin", "owner", 7);

    int firq_sends = 0;
    auto count = [&](const Actions& acts) {
        const SendAction* s = find_send(acts);
        if (s != nullptr && std::get_if<Firq>(&s->packet) != nullptr) ++firq_sends;
    };

    count(pet.start(0.0));
    for (uint32_t i = 0; i < cfg.max_attempts; ++i) {
        auto acts = pet.on_timeout(2.0 * (i + 1));
        count(acts);
        CHECK_FALSE(pet.terminal());
        CHECK(pet.attempts_used() == i + 1);
    }
    auto final_acts = pet.on_timeout(8.0);
    count(final_acts);
    CHECK(firq_sends == 4);  // 1 + max_attempts, never more

    const SendAction* abort_send = find_send(final_acts);
    REQUIRE(abort_send != nullptr);
    const auto* abort = std::get_if<Abort>(&abort_send->packet);
    REQUIRE(abort != nullptr);
    CHECK(abort->reason == AbortReason::refused);
    CHECK(pet.phase() == Petitioner::Phase::refused);
    CHECK(pet.fail_reason() == FailReason::refused);

    // Terminal machines emit nothing further.
    CHECK(pet.on_timeout(10.0).empty());
    CHECK(pet.on_packet(Firp{7, FirpStatus::ok, 9, 0}, 10.0).empty());
}

TEST_CASE("attempts reset per request, so scattered losses never refuse") {
    ProtocolConfig cfg{"t", 25'600, 1.0, 2};
    MemoryStore store;
    auto payload = generate_payload(66'000, 4);
    store.add("f.bin", payload);
    Owner owner(store, 80.0);
    Petitioner pet(cfg, "f.bin", "owner", 3);

    double now = 0;
    auto deliver = [&](const Actions& acts) {
        const SendAction* s = find_send(acts);
        REQUIRE(s != nullptr);
        auto reply = owner.on_packet(s->packet, "pet", now);
        const SendAction* r = find_send(reply);
        REQUIRE(r != nullptr);
        return pet.on_packet(r->packet, now);
    };

    Actions acts = pet.start(now);
    // Lose every transmission max_attempts times before letting it through:
    // 2 + 2 + 2 + 2 = 8 losses total against max_attempts = 2.
    for (int request = 0; request < 4 && !pet.terminal(); ++request) {
        acts = pet.on_timeout(now += 1.0);
        CHECK(pet.attempts_used() == 1);
        acts = pet.on_timeout(now += 1.0);
        CHECK(pet.attempts_used() == 2);
        acts = deliver(acts);
        if (!pet.terminal()) CHECK(pet.attempts_used() == 0);
    }
    CHECK(pet.phase() == Petitioner::Phase::done);
}

TEST_CASE("stale, duplicate, and mismatched packets are ignored") {
    ProtocolConfig cfg{"t", 100, 1.0, 2};
    MemoryStore store;
    auto payload = generate_payload(300, 5);
    store.add("f.bin", payload);
    Owner owner(store, 80.0);
    Petitioner pet(cfg, "f.bin", "owner", 4);

    auto acts = pet.start(0.0);
    // Wrong transfer id, wrong packet type: no state change, no actions.
    CHECK(pet.on_packet(Firp{99, FirpStatus::ok, 300, 0}, 0.1).empty());
    CHECK(pet.on_packet(Drq{4, 1}, 0.1).empty());
    CHECK(pet.phase() == Petitioner::Phase::awaiting_firp);

    auto owner_acts = owner.on_packet(Firq{4, 100, "f.bin"}, "pet", 0.2);
    acts = pet.on_packet(find_send(owner_acts)->packet, 0.2);

    // Awaiting Drp(1): a duplicate of another index and a wrong-length chunk
    // both bounce off.
    std::vector<uint8_t> chunk2(payload.begin() + 100, payload.begin() + 200);
    CHECK(pet.on_packet(Drp{4, 2, chunk2}, 0.3).empty());
    CHECK(pet.on_packet(Drp{4, 1, std::vector<uint8_t>(99, 0)}, 0.3).empty());
    CHECK(pet.attempts_used() == 0);

    std::vector<uint8_t> chunk1(payload.begin(), payload.begin() + 100);
    acts = pet.on_packet(Drp{4, 1, chunk1}, 0.4);
    const auto* next = std::get_if<Drq>(&find_send(acts)->packet);
    REQUIRE(next != nullptr);
    CHECK(next->chunk_index == 2);
}

TEST_CASE("zero-byte file completes straight after the handshake") {
    MemoryStore store;
    store.add("empty.bin", std::vector<uint8_t>{});
    Owner owner(store, 80.0);
    Petitioner pet(kExperts, "empty.bin", "owner", 5);

    std::vector<uint32_t> drqs;
    auto bytes = run_lossless(pet, owner, &drqs);
    REQUIRE(bytes.has_value());
    CHECK(bytes->empty());
    CHECK(drqs.empty());
}

TEST_CASE("corrupted chunk data fails the final checksum") {
    ProtocolConfig cfg{"t", 100, 1.0, 2};
    MemoryStore store;
    auto payload = generate_payload(200, 6);
    store.add("f.bin", payload);
    Owner owner(store, 80.0);
    Petitioner pet(cfg, "f.bin", "owner", 6);

    auto acts = pet.start(0.0);
    acts = pet.on_packet(find_send(owner.on_packet(find_send(acts)->packet, "p", 0))->packet, 0);
    for (int i = 0; i < 2; ++i) {
        auto reply = owner.on_packet(find_send(acts)->packet, "p", 0);
        auto pkt = find_send(reply)->packet;
        auto& drp = std::get<Drp>(pkt);
        if (drp.chunk_index == 2) drp.data[50] ^= 0xFF;  // same length, different bytes
        acts = pet.on_packet(pkt, 0);
    }
    CHECK(pet.phase() == Petitioner::Phase::failed);
    CHECK(pet.fail_reason() == FailReason::corrupt);
}

TEST_CASE("start arms the preset retransmission timer") {
    Petitioner experts(kExperts, "a.bin", "owner", 8);
    auto acts = experts.start(0.0);
    REQUIRE(find_timer(acts) != nullptr);
    CHECK(find_timer(acts)->deadline == doctest::Approx(8.00));
    const auto* firq = std::get_if<Firq>(&find_send(acts)->packet);
    REQUIRE(firq != nullptr);
    CHECK(firq->requested_chunk_size == 25'600);

    Petitioner ga(preset_configs()[3], "a.bin", "owner", 9);
    acts = ga.start(1.0);
    CHECK(find_timer(acts)->deadline == doctest::Approx(4.83));
}

TEST_CASE("successive transfer ids are distinct") {
    uint32_t a = next_transfer_id();
    uint32_t b = next_transfer_id();
    CHECK(a != b);
}

TEST_CASE("owner rejects bad chunk sizes and ignores junk requests") {
    MemoryStore store;
    store.add("f.bin", generate_payload(500, 7));
    Owner owner(store, 80.0);

    for (uint32_t bad_size : {0u, 65'001u}) {
        auto acts = owner.on_packet(Firq{10, bad_size, "f.bin"}, "pet", 0.0);
        const auto* firp = std::get_if<Firp>(&find_send(acts)->packet);
        REQUIRE(firp != nullptr);
        CHECK(firp->status == FirpStatus::not_found);
    }
    CHECK(owner.active_transfers() == 0);

    CHECK(owner.on_packet(Drq{42, 1}, "pet", 0.0).empty());     // unknown transfer
    CHECK(owner.on_packet(Firp{1, FirpStatus::ok, 1, 1}, "pet", 0.0).empty());
    CHECK(owner.on_packet(Drp{1, 1, {}}, "pet", 0.0).empty());

    owner.on_packet(Firq{11, 100, "f.bin"}, "pet", 0.0);
    CHECK(owner.active_transfers() == 1);
    CHECK(owner.on_packet(Drq{11, 0}, "pet", 0.0).empty());  // below range
    CHECK(owner.on_packet(Drq{11, 6}, "pet", 0.0).empty());  // past the last chunk
}

TEST_CASE("owner re-answers duplicate FIRQ and retransmitted DRQ consistently") {
    MemoryStore store;
    store.add("f.bin", generate_payload(500, 8));
    Owner owner(store, 80.0);

    auto first = owner.on_packet(Firq{12, 100, "f.bin"}, "pet", 0.0);
    auto again = owner.on_packet(Firq{12, 100, "f.bin"}, "pet", 0.1);
    CHECK(owner.active_transfers() == 1);
    CHECK(std::get<Firp>(find_send(first)->packet) == std::get<Firp>(find_send(again)->packet));

    auto drp_a = owner.on_packet(Drq{12, 2}, "pet", 0.2);
    auto drp_b = owner.on_packet(Drq{12, 2}, "pet", 0.3);
    CHECK(std::get<Drp>(find_send(drp_a)->packet) == std::get<Drp>(find_send(drp_b)->packet));
}

TEST_CASE("owner releases state on abort and on idle timeout") {
    MemoryStore store;
    store.add("f.bin", generate_payload(500, 9));
    Owner owner(store, 80.0);

    owner.on_packet(Firq{13, 100, "f.bin"}, "pet", 0.0);
    owner.on_packet(Abort{13, AbortReason::refused}, "pet", 0.1);
    CHECK(owner.active_transfers() == 0);

    owner.on_packet(Firq{14, 100, "f.bin"}, "pet", 1.0);
    owner.collect_idle(80.9);
    CHECK(owner.active_transfers() == 1);  // last activity 1.0, timeout 80
    owner.collect_idle(81.1);
    CHECK(owner.active_transfers() == 0);
}

TEST_CASE("transfers from different peers with the same id stay independent") {
    MemoryStore store;
    store.add("f.bin", generate_payload(300, 10));
    store.add("g.bin", generate_payload(200, 11));
    Owner owner(store, 80.0);

    owner.on_packet(Firq{1, 100, "f.bin"}, "peer-a", 0.0);
    owner.on_packet(Firq{1, 100, "g.bin"}, "peer-b", 0.0);
    CHECK(owner.active_transfers() == 2);

    auto a = owner.on_packet(Drq{1, 1}, "peer-a", 0.1);
    auto b = owner.on_packet(Drq{1, 1}, "peer-b", 0.1);
    CHECK(std::get<Drp>(find_send(a)->packet).data !=
          std::get<Drp>(find_send(b)->packet).data);
}
