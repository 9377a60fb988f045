#include <doctest.h>

#include <string>

#include "vdtp/bench.hpp"
#include "vdtp/sim.hpp"

using namespace vdtp;

namespace {

SimScenario lossless_scenario(uint64_t file_size) {
    SimScenario sc;
    sc.config = preset_configs()[5];  // EXPERTS
    sc.file_size = file_size;
    sc.mobility = low_speed_profile();
    sc.channel.base_loss = 0.0;
    sc.channel.radio_range = 1e9;  // the far zone is unreachable: loss never fires
    sc.seed = 1;
    return sc;
}

}  // namespace

TEST_CASE("lossless channel completes a 1 MB transfer at wire-rate goodput") {
    SimResult r = sim_run(lossless_scenario(1'000'000));
    CHECK(r.outcome == TrialOutcome::complete);
    CHECK(r.lost_packets == 0);
    CHECK(r.lost_bytes == 0);
    CHECK(r.file_bytes == generate_payload(1'000'000, kPayloadContentSeed));

    double goodput = goodput_kbs(1'000'000, r.elapsed);
    CHECK(goodput > 600.0);
    CHECK(goodput <= 687.5);
}

TEST_CASE("total blackout refuses after exactly 1 + max_attempts FIRQ sends") {
    SimScenario sc = lossless_scenario(100'000);
    sc.channel = ChannelParams{};
    sc.channel.radio_range = 1.0;  // every distance is out of range
    sc.mobility.distance_min = 5.0;
    sc.collect_trace = true;

    SimResult r = sim_run(sc);
    CHECK(r.outcome == TrialOutcome::refused);

    int firq_sends = 0;
    for (const auto& rec : r.trace) {
        if (rec.event == TraceEvent::send && rec.packet_type == "FIRQ") ++firq_sends;
    }
    CHECK(firq_sends == 1 + 8);  // EXPERTS max_attempts = 8
    CHECK(r.sent_packets == static_cast<uint64_t>(firq_sends) + 1);  // plus the final ABORT
    CHECK(r.delivered_packets == 0);
    CHECK(r.lost_packets == r.sent_packets);
}

TEST_CASE("identical seeds give byte-identical traces, different seeds differ") {
    SimScenario sc;
    sc.config = preset_configs()[1];  // DE
    sc.file_size = 200'000;
    sc.mobility = high_speed_profile();
    sc.channel = ChannelParams{};
    sc.seed = 42;
    sc.collect_trace = true;

    SimResult a = sim_run(sc);
    SimResult b = sim_run(sc);
    CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
    CHECK(a.elapsed == b.elapsed);
    CHECK(a.lost_packets == b.lost_packets);

    sc.seed = 43;
    SimResult c = sim_run(sc);
    CHECK(trace_to_csv(a.trace) != trace_to_csv(c.trace));
}

TEST_CASE("trace rows carry the documented header and stay within bounds") {
    SimScenario sc = lossless_scenario(100'000);
    sc.collect_trace = true;
    SimResult r = sim_run(sc);

    std::string csv = trace_to_csv(r.trace);
    CHECK(csv.rfind("time_s,event,node,packet_type,transfer_id,chunk_index,size_bytes,"
                    "distance_m,outcome\n",
                    0) == 0);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.back().event == TraceEvent::done);
    CHECK(r.trace.back().outcome == "complete");
    for (const auto& rec : r.trace) {
        CHECK(rec.distance >= sc.mobility.distance_min);
        CHECK(rec.distance <= sc.mobility.distance_max);
    }
}

TEST_CASE("conservation: every sent packet is delivered or lost") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        SimScenario sc;
        sc.config = preset_configs()[4];  // SA, smallest chunks
        sc.file_size = 150'000;
        sc.mobility = high_speed_profile();
        sc.channel = ChannelParams{};
        sc.channel.base_loss = 0.05;  // lossy enough to exercise both outcomes
        sc.seed = seed;
        SimResult r = sim_run(sc);
        CHECK(r.sent_packets == r.delivered_packets + r.lost_packets);
        if (r.outcome == TrialOutcome::complete) {
            CHECK(goodput_kbs(sc.file_size, r.elapsed) <= 687.5);
        }
    }
}

TEST_CASE("the time limit turns an unfinished transfer into incomplete") {
    SimScenario sc = lossless_scenario(100'000);
    sc.channel = ChannelParams{};
    sc.channel.radio_range = 1.0;  // blackout, so it would refuse at ~72 s
    sc.time_limit = 10.0;
    SimResult r = sim_run(sc);
    CHECK(r.outcome == TrialOutcome::incomplete);
    CHECK(r.elapsed == 10.0);
}

TEST_CASE("zero-byte transfers complete with empty payloads") {
    SimResult r = sim_run(lossless_scenario(0));
    CHECK(r.outcome == TrialOutcome::complete);
    CHECK(r.file_bytes.empty());
    CHECK(r.elapsed < 1.0);
}

TEST_CASE("raising base_loss cannot raise expected goodput") {
    auto mean_goodput = [](double base_loss) {
        double sum = 0;
        int completed = 0;
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            SimScenario sc;
            sc.config = preset_configs()[5];
            sc.file_size = 100'000;
            sc.mobility = low_speed_profile();
            sc.channel = ChannelParams{};
            sc.channel.base_loss = base_loss;
            sc.seed = seed;
            SimResult r = sim_run(sc);
            if (r.outcome == TrialOutcome::complete) {
                sum += goodput_kbs(sc.file_size, r.elapsed);
                ++completed;
            }
        }
        REQUIRE(completed > 0);
        return sum / completed;
    };
    CHECK(mean_goodput(1.2e-4) >= mean_goodput(0.05));
}

TEST_CASE("generated payloads are prefix-stable and seed-sensitive") {
    auto small = generate_payload(1'000, 9);
    auto big = generate_payload(4'096, 9);
    CHECK(std::equal(small.begin(), small.end(), big.begin()));
    CHECK(generate_payload(1'000, 10) != small);
    CHECK(generate_payload(0, 9).empty());
}
