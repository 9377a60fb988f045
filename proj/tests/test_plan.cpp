#include <doctest.h>

#include "vdtp/plan.hpp"
#include "vdtp/rng.hpp"

using namespace vdtp;

TEST_CASE("make_plan splits the paper sizes as expected") {
    TransferPlan p = make_plan(1'000'000, 25'600);
    CHECK(p.n_chunks == 40);
    CHECK(p.last_chunk_size == 1'600);

    p = make_plan(100'000, 41'358);
    CHECK(p.n_chunks == 3);
    CHECK(p.last_chunk_size == 17'284);

    p = make_plan(25'600, 25'600);
    CHECK(p.n_chunks == 1);
    CHECK(p.last_chunk_size == 25'600);
}

TEST_CASE("zero-byte file has no chunks") {
    TransferPlan p = make_plan(0, 25'600);
    CHECK(p.n_chunks == 0);
    CHECK(p.last_chunk_size == 0);
}

TEST_CASE("chunk_size below 1 is rejected") {
    CHECK_THROWS_AS(make_plan(100, 0), std::invalid_argument);
}

TEST_CASE("chunk offsets and lengths tile the file exactly") {
    Rng rng(4242);
    for (int i = 0; i < 200; ++i) {
        uint64_t file_size = rng.next_u64() % 300'000;
        uint32_t chunk_size = 1 + static_cast<uint32_t>(rng.next_u64() % 70'000);
        TransferPlan p = make_plan(file_size, chunk_size);

        uint64_t covered = 0;
        for (uint32_t c = 1; c <= p.n_chunks; ++c) {
            CHECK(p.chunk_offset(c) == covered);
            uint64_t len = p.chunk_length(c);
            CHECK(len >= 1);
            CHECK(len <= chunk_size);
            if (c < p.n_chunks) CHECK(len == chunk_size);
            covered += len;
        }
        CHECK(covered == file_size);
    }
}
