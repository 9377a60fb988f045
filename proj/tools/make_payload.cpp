// Writes a deterministic pseudorandom payload file, matching the content the
// simulator serves, for exercising serve/fetch against real files.
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "vdtp/sim.hpp"

int main(int argc, char** argv) {
    if (argc < 3 || argc > 4) {
        std::fprintf(stderr, "usage: %s <path> <size-bytes> [seed]\n", argv[0]);
        return 1;
    }
    uint64_t size = std::strtoull(argv[2], nullptr, 10);
    uint64_t seed = argc == 4 ? std::strtoull(argv[3], nullptr, 10) : vdtp::kPayloadContentSeed;

    auto bytes = vdtp::generate_payload(size, seed);
    std::ofstream f(argv[1], std::ios::binary | std::ios::trunc);
    if (!f || !f.write(reinterpret_cast<const char*>(bytes.data()),
                       static_cast<std::streamsize>(bytes.size()))
                   .flush()
                   .good()) {
        std::fprintf(stderr, "cannot write %s\n", argv[1]);
        return 2;
    }
    std::printf("%s: %llu bytes\n", argv[1], static_cast<unsigned long long>(size));
    return 0;
}
