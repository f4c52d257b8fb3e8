#include "chainlog/keccak.hpp"

#include <array>
#include <cstring>

namespace chainlog {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kRotation[5][5] = {
    {0, 36, 3, 41, 18}, {1, 44, 10, 45, 2}, {62, 6, 43, 15, 61}, {28, 55, 25, 21, 56}, {27, 20, 39, 8, 14},
};

inline std::uint64_t rotl64(std::uint64_t v, int n) {
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

void keccak_f1600(std::uint64_t a[5][5]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4];
        for (int x = 0; x < 5; ++x) {
            d[x] = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
            for (int y = 0; y < 5; ++y)
                a[x][y] ^= d[x];
        }
        // rho + pi
        std::uint64_t b[5][5];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y][(2 * x + 3 * y) % 5] = rotl64(a[x][y], kRotation[x][y]);
        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x][y] = b[x][y] ^ (~b[(x + 1) % 5][y] & b[(x + 2) % 5][y]);
        // iota
        a[0][0] ^= kRoundConstants[round];
    }
}

constexpr std::size_t kRateBytes = 136; // 1088-bit rate for a 512-bit capacity

} // namespace

Word32 keccak256(const std::uint8_t* data, std::size_t size) {
    std::uint64_t state[5][5] = {};

    auto absorb_block = [&](const std::uint8_t* block) {
        for (std::size_t i = 0; i < kRateBytes / 8; ++i) {
            std::uint64_t lane = 0;
            for (int b = 7; b >= 0; --b)
                lane = (lane << 8) | block[i * 8 + static_cast<std::size_t>(b)];
            state[i % 5][i / 5] ^= lane;
        }
        keccak_f1600(state);
    };

    std::size_t offset = 0;
    while (size - offset >= kRateBytes) {
        absorb_block(data + offset);
        offset += kRateBytes;
    }

    // final block with 0x01 .. 0x80 multi-rate padding
    std::uint8_t last[kRateBytes] = {};
    if (size > offset)
        std::memcpy(last, data + offset, size - offset);
    last[size - offset] = 0x01;
    last[kRateBytes - 1] |= 0x80;
    absorb_block(last);

    Word32 out{};
    for (std::size_t i = 0; i < 4; ++i) {
        std::uint64_t lane = state[i % 5][i / 5];
        for (int b = 0; b < 8; ++b)
            out[i * 8 + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(lane >> (8 * b));
    }
    return out;
}

Word32 keccak256(std::string_view ascii) {
    return keccak256(reinterpret_cast<const std::uint8_t*>(ascii.data()), ascii.size());
}

} // namespace chainlog
