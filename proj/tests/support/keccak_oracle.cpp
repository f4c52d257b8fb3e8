#include "support/keccak_oracle.hpp"

#include <array>

namespace testsupport {

namespace {

constexpr int W = 64; // lane width

struct BitState {
    // bit (x, y, z) at index W * (5 * y + x) + z
    std::array<int, 1600> bits{};

    int& at(int x, int y, int z) { return bits[static_cast<std::size_t>(W * (5 * y + x) + z)]; }
    int at(int x, int y, int z) const { return bits[static_cast<std::size_t>(W * (5 * y + x) + z)]; }
};

int rc_bit(int t) {
    t %= 255;
    if (t == 0)
        return 1;
    std::array<int, 8> r = {1, 0, 0, 0, 0, 0, 0, 0};
    for (int i = 1; i <= t; ++i) {
        std::array<int, 9> s{};
        for (int j = 0; j < 8; ++j)
            s[static_cast<std::size_t>(j + 1)] = r[static_cast<std::size_t>(j)];
        s[0] ^= s[8];
        s[4] ^= s[8];
        s[5] ^= s[8];
        s[6] ^= s[8];
        for (int j = 0; j < 8; ++j)
            r[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j)];
    }
    return r[0];
}

int mod(int a, int m) {
    return ((a % m) + m) % m;
}

void round(BitState& a, int roundIndex) {
    // theta
    {
        int c[5][W], d[5][W];
        for (int x = 0; x < 5; ++x)
            for (int z = 0; z < W; ++z)
                c[x][z] = a.at(x, 0, z) ^ a.at(x, 1, z) ^ a.at(x, 2, z) ^ a.at(x, 3, z) ^ a.at(x, 4, z);
        for (int x = 0; x < 5; ++x)
            for (int z = 0; z < W; ++z)
                d[x][z] = c[mod(x - 1, 5)][z] ^ c[mod(x + 1, 5)][mod(z - 1, W)];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                for (int z = 0; z < W; ++z)
                    a.at(x, y, z) ^= d[x][z];
    }
    // rho: walk (1,0) -> (y, 2x+3y), offset (t+1)(t+2)/2
    {
        BitState out = a;
        int x = 1, y = 0;
        for (int t = 0; t < 24; ++t) {
            int shift = (t + 1) * (t + 2) / 2;
            for (int z = 0; z < W; ++z)
                out.at(x, y, z) = a.at(x, y, mod(z - shift, W));
            int nx = y, ny = mod(2 * x + 3 * y, 5);
            x = nx;
            y = ny;
        }
        a = out;
    }
    // pi
    {
        BitState out = a;
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                for (int z = 0; z < W; ++z)
                    out.at(x, y, z) = a.at(mod(x + 3 * y, 5), x, z);
        a = out;
    }
    // chi
    {
        BitState out = a;
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                for (int z = 0; z < W; ++z)
                    out.at(x, y, z) =
                        a.at(x, y, z) ^ ((a.at(mod(x + 1, 5), y, z) ^ 1) & a.at(mod(x + 2, 5), y, z));
        a = out;
    }
    // iota
    for (int j = 0; j <= 6; ++j)
        a.at(0, 0, (1 << j) - 1) ^= rc_bit(j + 7 * roundIndex);
}

void permute(BitState& a) {
    for (int i = 0; i < 24; ++i)
        round(a, i);
}

constexpr std::size_t kRateBits = 1088;

} // namespace

chainlog::Word32 keccak256_reference(const std::vector<std::uint8_t>& message) {
    // pad10*1 with the 0x01 domain bit prepended (original keccak padding)
    std::vector<int> bits;
    bits.reserve(message.size() * 8 + kRateBits);
    for (std::uint8_t byte : message)
        for (int i = 0; i < 8; ++i)
            bits.push_back((byte >> i) & 1); // LSB-first bit order
    bits.push_back(1);
    while ((bits.size() + 1) % kRateBits != 0)
        bits.push_back(0);
    bits.push_back(1);

    BitState state;
    for (std::size_t block = 0; block < bits.size() / kRateBits; ++block) {
        for (std::size_t i = 0; i < kRateBits; ++i)
            state.bits[i] ^= bits[block * kRateBits + i];
        permute(state);
    }

    chainlog::Word32 out{};
    for (std::size_t i = 0; i < 256; ++i)
        if (state.bits[i])
            out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return out;
}

} // namespace testsupport
