#pragma once

#include <random>
#include <string>

#include <chainlog/value.hpp>

namespace testsupport {

using Rng = std::mt19937_64;

inline chainlog::BigInt random_uint(Rng& rng, unsigned bits) {
    chainlog::BigInt v = 0;
    unsigned produced = 0;
    std::uniform_int_distribution<std::uint32_t> dist;
    while (produced < bits) {
        v <<= 32;
        v += dist(rng);
        produced += 32;
    }
    if (bits % 32)
        v >>= (32 - bits % 32);
    // bias towards small values and boundaries now and then
    switch (rng() % 8) {
    case 0:
        return 0;
    case 1:
        return 1;
    case 2:
        return (chainlog::BigInt(1) << bits) - 1;
    default:
        return v;
    }
}

inline chainlog::Address random_address(Rng& rng) {
    chainlog::Address a{};
    for (auto& b : a)
        b = static_cast<std::uint8_t>(rng());
    return a;
}

inline std::vector<std::uint8_t> random_bytes(Rng& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(rng());
    return out;
}

inline std::string random_ascii(Rng& rng, std::size_t maxLen) {
    std::uniform_int_distribution<std::size_t> len(0, maxLen);
    std::uniform_int_distribution<int> ch(0x20, 0x7e);
    std::string s;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(static_cast<char>(ch(rng)));
    return s;
}

/// A random ABI-supported type; lists only at depth 0 so arrays stay
/// one-dimensional.
inline chainlog::ValueType random_abi_type(Rng& rng, bool allowList = true) {
    using VT = chainlog::ValueType;
    switch (rng() % (allowList ? 8 : 7)) {
    case 0:
        return VT::uint_(8 * (1 + static_cast<unsigned>(rng() % 32)));
    case 1:
        return VT::int_(8 * (1 + static_cast<unsigned>(rng() % 32)));
    case 2:
        return VT::address();
    case 3:
        return VT::boolean();
    case 4:
        return VT::fixed_bytes(1 + static_cast<unsigned>(rng() % 32));
    case 5:
        return VT::bytes();
    case 6:
        return VT::string();
    default:
        return VT::list(random_abi_type(rng, false));
    }
}

inline chainlog::Value random_value_of(Rng& rng, const chainlog::ValueType& t) {
    using VT = chainlog::ValueType;
    using chainlog::Value;
    switch (t.kind) {
    case VT::Kind::Uint:
        return Value::uint_(random_uint(rng, t.width), t.width);
    case VT::Kind::Int: {
        chainlog::BigInt v = random_uint(rng, t.width - 1);
        if (rng() % 2)
            v = -v - (rng() % 2 ? 1 : 0);
        if (v < -(chainlog::BigInt(1) << (t.width - 1)))
            v = -(chainlog::BigInt(1) << (t.width - 1));
        return Value::int_(v, t.width);
    }
    case VT::Kind::Address:
        return Value::address(random_address(rng));
    case VT::Kind::Bool:
        return Value::boolean(rng() % 2 == 0);
    case VT::Kind::String:
        return Value::string(random_ascii(rng, 80));
    case VT::Kind::Bytes:
        return Value::bytes(random_bytes(rng, rng() % 100));
    case VT::Kind::FixedBytes:
        return Value::fixed_bytes(random_bytes(rng, t.width));
    case VT::Kind::List: {
        Value::List elems;
        std::size_t n = rng() % 5;
        for (std::size_t i = 0; i < n; ++i)
            elems.push_back(random_value_of(rng, *t.element));
        return Value::list(*t.element, std::move(elems));
    }
    }
    return Value::boolean(false);
}

} // namespace testsupport
