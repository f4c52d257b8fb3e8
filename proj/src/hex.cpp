#include "chainlog/hex.hpp"

#include <algorithm>

namespace chainlog {

namespace {

constexpr char kHexChars[] = "0123456789abcdef";

bool has_hex_prefix(std::string_view s) {
    return s.size() >= 2 && s[0] == '0' && s[1] == 'x';
}

} // namespace

bool is_hex_digit(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

std::uint8_t hex_nibble(char c) {
    if (c >= '0' && c <= '9')
        return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f')
        return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F')
        return static_cast<std::uint8_t>(c - 'A' + 10);
    throw MalformedData(std::string("not a hex digit: '") + c + "'");
}

BigInt parse_quantity(std::string_view hex) {
    if (!has_hex_prefix(hex))
        throw MalformedQuantity("quantity must start with 0x: \"" + std::string(hex) + "\"");
    std::string_view digits = hex.substr(2);
    if (digits.empty())
        throw MalformedQuantity("quantity has no digits: \"" + std::string(hex) + "\"");
    if (digits.size() > 1 && digits[0] == '0')
        throw MalformedQuantity("quantity has leading zeros: \"" + std::string(hex) + "\"");
    if (digits.size() > kMaxQuantityBits / 4)
        throw MalformedQuantity("quantity exceeds 256 bits: \"" + std::string(hex) + "\"");
    BigInt value = 0;
    for (char c : digits) {
        if (!is_hex_digit(c))
            throw MalformedQuantity(std::string("invalid hex digit '") + c + "' in quantity");
        value <<= 4;
        value += hex_nibble(c);
    }
    return value;
}

std::string render_quantity(const BigInt& value) {
    if (value < 0)
        throw MalformedQuantity("quantity cannot be negative");
    if (value == 0)
        return "0x0";
    BigInt v = value;
    std::string digits;
    while (v > 0) {
        digits.push_back(kHexChars[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::vector<std::uint8_t> parse_data(std::string_view hex) {
    if (!has_hex_prefix(hex))
        throw MalformedData("data must start with 0x: \"" + std::string(hex) + "\"");
    std::string_view digits = hex.substr(2);
    if (digits.size() % 2 != 0)
        throw MalformedData("data needs an even number of hex digits: \"" + std::string(hex) + "\"");
    std::vector<std::uint8_t> out;
    out.reserve(digits.size() / 2);
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        if (!is_hex_digit(digits[i]) || !is_hex_digit(digits[i + 1]))
            throw MalformedData("invalid hex digit in data: \"" + std::string(hex) + "\"");
        out.push_back(static_cast<std::uint8_t>(hex_nibble(digits[i]) << 4 | hex_nibble(digits[i + 1])));
    }
    return out;
}

std::string render_data(const std::uint8_t* data, std::size_t size) {
    std::string out = "0x";
    out.reserve(2 + size * 2);
    for (std::size_t i = 0; i < size; ++i) {
        out.push_back(kHexChars[data[i] >> 4]);
        out.push_back(kHexChars[data[i] & 0xf]);
    }
    return out;
}

std::string render_data(const std::vector<std::uint8_t>& data) {
    return render_data(data.data(), data.size());
}

Address normalize_address(std::string_view s) {
    if (!has_hex_prefix(s) || s.size() != 42)
        throw MalformedAddress("address must be 0x + 40 hex digits: \"" + std::string(s) + "\"");
    Address a{};
    for (std::size_t i = 0; i < 20; ++i) {
        char hi = s[2 + i * 2];
        char lo = s[3 + i * 2];
        if (!is_hex_digit(hi) || !is_hex_digit(lo))
            throw MalformedAddress("invalid hex digit in address: \"" + std::string(s) + "\"");
        a[i] = static_cast<std::uint8_t>(hex_nibble(hi) << 4 | hex_nibble(lo));
    }
    return a;
}

std::string render_address(const Address& a) {
    return render_data(a.data(), a.size());
}

Word32 parse_word32(std::string_view hex) {
    auto bytes = parse_data(hex);
    if (bytes.size() != 32)
        throw MalformedData("expected 32 bytes, got " + std::to_string(bytes.size()));
    Word32 w{};
    std::copy(bytes.begin(), bytes.end(), w.begin());
    return w;
}

std::string render_word32(const Word32& w) {
    return render_data(w.data(), w.size());
}

BigInt bytes_to_uint(const std::uint8_t* data, std::size_t size) {
    BigInt value = 0;
    for (std::size_t i = 0; i < size; ++i) {
        value <<= 8;
        value += data[i];
    }
    return value;
}

std::vector<std::uint8_t> uint_to_bytes(const BigInt& value, std::size_t size) {
    std::vector<std::uint8_t> out(size, 0);
    BigInt v = value;
    for (std::size_t i = size; i-- > 0 && v > 0;) {
        out[i] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

} // namespace chainlog
