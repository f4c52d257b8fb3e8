#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chainlog/errors.hpp"

namespace chainlog {

using BigInt = boost::multiprecision::cpp_int;

using Address = std::array<std::uint8_t, 20>;
using Word32 = std::array<std::uint8_t, 32>;

// JSON-RPC quantity: "0x" + minimal hex digits, no leading zeros except "0x0".
// Accepts values up to 256 bits.
BigInt parse_quantity(std::string_view hex);
std::string render_quantity(const BigInt& value);

// Unformatted data: "0x" + even number of hex digits.
std::vector<std::uint8_t> parse_data(std::string_view hex);
std::string render_data(const std::uint8_t* data, std::size_t size);
std::string render_data(const std::vector<std::uint8_t>& data);

// Canonical lowercase 20-byte address from "0x" + 40 hex digits (any case).
Address normalize_address(std::string_view s);
std::string render_address(const Address& a);

Word32 parse_word32(std::string_view hex);
std::string render_word32(const Word32& w);

bool is_hex_digit(char c);
std::uint8_t hex_nibble(char c);

// Big-endian conversions between integers and byte strings.
BigInt bytes_to_uint(const std::uint8_t* data, std::size_t size);
// Writes `value` right-aligned into a buffer of `size` bytes.
std::vector<std::uint8_t> uint_to_bytes(const BigInt& value, std::size_t size);

inline constexpr unsigned kMaxQuantityBits = 256;

} // namespace chainlog
