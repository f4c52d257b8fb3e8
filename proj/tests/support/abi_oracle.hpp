#pragma once

#include <string>
#include <vector>

#include <chainlog/value.hpp>

namespace testsupport {

// Hex-string ABI encoder, written directly from the layout rules (head words
// of 64 hex chars, byte offsets into the tail, length-prefixed padded
// payloads). Independent of the production byte-vector encoder.
std::string abi_encode_hex(const std::vector<chainlog::ValueType>& types,
                           const std::vector<chainlog::Value>& values);

std::vector<std::uint8_t> abi_encode_bytes(const std::vector<chainlog::ValueType>& types,
                                           const std::vector<chainlog::Value>& values);

} // namespace testsupport
