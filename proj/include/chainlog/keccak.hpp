#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "chainlog/hex.hpp"

namespace chainlog {

/// Keccak-256 as used by Ethereum: rate 1088, capacity 512, original
/// 0x01 multi-rate padding (not the SHA3-256 0x06 variant).
Word32 keccak256(const std::uint8_t* data, std::size_t size);
Word32 keccak256(std::string_view ascii);

} // namespace chainlog
