#pragma once

#include <cstdint>
#include <vector>

#include <chainlog/hex.hpp>

namespace testsupport {

// Bit-level Keccak-256 following the reference permutation description:
// the state is a flat bit array, rotation offsets come from the (x,y)
// walk recurrence and round constants from the rc(t) LFSR, so nothing is
// shared with the table-driven production implementation.
chainlog::Word32 keccak256_reference(const std::vector<std::uint8_t>& message);

} // namespace testsupport
