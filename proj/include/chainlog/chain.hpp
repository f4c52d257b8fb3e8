#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainlog/hex.hpp"

namespace chainlog {

/// A log entry emitted by a contract during transaction execution.
/// topics[0] is the event signature hash for non-anonymous events.
struct LogEntry {
    Address address{};
    std::vector<Word32> topics; // at most 4
    std::vector<std::uint8_t> data;
    std::uint64_t logIndex = 0;
    Word32 transactionHash{};
};

struct Transaction {
    Word32 hash{};
    std::uint64_t blockNumber = 0;
    std::uint64_t index = 0;
    Address from{};
    std::optional<Address> to; // absent for contract creation
    BigInt value = 0;          // wei
    BigInt gasPrice = 0;       // wei per gas unit
    BigInt gasUsed = 0;        // from the receipt
    bool status = true;        // from the receipt
    std::vector<LogEntry> logs; // ordered by logIndex ascending
};

struct Block {
    std::uint64_t number = 0;
    Word32 hash{};
    Word32 parentHash{};
    std::uint64_t timestamp = 0; // seconds since epoch
    Address miner{};
    BigInt difficulty = 0;
    BigInt gasUsed = 0;
    BigInt gasLimit = 0;
    std::vector<Transaction> transactions; // ordered by index ascending
};

/// Checks the structural invariants (transaction/log ordering, topic count,
/// gasUsed <= gasLimit). Throws DecodeError on violation.
void check_block_invariants(const Block& b);

} // namespace chainlog
