#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <chainlog/chain.hpp>

namespace testsupport {

// Builds deterministic fixture chains in the JSON layout the fixture
// transport consumes: `blocks` (JSON-RPC block shape with full
// transactions), `receipts` (tx hash -> receipt), `calls`
// ({block, to, data, result}), `reorgs` ({atHeight, block, receipts}),
// optional `initialHead`. Hashes are keccak digests of the block/tx
// coordinates, so parents link and replacement blocks differ.
class FixtureBuilder {
public:
    struct LogSpec {
        chainlog::Address address{};
        std::vector<chainlog::Word32> topics;
        std::vector<std::uint8_t> data;
    };

    struct TxSpec {
        chainlog::Address from{};
        std::optional<chainlog::Address> to;
        chainlog::BigInt value = 0;
        chainlog::BigInt gasPrice = 0;
        chainlog::BigInt gasUsed = 21000;
        bool status = true;
        std::vector<LogSpec> logs;
    };

    // Appends a block; transactions are indexed in the given order.
    // `salt` perturbs the hash (used for reorg replacements).
    void add_block(std::uint64_t timestamp, std::vector<TxSpec> txs, const std::string& salt = "");

    // Replaces the block at `height` in the reorg script (not in `blocks`).
    void add_reorg(std::uint64_t height, std::uint64_t timestamp, std::vector<TxSpec> txs,
                   const std::string& salt = "reorg");

    void map_call(std::uint64_t block, const chainlog::Address& to,
                  const std::vector<std::uint8_t>& calldata, const std::vector<std::uint8_t>& result);

    // Makes streaming playback start at this head instead of the last block.
    void set_initial_head(std::uint64_t head) { initialHead_ = head; }

    std::uint64_t block_count() const { return static_cast<std::uint64_t>(blocks_.size()); }

    nlohmann::json to_json() const;
    void write_file(const std::string& path) const;

private:
    struct BuiltBlock {
        nlohmann::json block;
        nlohmann::json receipts; // object keyed by tx hash
    };

    BuiltBlock build_block(std::uint64_t number, const std::string& parentHash,
                           std::uint64_t timestamp, const std::vector<TxSpec>& txs,
                           const std::string& salt) const;

    std::vector<nlohmann::json> blocks_;
    nlohmann::json receipts_ = nlohmann::json::object();
    std::vector<nlohmann::json> calls_;
    std::vector<nlohmann::json> reorgs_;
    std::optional<std::uint64_t> initialHead_;
};

chainlog::Address test_address(std::uint8_t tag);

} // namespace testsupport
