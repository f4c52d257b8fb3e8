#include "support/fixture_builder.hpp"

#include <fstream>

#include <chainlog/keccak.hpp>

namespace testsupport {

using chainlog::Address;
using chainlog::BigInt;
using chainlog::Word32;
using nlohmann::json;

namespace {

std::string quantity(const BigInt& v) {
    return chainlog::render_quantity(v);
}

std::string quantity(std::uint64_t v) {
    return chainlog::render_quantity(BigInt(v));
}

Word32 tagged_hash(const std::string& tag) {
    return chainlog::keccak256(tag);
}

} // namespace

chainlog::Address test_address(std::uint8_t tag) {
    Address a{};
    a.fill(tag);
    a[0] = 0xc0;
    return a;
}

FixtureBuilder::BuiltBlock FixtureBuilder::build_block(std::uint64_t number,
                                                       const std::string& parentHash,
                                                       std::uint64_t timestamp,
                                                       const std::vector<TxSpec>& txs,
                                                       const std::string& salt) const {
    std::string blockHash =
        chainlog::render_word32(tagged_hash("block:" + std::to_string(number) + ":" + parentHash + ":" + salt));

    json txArray = json::array();
    json receiptObj = json::object();
    BigInt blockGasUsed = 0;
    std::uint64_t logIndex = 0;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const auto& t = txs[i];
        std::string txHash = chainlog::render_word32(
            tagged_hash("tx:" + std::to_string(number) + ":" + std::to_string(i) + ":" + salt));
        json txJson = {
            {"hash", txHash},
            {"blockHash", blockHash},
            {"blockNumber", quantity(number)},
            {"transactionIndex", quantity(static_cast<std::uint64_t>(i))},
            {"from", chainlog::render_address(t.from)},
            {"value", quantity(t.value)},
            {"gasPrice", quantity(t.gasPrice)},
        };
        if (t.to)
            txJson["to"] = chainlog::render_address(*t.to);
        else
            txJson["to"] = nullptr;
        txArray.push_back(txJson);

        json logsJson = json::array();
        for (const auto& log : t.logs) {
            json topics = json::array();
            for (const auto& topic : log.topics)
                topics.push_back(chainlog::render_word32(topic));
            logsJson.push_back({
                {"address", chainlog::render_address(log.address)},
                {"topics", topics},
                {"data", chainlog::render_data(log.data)},
                {"logIndex", quantity(logIndex++)},
                {"transactionHash", txHash},
                {"blockNumber", quantity(number)},
            });
        }
        receiptObj[txHash] = {
            {"transactionHash", txHash},
            {"blockNumber", quantity(number)},
            {"gasUsed", quantity(t.gasUsed)},
            {"status", t.status ? "0x1" : "0x0"},
            {"logs", logsJson},
        };
        blockGasUsed += t.gasUsed;
    }

    json blockJson = {
        {"number", quantity(number)},
        {"hash", blockHash},
        {"parentHash", parentHash},
        {"timestamp", quantity(timestamp)},
        {"miner", chainlog::render_address(test_address(0xee))},
        {"difficulty", quantity(BigInt(2000000) + number)},
        {"gasUsed", quantity(blockGasUsed)},
        {"gasLimit", quantity(BigInt(30000000))},
        {"transactions", txArray},
    };
    return {blockJson, receiptObj};
}

void FixtureBuilder::add_block(std::uint64_t timestamp, std::vector<TxSpec> txs,
                               const std::string& salt) {
    std::uint64_t number = static_cast<std::uint64_t>(blocks_.size());
    std::string parent = number == 0
                             ? chainlog::render_word32(Word32{})
                             : blocks_.back().at("hash").get<std::string>();
    auto built = build_block(number, parent, timestamp, txs, salt);
    blocks_.push_back(built.block);
    receipts_.update(built.receipts);
}

void FixtureBuilder::add_reorg(std::uint64_t height, std::uint64_t timestamp,
                               std::vector<TxSpec> txs, const std::string& salt) {
    std::string parent = height == 0
                             ? chainlog::render_word32(Word32{})
                             : blocks_.at(height - 1).at("hash").get<std::string>();
    auto built = build_block(height, parent, timestamp, txs, salt);
    reorgs_.push_back({
        {"atHeight", height},
        {"block", built.block},
        {"receipts", built.receipts},
    });
}

void FixtureBuilder::map_call(std::uint64_t block, const Address& to,
                              const std::vector<std::uint8_t>& calldata,
                              const std::vector<std::uint8_t>& result) {
    calls_.push_back({
        {"block", quantity(block)},
        {"to", chainlog::render_address(to)},
        {"data", chainlog::render_data(calldata)},
        {"result", chainlog::render_data(result)},
    });
}

json FixtureBuilder::to_json() const {
    json out = {
        {"blocks", blocks_},
        {"receipts", receipts_},
        {"calls", calls_},
        {"reorgs", reorgs_},
    };
    if (initialHead_)
        out["initialHead"] = *initialHead_;
    return out;
}

void FixtureBuilder::write_file(const std::string& path) const {
    std::ofstream out(path);
    out << to_json().dump(2);
}

} // namespace testsupport
