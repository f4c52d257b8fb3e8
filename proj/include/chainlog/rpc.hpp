#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainlog/chain.hpp"

namespace chainlog::rpc {

/// One JSON-RPC exchange. Implementations throw TransportError for
/// connectivity problems (retryable) and RpcError for error responses
/// (never retried).
class Transport {
public:
    virtual ~Transport() = default;
    virtual nlohmann::json send(const std::string& method, const nlohmann::json& params) = 0;
};

/// JSON-RPC 2.0 over HTTP. Request ids are unique per connection.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(const std::string& url,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30));
    ~HttpTransport() override;

    nlohmann::json send(const std::string& method, const nlohmann::json& params) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Deterministic playback of a recorded fixture chain. Serves
/// eth_blockNumber, eth_getBlockByNumber, eth_getTransactionReceipt,
/// eth_getLogs and eth_call.
///
/// Streaming playback: the first eth_blockNumber call reports the initial
/// head (`initialHead` when present, else the last block); every following
/// call advances the world one step — first raising the head until all
/// blocks are visible, then applying one scripted reorg per call.
class FixtureTransport : public Transport {
public:
    explicit FixtureTransport(nlohmann::json fixture);
    static std::unique_ptr<FixtureTransport> from_file(const std::string& path);

    nlohmann::json send(const std::string& method, const nlohmann::json& params) override;

private:
    nlohmann::json block_by_number(const nlohmann::json& params);
    nlohmann::json logs_for(const nlohmann::json& filter);

    std::vector<nlohmann::json> chain_; // current view, index = height
    nlohmann::json receipts_ = nlohmann::json::object();
    std::map<std::string, std::string> calls_; // "block|to|data" -> result
    std::deque<nlohmann::json> pendingReorgs_;
    std::uint64_t visibleHead_ = 0;
    bool headQueried_ = false;
};

struct RetryPolicy {
    unsigned maxRetries = 3;
    std::chrono::milliseconds baseBackoff{500};
};

/// Typed client over a transport: block fetching with receipt merging,
/// historical state calls, head queries. Transport errors are retried with
/// exponential backoff; RPC-level errors are not.
class NodeClient {
public:
    explicit NodeClient(std::shared_ptr<Transport> transport, RetryPolicy retry = {});

    std::uint64_t latest_block_number();

    /// Fully populated block: receipts fetched and merged so gasUsed,
    /// status and logs are set on every transaction.
    Block fetch_block(std::uint64_t number);

    /// Header and transaction bodies only; receipt-backed fields stay empty.
    Block fetch_block_shallow(std::uint64_t number);

    /// Fills receipt-backed fields of the given transactions (by tx hash).
    void merge_receipts(Block& block);
    void merge_receipt(Transaction& tx);

    Word32 block_hash_at(std::uint64_t number);

    /// Raw return data of a read-only contract call at a historical height.
    std::vector<std::uint8_t> call_contract(const Address& to,
                                            const std::vector<std::uint8_t>& calldata,
                                            std::uint64_t atBlock);

    /// eth_getLogs pre-filter for one block: transactions that carry at
    /// least one log matching any of the topic0s (and the address set, when
    /// non-empty).
    std::vector<Word32> transactions_with_logs(std::uint64_t block,
                                               const std::vector<Address>& addresses,
                                               const std::vector<Word32>& topic0s);

    nlohmann::json send_with_retry(const std::string& method, const nlohmann::json& params);

private:
    std::shared_ptr<Transport> transport_;
    RetryPolicy retry_;
};

/// Parses a JSON-RPC block object (with full transaction objects) into the
/// core model. Receipt-backed fields are left defaulted.
Block decode_block(const nlohmann::json& blockJson);

/// Applies a receipt object to the matching transaction.
void apply_receipt(Transaction& tx, const nlohmann::json& receiptJson);

} // namespace chainlog::rpc
