#include "chainlog/rpc.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "chainlog/errors.hpp"

namespace chainlog::rpc {

using nlohmann::json;

namespace {

std::uint64_t to_u64(const BigInt& v, const char* what) {
    if (v < 0 || v > BigInt(UINT64_MAX))
        throw DecodeError(std::string(what) + " out of uint64 range: " + v.str());
    return v.convert_to<std::uint64_t>();
}

std::string require_string(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_string())
        throw DecodeError(std::string("missing or non-string field '") + key + "'");
    return obj.at(key).get<std::string>();
}

std::uint64_t quantity_u64(const json& obj, const char* key) {
    return to_u64(parse_quantity(require_string(obj, key)), key);
}

BigInt quantity_big(const json& obj, const char* key) {
    return parse_quantity(require_string(obj, key));
}

} // namespace

// ---- decoding --------------------------------------------------------------

Block decode_block(const json& blockJson) {
    if (!blockJson.is_object())
        throw DecodeError("block payload is not an object");
    Block b;
    b.number = quantity_u64(blockJson, "number");
    b.hash = parse_word32(require_string(blockJson, "hash"));
    b.parentHash = parse_word32(require_string(blockJson, "parentHash"));
    b.timestamp = quantity_u64(blockJson, "timestamp");
    b.miner = normalize_address(require_string(blockJson, "miner"));
    b.difficulty = quantity_big(blockJson, "difficulty");
    b.gasUsed = quantity_big(blockJson, "gasUsed");
    b.gasLimit = quantity_big(blockJson, "gasLimit");
    if (blockJson.contains("transactions")) {
        for (const auto& txJson : blockJson.at("transactions")) {
            if (!txJson.is_object())
                throw DecodeError("expected full transaction objects in block " +
                                  std::to_string(b.number));
            Transaction tx;
            tx.hash = parse_word32(require_string(txJson, "hash"));
            tx.blockNumber = b.number;
            tx.index = quantity_u64(txJson, "transactionIndex");
            tx.from = normalize_address(require_string(txJson, "from"));
            if (txJson.contains("to") && !txJson.at("to").is_null())
                tx.to = normalize_address(txJson.at("to").get<std::string>());
            tx.value = quantity_big(txJson, "value");
            tx.gasPrice = quantity_big(txJson, "gasPrice");
            b.transactions.push_back(std::move(tx));
        }
    }
    return b;
}

void apply_receipt(Transaction& tx, const json& receiptJson) {
    if (!receiptJson.is_object())
        throw DecodeError("receipt payload is not an object");
    tx.gasUsed = quantity_big(receiptJson, "gasUsed");
    tx.status = parse_quantity(require_string(receiptJson, "status")) != 0;
    tx.logs.clear();
    if (receiptJson.contains("logs")) {
        for (const auto& logJson : receiptJson.at("logs")) {
            LogEntry entry;
            entry.address = normalize_address(require_string(logJson, "address"));
            for (const auto& topic : logJson.at("topics"))
                entry.topics.push_back(parse_word32(topic.get<std::string>()));
            if (entry.topics.size() > 4)
                throw DecodeError("log entry with more than 4 topics");
            entry.data = parse_data(require_string(logJson, "data"));
            entry.logIndex = quantity_u64(logJson, "logIndex");
            entry.transactionHash = parse_word32(require_string(logJson, "transactionHash"));
            tx.logs.push_back(std::move(entry));
        }
    }
}

// ---- HTTP transport ----------------------------------------------------------

struct HttpTransport::Impl {
    std::string base;
    std::string path = "/";
    httplib::Client client;
    std::uint64_t nextId = 1;

    Impl(const std::string& url, std::chrono::milliseconds timeout)
        : base(strip_path(url)), client(base) {
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
        client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    }

    std::string strip_path(const std::string& url) {
        auto schemeEnd = url.find("://");
        auto pathStart = url.find('/', schemeEnd == std::string::npos ? 0 : schemeEnd + 3);
        if (pathStart == std::string::npos)
            return url;
        path = url.substr(pathStart);
        return url.substr(0, pathStart);
    }
};

HttpTransport::HttpTransport(const std::string& url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(url, timeout)) {}

HttpTransport::~HttpTransport() = default;

json HttpTransport::send(const std::string& method, const json& params) {
    json request = {
        {"jsonrpc", "2.0"},
        {"id", impl_->nextId++},
        {"method", method},
        {"params", params},
    };
    auto result = impl_->client.Post(impl_->path, request.dump(), "application/json");
    if (!result)
        throw TransportError("request to " + impl_->base + " failed: " +
                             httplib::to_string(result.error()));
    if (result->status != 200)
        throw TransportError("node returned HTTP " + std::to_string(result->status));
    json response = json::parse(result->body, nullptr, false);
    if (response.is_discarded())
        throw TransportError("node returned unparseable JSON");
    if (response.contains("error")) {
        const auto& err = response.at("error");
        throw RpcError(err.value("code", 0), err.value("message", "unknown RPC error"));
    }
    if (!response.contains("result"))
        throw TransportError("response lacks both result and error");
    return response.at("result");
}

// ---- fixture transport ---------------------------------------------------------

FixtureTransport::FixtureTransport(json fixture) {
    if (!fixture.is_object() || !fixture.contains("blocks"))
        throw DecodeError("fixture must be an object with a 'blocks' array");
    for (const auto& block : fixture.at("blocks"))
        chain_.push_back(block);
    if (chain_.empty())
        throw DecodeError("fixture has no blocks");
    if (fixture.contains("receipts"))
        receipts_ = fixture.at("receipts");
    if (fixture.contains("calls")) {
        for (const auto& call : fixture.at("calls")) {
            std::string key = call.at("block").get<std::string>() + "|" +
                              call.at("to").get<std::string>() + "|" +
                              call.at("data").get<std::string>();
            calls_[key] = call.at("result").get<std::string>();
        }
    }
    if (fixture.contains("reorgs"))
        for (const auto& reorg : fixture.at("reorgs"))
            pendingReorgs_.push_back(reorg);
    visibleHead_ = fixture.contains("initialHead")
                       ? fixture.at("initialHead").get<std::uint64_t>()
                       : chain_.size() - 1;
    if (visibleHead_ >= chain_.size())
        throw DecodeError("initialHead past the end of the chain");
}

std::unique_ptr<FixtureTransport> FixtureTransport::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw TransportError("cannot open fixture file " + path);
    json fixture = json::parse(in, nullptr, false);
    if (fixture.is_discarded())
        throw DecodeError("fixture file " + path + " is not valid JSON");
    return std::make_unique<FixtureTransport>(std::move(fixture));
}

json FixtureTransport::block_by_number(const json& params) {
    std::string spec = params.at(0).get<std::string>();
    std::uint64_t number =
        spec == "latest" ? visibleHead_ : to_u64(parse_quantity(spec), "block number");
    if (number > visibleHead_)
        return nullptr;
    return chain_.at(number);
}

json FixtureTransport::logs_for(const json& filter) {
    std::uint64_t from = to_u64(parse_quantity(filter.at("fromBlock").get<std::string>()), "fromBlock");
    std::uint64_t to = to_u64(parse_quantity(filter.at("toBlock").get<std::string>()), "toBlock");
    std::vector<std::string> addresses;
    if (filter.contains("address")) {
        if (filter.at("address").is_string())
            addresses.push_back(filter.at("address").get<std::string>());
        else
            for (const auto& a : filter.at("address"))
                addresses.push_back(a.get<std::string>());
    }
    std::vector<std::string> topic0s;
    if (filter.contains("topics") && !filter.at("topics").empty()) {
        const auto& first = filter.at("topics").at(0);
        if (first.is_string())
            topic0s.push_back(first.get<std::string>());
        else if (first.is_array())
            for (const auto& t : first)
                topic0s.push_back(t.get<std::string>());
    }

    json out = json::array();
    for (std::uint64_t n = from; n <= to && n <= visibleHead_; ++n) {
        for (const auto& txJson : chain_.at(n).at("transactions")) {
            std::string txHash = txJson.at("hash").get<std::string>();
            if (!receipts_.contains(txHash))
                continue;
            for (const auto& logJson : receipts_.at(txHash).at("logs")) {
                if (!addresses.empty()) {
                    std::string addr = logJson.at("address").get<std::string>();
                    if (std::find(addresses.begin(), addresses.end(), addr) == addresses.end())
                        continue;
                }
                if (!topic0s.empty()) {
                    const auto& topics = logJson.at("topics");
                    if (topics.empty())
                        continue;
                    std::string t0 = topics.at(0).get<std::string>();
                    if (std::find(topic0s.begin(), topic0s.end(), t0) == topic0s.end())
                        continue;
                }
                out.push_back(logJson);
            }
        }
    }
    return out;
}

json FixtureTransport::send(const std::string& method, const json& params) {
    if (method == "eth_blockNumber") {
        if (!headQueried_) {
            headQueried_ = true;
        } else if (visibleHead_ + 1 < chain_.size()) {
            ++visibleHead_;
        } else if (!pendingReorgs_.empty()) {
            const json& reorg = pendingReorgs_.front();
            auto height = reorg.at("atHeight").get<std::uint64_t>();
            if (height >= chain_.size())
                throw DecodeError("reorg height past the end of the chain");
            chain_.at(height) = reorg.at("block");
            if (reorg.contains("receipts"))
                receipts_.update(reorg.at("receipts"));
            pendingReorgs_.pop_front();
        }
        return render_quantity(BigInt(visibleHead_));
    }
    if (method == "eth_getBlockByNumber")
        return block_by_number(params);
    if (method == "eth_getTransactionReceipt") {
        std::string hash = params.at(0).get<std::string>();
        if (!receipts_.contains(hash))
            return nullptr;
        return receipts_.at(hash);
    }
    if (method == "eth_getLogs")
        return logs_for(params.at(0));
    if (method == "eth_call") {
        const auto& call = params.at(0);
        std::string key = params.at(1).get<std::string>() + "|" +
                          call.at("to").get<std::string>() + "|" + call.at("data").get<std::string>();
        auto it = calls_.find(key);
        if (it == calls_.end())
            throw RpcError(3, "execution reverted");
        return it->second;
    }
    throw RpcError(-32601, "method not found: " + method);
}

// ---- client ---------------------------------------------------------------------

NodeClient::NodeClient(std::shared_ptr<Transport> transport, RetryPolicy retry)
    : transport_(std::move(transport)), retry_(retry) {}

json NodeClient::send_with_retry(const std::string& method, const json& params) {
    unsigned attempt = 0;
    while (true) {
        try {
            return transport_->send(method, params);
        } catch (const TransportError&) {
            if (attempt >= retry_.maxRetries)
                throw;
            auto backoff = retry_.baseBackoff * (1u << attempt);
            std::this_thread::sleep_for(backoff);
            ++attempt;
        }
    }
}

std::uint64_t NodeClient::latest_block_number() {
    json result = send_with_retry("eth_blockNumber", json::array());
    if (!result.is_string())
        throw DecodeError("eth_blockNumber returned a non-string");
    return to_u64(parse_quantity(result.get<std::string>()), "head");
}

Block NodeClient::fetch_block_shallow(std::uint64_t number) {
    json result = send_with_retry("eth_getBlockByNumber",
                                  json::array({render_quantity(BigInt(number)), true}));
    if (result.is_null())
        throw BlockNotFound("block " + std::to_string(number) + " not found");
    Block b = decode_block(result);
    if (b.number != number)
        throw DecodeError("node returned block " + std::to_string(b.number) + " for " +
                          std::to_string(number));
    return b;
}

void NodeClient::merge_receipt(Transaction& tx) {
    json receipt = send_with_retry("eth_getTransactionReceipt",
                                   json::array({render_word32(tx.hash)}));
    if (receipt.is_null())
        throw DecodeError("missing receipt for transaction " + render_word32(tx.hash));
    apply_receipt(tx, receipt);
}

void NodeClient::merge_receipts(Block& block) {
    for (auto& tx : block.transactions)
        merge_receipt(tx);
}

Block NodeClient::fetch_block(std::uint64_t number) {
    Block b = fetch_block_shallow(number);
    merge_receipts(b);
    check_block_invariants(b);
    return b;
}

Word32 NodeClient::block_hash_at(std::uint64_t number) {
    json result = send_with_retry("eth_getBlockByNumber",
                                  json::array({render_quantity(BigInt(number)), false}));
    if (result.is_null())
        throw BlockNotFound("block " + std::to_string(number) + " not found");
    return parse_word32(require_string(result, "hash"));
}

std::vector<std::uint8_t> NodeClient::call_contract(const Address& to,
                                                    const std::vector<std::uint8_t>& calldata,
                                                    std::uint64_t atBlock) {
    json callObj = {{"to", render_address(to)}, {"data", render_data(calldata)}};
    try {
        json result = send_with_retry("eth_call",
                                      json::array({callObj, render_quantity(BigInt(atBlock))}));
        if (!result.is_string())
            throw DecodeError("eth_call returned a non-string");
        return parse_data(result.get<std::string>());
    } catch (const RpcError& e) {
        throw CallReverted("call to " + render_address(to) + " at block " +
                           std::to_string(atBlock) + " reverted: " + e.what());
    }
}

std::vector<Word32> NodeClient::transactions_with_logs(std::uint64_t block,
                                                       const std::vector<Address>& addresses,
                                                       const std::vector<Word32>& topic0s) {
    json filter = {
        {"fromBlock", render_quantity(BigInt(block))},
        {"toBlock", render_quantity(BigInt(block))},
    };
    if (!addresses.empty()) {
        json arr = json::array();
        for (const auto& a : addresses)
            arr.push_back(render_address(a));
        filter["address"] = arr;
    }
    if (!topic0s.empty()) {
        json t0 = json::array();
        for (const auto& t : topic0s)
            t0.push_back(render_word32(t));
        filter["topics"] = json::array({t0});
    }
    json result = send_with_retry("eth_getLogs", json::array({filter}));
    std::vector<Word32> out;
    for (const auto& logJson : result) {
        Word32 txHash = parse_word32(require_string(logJson, "transactionHash"));
        if (std::find(out.begin(), out.end(), txHash) == out.end())
            out.push_back(txHash);
    }
    return out;
}

} // namespace chainlog::rpc
