#include <doctest.h>

#include <chainlog/abi.hpp>
#include <chainlog/errors.hpp>
#include <chainlog/keccak.hpp>

#include "support/abi_oracle.hpp"
#include "support/random_values.hpp"

using namespace chainlog;
using namespace chainlog::abi;

namespace {

Word32 pad_address(const Address& a) {
    Word32 w{};
    std::copy(a.begin(), a.end(), w.begin() + 12);
    return w;
}

EventSpec transfer_spec() {
    return EventSpec{"Transfer",
                     {{ValueType::address(), true, "from"},
                      {ValueType::address(), true, "to"},
                      {ValueType::uint_(256), false, "value"}}};
}

} // namespace

TEST_CASE("canonical signatures have no spaces and list parameter types") {
    CHECK(transfer_spec().canonical_signature() == "Transfer(address,address,uint256)");
    EventSpec empty{"A", {}};
    CHECK(empty.canonical_signature() == "A()");
    FunctionSpec f{"balanceOf", {ValueType::address()}, {ValueType::uint_(256)}};
    CHECK(f.canonical_signature() == "balanceOf(address)");
}

TEST_CASE("event_topic0 equals the keccak of the signature") {
    CHECK(render_word32(event_topic0(transfer_spec())) ==
          "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef");
    EventSpec a{"A", {}};
    CHECK(event_topic0(a) == keccak256("A()"));
    CHECK(event_topic0(a) == event_topic0(a));
}

TEST_CASE("decode_log handles the classic transfer layout") {
    Address from{}, to{};
    from[19] = 0xaa;
    to[19] = 0xbb;
    LogEntry entry;
    entry.topics = {event_topic0(transfer_spec()), pad_address(from), pad_address(to)};
    entry.data = std::vector<std::uint8_t>(32, 0);

    auto decoded = decode_log(entry, transfer_spec());
    REQUIRE(decoded.size() == 3);
    CHECK(decoded[0].name == "from");
    CHECK(decoded[0].value == Value::address(from));
    CHECK(decoded[1].value == Value::address(to));
    CHECK(decoded[2].name == "value");
    CHECK(decoded[2].value.as_int() == 0);
    CHECK_FALSE(decoded[2].hashed);
}

TEST_CASE("decode_log decodes a minimal nonzero word") {
    EventSpec spec{"E", {{ValueType::uint_(256), false, "v"}}};
    LogEntry entry;
    entry.topics = {event_topic0(spec)};
    entry.data = std::vector<std::uint8_t>(32, 0);
    entry.data[31] = 0x01;
    auto decoded = decode_log(entry, spec);
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0].value.as_int() == 1);
}

TEST_CASE("decode_log inverts the oracle encoding of a string parameter") {
    EventSpec spec{"E", {{ValueType::string(), false, "s"}}};
    LogEntry entry;
    entry.topics = {event_topic0(spec)};
    entry.data = testsupport::abi_encode_bytes({ValueType::string()}, {Value::string("ok")});
    auto decoded = decode_log(entry, spec);
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0].value == Value::string("ok"));
}

TEST_CASE("decode_log flags hashed indexed dynamic parameters") {
    EventSpec spec{"E", {{ValueType::string(), true, "s"}}};
    LogEntry entry;
    Word32 digest = keccak256("whatever");
    entry.topics = {event_topic0(spec), digest};
    auto decoded = decode_log(entry, spec);
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0].hashed);
    CHECK(decoded[0].value == Value::word(digest));
}

TEST_CASE("decode_log rejects mismatched topics") {
    LogEntry entry;
    entry.topics = {keccak256("Other(uint256)")};
    CHECK_THROWS_AS(decode_log(entry, transfer_spec()), TopicMismatch);

    LogEntry shortEntry;
    shortEntry.topics = {event_topic0(transfer_spec())}; // missing 2 indexed topics
    CHECK_THROWS_AS(decode_log(shortEntry, transfer_spec()), TopicMismatch);
}

TEST_CASE("encode_call layouts") {
    FunctionSpec owner{"owner", {}, {ValueType::address()}};
    auto data = encode_call(owner, {});
    CHECK(data.size() == 4);

    FunctionSpec balanceOf{"balanceOf", {ValueType::address()}, {ValueType::uint_(256)}};
    auto call = encode_call(balanceOf, {Value::address(Address{})});
    REQUIRE(call.size() == 36);
    for (std::size_t i = 4; i < 36; ++i)
        CHECK(call[i] == 0);

    CHECK_THROWS_AS(encode_call(balanceOf, {}), ArityMismatch);
    CHECK_THROWS_AS(encode_call(balanceOf, {Value::string("no")}), TypeMismatch);
}

TEST_CASE("decode_return basics") {
    std::vector<std::uint8_t> zeroWord(32, 0);
    auto decoded = decode_return(zeroWord, {ValueType::boolean()});
    REQUIRE(decoded.size() == 1);
    CHECK(decoded[0] == Value::boolean(false));

    std::vector<std::uint8_t> word2a(32, 0);
    word2a[31] = 0x2a;
    decoded = decode_return(word2a, {ValueType::uint_(8)});
    CHECK(decoded[0].as_int() == 42);

    CHECK_THROWS_AS(decode_return({}, {ValueType::uint_(256)}), DataUnderflow);
}

TEST_CASE("encode matches the oracle and decode inverts it") {
    testsupport::Rng rng(0x5eedabc1);
    for (int i = 0; i < 300; ++i) {
        std::size_t n = rng() % 4;
        std::vector<ValueType> types;
        std::vector<Value> values;
        for (std::size_t j = 0; j < n; ++j) {
            types.push_back(testsupport::random_abi_type(rng));
            values.push_back(testsupport::random_value_of(rng, types.back()));
        }
        auto produced = encode_tuple(types, values);
        auto expected = testsupport::abi_encode_bytes(types, values);
        CHECK(produced == expected);

        auto decoded = decode_return(produced, types);
        REQUIRE(decoded.size() == values.size());
        for (std::size_t j = 0; j < n; ++j) {
            // decoding widens integers to the declared width's nominal type
            CHECK(decoded[j].render() == values[j].render());
        }
    }
}

TEST_CASE("truncated data errors instead of crashing") {
    testsupport::Rng rng(0x5eedabc2);
    for (int i = 0; i < 200; ++i) {
        std::vector<ValueType> types{testsupport::random_abi_type(rng)};
        std::vector<Value> values{testsupport::random_value_of(rng, types[0])};
        auto full = encode_tuple(types, values);
        if (full.empty())
            continue;
        std::size_t cut = rng() % full.size();
        std::vector<std::uint8_t> truncated(full.begin(), full.begin() + static_cast<long>(cut));
        try {
            auto out = decode_return(truncated, types);
            // short static reads can still succeed only when nothing was cut
            CHECK(cut >= 32 * types.size());
        } catch (const DataUnderflow&) {
        } catch (const OffsetOutOfBounds&) {
        }
    }
}
