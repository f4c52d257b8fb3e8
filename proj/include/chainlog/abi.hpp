#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chainlog/chain.hpp"
#include "chainlog/value.hpp"

namespace chainlog::abi {

struct EventParam {
    ValueType type;
    bool indexed = false;
    std::string name;
};

struct EventSpec {
    std::string name;
    std::vector<EventParam> params;

    /// name + "(" + comma-joined canonical type names + ")", no spaces.
    std::string canonical_signature() const;
    std::size_t indexed_count() const;
};

struct FunctionSpec {
    std::string name;
    std::vector<ValueType> paramTypes;
    std::vector<ValueType> returnTypes;

    std::string canonical_signature() const;
    std::array<std::uint8_t, 4> selector() const;
};

/// keccak-256 of the canonical event signature (topic 0 of non-anonymous
/// events).
Word32 event_topic0(const EventSpec& spec);

struct DecodedParam {
    std::string name;
    Value value;
    bool hashed = false; // indexed dynamic types yield their 32-byte hash
};

/// Decodes a log entry against an event spec. Indexed parameters come from
/// topics[1..] in declaration order; the rest from the data section per the
/// standard head/tail layout. Results are in full declaration order.
std::vector<DecodedParam> decode_log(const LogEntry& entry, const EventSpec& spec);

/// selector ++ standard ABI encoding of the arguments.
std::vector<std::uint8_t> encode_call(const FunctionSpec& spec, const std::vector<Value>& args);

std::vector<Value> decode_return(const std::vector<std::uint8_t>& data,
                                 const std::vector<ValueType>& types);

/// Standard tuple encoding (32-byte words, head/tail layout for dynamic
/// types). Exposed for reuse and testing.
std::vector<std::uint8_t> encode_tuple(const std::vector<ValueType>& types,
                                       const std::vector<Value>& args);

/// True for the type set this codec supports: uintN, intN, address, bool,
/// bytesN, bytes, string, and one-dimensional arrays of those.
bool is_supported_type(const ValueType& t);

} // namespace chainlog::abi
