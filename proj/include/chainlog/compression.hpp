#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlog/ast.hpp"
#include "chainlog/value.hpp"

namespace chainlog {

/// Bidirectional source-value <-> small-code table. The optional default is
/// a (marker source value, fallback code) pair: encoding an unmapped source
/// yields the fallback code, decoding an unmapped code yields the marker.
struct ValueDictionary {
    std::string name;
    ValueType sourceType{ValueType::string()};
    ValueType codeType{ValueType::uint_(8)};
    std::vector<std::pair<Value, BigInt>> entries;
    std::optional<std::pair<Value, BigInt>> defaultEntry;

    /// Throws UnknownSource when the value is unmapped and no default exists.
    BigInt encode(const Value& source) const;
    /// Throws UnknownCode when the code is unmapped and no default exists.
    Value decode(const BigInt& code) const;

    // assumes the spec passed validation
    static ValueDictionary from_ast(const ast::DictionarySpec& spec);
};

/// Disjoint bit ranges packed into one unsigned word. Fields marked `via`
/// hold dictionary codes; decode_fields resolves them back to source values.
struct BitMapping {
    struct Field {
        std::string name;
        unsigned fromBit = 0;
        unsigned bitLength = 0;
        std::optional<std::string> viaDict;
    };

    std::string name;
    std::vector<Field> fields;

    /// Sum of (value << fromBit) over all fields. Values must already be
    /// dictionary codes where applicable. Throws MissingField /
    /// FieldOutOfRange.
    BigInt encode(const std::map<std::string, BigInt>& values) const;

    /// Raw field values: (encoded >> fromBit) mod 2^bitLength.
    std::map<std::string, BigInt> decode_raw(const BigInt& encoded) const;

    /// Highest used bit position (max fromBit + bitLength).
    unsigned payload_bits() const;

    const Field* find_field(const std::string& name) const;

    static BitMapping from_ast(const ast::BitMappingSpec& spec);
};

using DictionaryLookup = std::function<const ValueDictionary*(const std::string&)>;

/// Decodes every field of `encoded`, running `via` fields through their
/// dictionaries.
std::map<std::string, Value> decode_fields(const BitMapping& mapping, const BigInt& encoded,
                                           const DictionaryLookup& dictionaries);

/// 32-byte words needed for an ABI-encoded log payload of this type:
/// one word for value types, three for dynamic types (offset, length, data).
unsigned abi_word_count(const ValueType& t);

} // namespace chainlog
