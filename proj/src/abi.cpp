#include "chainlog/abi.hpp"

#include <algorithm>

#include "chainlog/errors.hpp"
#include "chainlog/keccak.hpp"

namespace chainlog::abi {

namespace {

using Kind = ValueType::Kind;

const BigInt kWordModulus = BigInt(1) << 256;

void append_word(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& word) {
    out.insert(out.end(), word.begin(), word.end());
}

std::vector<std::uint8_t> uint_word(const BigInt& v) {
    return uint_to_bytes(v, 32);
}

/// Encodes one static value as exactly one 32-byte word.
std::vector<std::uint8_t> encode_static(const ValueType& type, const Value& v) {
    if (!v.type().widens_to(type))
        throw TypeMismatch("cannot encode " + v.type().name() + " as " + type.name());
    switch (type.kind) {
    case Kind::Uint: {
        if (!fits_numeric(v.as_int(), type))
            throw TypeMismatch(v.as_int().str() + " out of range for " + type.name());
        return uint_word(v.as_int());
    }
    case Kind::Int: {
        if (!fits_numeric(v.as_int(), type))
            throw TypeMismatch(v.as_int().str() + " out of range for " + type.name());
        BigInt x = v.as_int();
        if (x < 0)
            x += kWordModulus; // two's complement
        return uint_word(x);
    }
    case Kind::Address: {
        std::vector<std::uint8_t> word(32, 0);
        const auto& a = v.as_address();
        std::copy(a.begin(), a.end(), word.begin() + 12);
        return word;
    }
    case Kind::Bool:
        return uint_word(v.as_bool() ? 1 : 0);
    case Kind::FixedBytes: {
        std::vector<std::uint8_t> word(32, 0);
        const auto& b = v.as_bytes();
        if (b.size() != type.width)
            throw TypeMismatch("bytes" + std::to_string(type.width) + " value has " +
                               std::to_string(b.size()) + " bytes");
        std::copy(b.begin(), b.end(), word.begin()); // left-aligned
        return word;
    }
    default:
        throw TypeMismatch(type.name() + " is not a static type");
    }
}

std::vector<std::uint8_t> encode_dynamic(const ValueType& type, const Value& v) {
    if (!v.type().widens_to(type))
        throw TypeMismatch("cannot encode " + v.type().name() + " as " + type.name());
    std::vector<std::uint8_t> out;
    if (type.kind == Kind::String || type.kind == Kind::Bytes) {
        std::vector<std::uint8_t> payload;
        if (type.kind == Kind::String) {
            const auto& s = v.as_string();
            payload.assign(s.begin(), s.end());
        } else {
            payload = v.as_bytes();
        }
        append_word(out, uint_word(payload.size()));
        out.insert(out.end(), payload.begin(), payload.end());
        if (std::size_t pad = (32 - payload.size() % 32) % 32)
            out.insert(out.end(), pad, 0);
        return out;
    }
    if (type.kind == Kind::List) {
        const auto& elems = v.as_list();
        append_word(out, uint_word(elems.size()));
        std::vector<ValueType> elemTypes(elems.size(), *type.element);
        auto body = encode_tuple(elemTypes, elems);
        out.insert(out.end(), body.begin(), body.end());
        return out;
    }
    throw TypeMismatch(type.name() + " is not a dynamic type");
}

/// Bounds-checked big-endian word reader over the encoded blob.
struct Reader {
    const std::vector<std::uint8_t>& data;

    BigInt word_at(std::size_t offset) const {
        if (offset + 32 > data.size())
            throw DataUnderflow("need 32 bytes at offset " + std::to_string(offset) + ", have " +
                                std::to_string(data.size()));
        return bytes_to_uint(data.data() + offset, 32);
    }

    std::size_t offset_at(std::size_t pos) const {
        BigInt off = word_at(pos);
        if (off > data.size())
            throw OffsetOutOfBounds("offset " + off.str() + " past data end " +
                                    std::to_string(data.size()));
        return static_cast<std::size_t>(off);
    }

    std::size_t length_at(std::size_t pos) const {
        BigInt len = word_at(pos);
        if (len > data.size())
            throw DataUnderflow("declared length " + len.str() + " exceeds data size");
        return static_cast<std::size_t>(len);
    }
};

Value decode_static_word(const ValueType& type, const BigInt& word) {
    switch (type.kind) {
    case Kind::Uint: {
        BigInt v = word;
        if (type.width < 256)
            v &= (BigInt(1) << type.width) - 1;
        return Value::uint_(v, type.width);
    }
    case Kind::Int: {
        BigInt v = word;
        if (v >= (BigInt(1) << 255))
            v -= kWordModulus;
        return Value::int_(v, type.width);
    }
    case Kind::Address: {
        auto bytes = uint_to_bytes(word, 32);
        Address a{};
        std::copy(bytes.begin() + 12, bytes.end(), a.begin());
        return Value::address(a);
    }
    case Kind::Bool:
        return Value::boolean(word != 0);
    case Kind::FixedBytes: {
        auto bytes = uint_to_bytes(word, 32);
        bytes.resize(type.width);
        return Value::fixed_bytes(std::move(bytes));
    }
    default:
        throw TypeMismatch(type.name() + " is not a static type");
    }
}

/// Decodes a value whose head slot sits at `headPos`; dynamic offsets are
/// relative to `base`.
Value decode_value(const Reader& r, const ValueType& type, std::size_t base, std::size_t headPos) {
    if (!type.is_dynamic_abi())
        return decode_static_word(type, r.word_at(headPos));

    std::size_t tail = base + r.offset_at(headPos);
    if (tail > r.data.size())
        throw OffsetOutOfBounds("tail offset past data end");
    if (type.kind == Kind::String || type.kind == Kind::Bytes) {
        std::size_t len = r.length_at(tail);
        if (tail + 32 + len > r.data.size())
            throw DataUnderflow("payload of " + std::to_string(len) + " bytes does not fit");
        auto begin = r.data.begin() + static_cast<std::ptrdiff_t>(tail + 32);
        if (type.kind == Kind::String)
            return Value::string(std::string(begin, begin + static_cast<std::ptrdiff_t>(len)));
        return Value::bytes(std::vector<std::uint8_t>(begin, begin + static_cast<std::ptrdiff_t>(len)));
    }
    // dynamic array: count word, then an inner tuple of `count` elements
    std::size_t count = r.length_at(tail);
    std::size_t elemBase = tail + 32;
    Value::List elems;
    elems.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (elemBase + i * 32 + 32 > r.data.size())
            throw DataUnderflow("array element head out of bounds");
        elems.push_back(decode_value(r, *type.element, elemBase, elemBase + i * 32));
    }
    return Value::list(*type.element, std::move(elems));
}

} // namespace

bool is_supported_type(const ValueType& t) {
    switch (t.kind) {
    case Kind::Uint:
    case Kind::Int:
    case Kind::Address:
    case Kind::Bool:
    case Kind::FixedBytes:
    case Kind::Bytes:
    case Kind::String:
        return true;
    case Kind::List:
        return t.element && t.element->kind != Kind::List && is_supported_type(*t.element);
    }
    return false;
}

std::string EventSpec::canonical_signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i)
            sig += ",";
        sig += params[i].type.name();
    }
    return sig + ")";
}

std::size_t EventSpec::indexed_count() const {
    return static_cast<std::size_t>(
        std::count_if(params.begin(), params.end(), [](const EventParam& p) { return p.indexed; }));
}

std::string FunctionSpec::canonical_signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < paramTypes.size(); ++i) {
        if (i)
            sig += ",";
        sig += paramTypes[i].name();
    }
    return sig + ")";
}

std::array<std::uint8_t, 4> FunctionSpec::selector() const {
    Word32 digest = keccak256(canonical_signature());
    return {digest[0], digest[1], digest[2], digest[3]};
}

Word32 event_topic0(const EventSpec& spec) {
    return keccak256(spec.canonical_signature());
}

std::vector<std::uint8_t> encode_tuple(const std::vector<ValueType>& types,
                                       const std::vector<Value>& args) {
    if (types.size() != args.size())
        throw ArityMismatch("expected " + std::to_string(types.size()) + " values, got " +
                            std::to_string(args.size()));
    // every static type occupies exactly one head word here
    std::vector<std::vector<std::uint8_t>> heads(types.size()), tails(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (types[i].is_dynamic_abi())
            tails[i] = encode_dynamic(types[i], args[i]);
        else
            heads[i] = encode_static(types[i], args[i]);
    }
    std::size_t offset = types.size() * 32;
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (types[i].is_dynamic_abi()) {
            append_word(out, uint_word(offset));
            offset += tails[i].size();
        } else {
            append_word(out, heads[i]);
        }
    }
    for (const auto& tail : tails)
        out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

std::vector<Value> decode_return(const std::vector<std::uint8_t>& data,
                                 const std::vector<ValueType>& types) {
    Reader r{data};
    std::vector<Value> out;
    out.reserve(types.size());
    for (std::size_t i = 0; i < types.size(); ++i)
        out.push_back(decode_value(r, types[i], 0, i * 32));
    return out;
}

std::vector<std::uint8_t> encode_call(const FunctionSpec& spec, const std::vector<Value>& args) {
    if (args.size() != spec.paramTypes.size())
        throw ArityMismatch(spec.name + " takes " + std::to_string(spec.paramTypes.size()) +
                            " arguments, got " + std::to_string(args.size()));
    auto sel = spec.selector();
    std::vector<std::uint8_t> out(sel.begin(), sel.end());
    auto body = encode_tuple(spec.paramTypes, args);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::vector<DecodedParam> decode_log(const LogEntry& entry, const EventSpec& spec) {
    if (entry.topics.empty())
        throw TopicMismatch("log entry has no topics");
    Word32 expected = event_topic0(spec);
    if (entry.topics[0] != expected)
        throw TopicMismatch("topic0 does not match " + spec.canonical_signature());
    if (entry.topics.size() != 1 + spec.indexed_count())
        throw TopicMismatch("expected " + std::to_string(1 + spec.indexed_count()) + " topics, got " +
                            std::to_string(entry.topics.size()));

    // non-indexed parameters form a tuple in the data section
    std::vector<ValueType> dataTypes;
    for (const auto& p : spec.params)
        if (!p.indexed)
            dataTypes.push_back(p.type);
    Reader r{entry.data};
    std::vector<Value> dataValues;
    dataValues.reserve(dataTypes.size());
    for (std::size_t i = 0; i < dataTypes.size(); ++i)
        dataValues.push_back(decode_value(r, dataTypes[i], 0, i * 32));

    std::vector<DecodedParam> out;
    out.reserve(spec.params.size());
    std::size_t topicIdx = 1;
    std::size_t dataIdx = 0;
    for (const auto& p : spec.params) {
        if (p.indexed) {
            const Word32& t = entry.topics[topicIdx++];
            if (p.type.is_dynamic_abi()) {
                // protocol hashes indexed dynamic values; original unrecoverable
                out.push_back({p.name, Value::word(t), true});
            } else {
                out.push_back({p.name, decode_static_word(p.type, bytes_to_uint(t.data(), 32)), false});
            }
        } else {
            out.push_back({p.name, dataValues[dataIdx++], false});
        }
    }
    return out;
}

} // namespace chainlog::abi
