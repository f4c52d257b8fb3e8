#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chainlog/hex.hpp"

namespace chainlog {

/// The dynamic type universe for attribute and variable values.
///
/// Uint/Int carry a bit width in {8,16,...,256}; FixedBytes a byte width in
/// [1,32]; List an element type. Values of narrower integer types widen
/// implicitly within their signedness class, never across it.
struct ValueType {
    enum class Kind { Uint, Int, Address, Bool, String, Bytes, FixedBytes, List };

    Kind kind = Kind::Uint;
    unsigned width = 256; // bits for Uint/Int, bytes for FixedBytes, unused otherwise
    std::shared_ptr<ValueType> element; // List only

    static ValueType uint_(unsigned bits = 256) { return {Kind::Uint, bits, nullptr}; }
    static ValueType int_(unsigned bits = 256) { return {Kind::Int, bits, nullptr}; }
    static ValueType address() { return {Kind::Address, 0, nullptr}; }
    static ValueType boolean() { return {Kind::Bool, 0, nullptr}; }
    static ValueType string() { return {Kind::String, 0, nullptr}; }
    static ValueType bytes() { return {Kind::Bytes, 0, nullptr}; }
    static ValueType fixed_bytes(unsigned n) { return {Kind::FixedBytes, n, nullptr}; }
    static ValueType list(ValueType elem) {
        return {Kind::List, 0, std::make_shared<ValueType>(std::move(elem))};
    }

    bool operator==(const ValueType& other) const;
    bool operator!=(const ValueType& other) const { return !(*this == other); }

    /// True when a value of this type can be used where `target` is expected
    /// (reflexive; uintN ⊑ uintM and intN ⊑ intM for N ≤ M; bytesK ⊑ bytes;
    /// element-wise for lists).
    bool widens_to(const ValueType& target) const;

    bool is_numeric() const { return kind == Kind::Uint || kind == Kind::Int; }
    bool is_dynamic_abi() const; // string, bytes, or list

    /// Canonical name: uint256, int8, address, bool, string, bytes, bytes32,
    /// uint256[] ...
    std::string name() const;

    /// Parses a canonical type name; nullopt when not a valid type.
    static std::optional<ValueType> parse(std::string_view name);
};

/// A dynamically typed immutable value.
class Value {
public:
    using List = std::vector<Value>;

    Value() : type_(ValueType::uint_()), data_(BigInt(0)) {}

    static Value uint_(BigInt v, unsigned bits = 256);
    static Value int_(BigInt v, unsigned bits = 256);
    static Value address(const Address& a);
    static Value boolean(bool b);
    static Value string(std::string s);
    static Value bytes(std::vector<std::uint8_t> b);
    static Value fixed_bytes(std::vector<std::uint8_t> b); // width = b.size()
    static Value word(const Word32& w);                    // bytes32
    static Value list(ValueType elementType, List elems);

    const ValueType& type() const { return type_; }

    const BigInt& as_int() const;
    const Address& as_address() const;
    bool as_bool() const;
    const std::string& as_string() const;
    const std::vector<std::uint8_t>& as_bytes() const;
    const List& as_list() const;

    /// Canonical rendering: integers in decimal, addresses/bytes as 0x-hex
    /// lowercase, booleans as true/false, strings verbatim, lists as
    /// [a, b, ...].
    std::string render() const;

    /// Deep structural equality (type and payload).
    bool operator==(const Value& other) const;
    bool operator!=(const Value& other) const { return !(*this == other); }

    /// Ordering for use as a map key; total over all values.
    bool less_than(const Value& other) const;
    bool operator<(const Value& other) const { return less_than(other); }

private:
    Value(ValueType t, std::variant<BigInt, Address, bool, std::string, std::vector<std::uint8_t>, List> d)
        : type_(std::move(t)), data_(std::move(d)) {}

    ValueType type_;
    std::variant<BigInt, Address, bool, std::string, std::vector<std::uint8_t>, List> data_;
};

/// Range check: does v fit the numeric type `t`?
bool fits_numeric(const BigInt& v, const ValueType& t);

struct ValueKeyLess {
    bool operator()(const Value& a, const Value& b) const { return a.less_than(b); }
};

} // namespace chainlog
