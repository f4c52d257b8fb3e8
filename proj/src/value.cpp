#include "chainlog/value.hpp"

#include <charconv>

namespace chainlog {

bool ValueType::operator==(const ValueType& other) const {
    if (kind != other.kind)
        return false;
    switch (kind) {
    case Kind::Uint:
    case Kind::Int:
    case Kind::FixedBytes:
        return width == other.width;
    case Kind::List:
        return element && other.element && *element == *other.element;
    default:
        return true;
    }
}

bool ValueType::widens_to(const ValueType& target) const {
    if (kind == Kind::Uint && target.kind == Kind::Uint)
        return width <= target.width;
    if (kind == Kind::Int && target.kind == Kind::Int)
        return width <= target.width;
    if (kind == Kind::FixedBytes && target.kind == Kind::Bytes)
        return true;
    if (kind == Kind::List && target.kind == Kind::List)
        return element && target.element && element->widens_to(*target.element);
    return *this == target;
}

bool ValueType::is_dynamic_abi() const {
    return kind == Kind::String || kind == Kind::Bytes || kind == Kind::List;
}

std::string ValueType::name() const {
    switch (kind) {
    case Kind::Uint:
        return "uint" + std::to_string(width);
    case Kind::Int:
        return "int" + std::to_string(width);
    case Kind::Address:
        return "address";
    case Kind::Bool:
        return "bool";
    case Kind::String:
        return "string";
    case Kind::Bytes:
        return "bytes";
    case Kind::FixedBytes:
        return "bytes" + std::to_string(width);
    case Kind::List:
        return element->name() + "[]";
    }
    return "?";
}

namespace {

std::optional<unsigned> parse_suffix_number(std::string_view s) {
    if (s.empty() || s.size() > 3)
        return std::nullopt;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

} // namespace

std::optional<ValueType> ValueType::parse(std::string_view name) {
    if (name.ends_with("[]")) {
        auto elem = parse(name.substr(0, name.size() - 2));
        if (!elem || elem->kind == Kind::List) // one-dimensional only
            return std::nullopt;
        return ValueType::list(*elem);
    }
    if (name == "address")
        return ValueType::address();
    if (name == "bool")
        return ValueType::boolean();
    if (name == "string")
        return ValueType::string();
    if (name == "bytes")
        return ValueType::bytes();
    if (name.starts_with("uint")) {
        auto n = parse_suffix_number(name.substr(4));
        if (n && *n >= 8 && *n <= 256 && *n % 8 == 0)
            return ValueType::uint_(*n);
        return std::nullopt;
    }
    if (name.starts_with("int")) {
        auto n = parse_suffix_number(name.substr(3));
        if (n && *n >= 8 && *n <= 256 && *n % 8 == 0)
            return ValueType::int_(*n);
        return std::nullopt;
    }
    if (name.starts_with("bytes")) {
        auto n = parse_suffix_number(name.substr(5));
        if (n && *n >= 1 && *n <= 32)
            return ValueType::fixed_bytes(*n);
        return std::nullopt;
    }
    return std::nullopt;
}

bool fits_numeric(const BigInt& v, const ValueType& t) {
    if (t.kind == ValueType::Kind::Uint) {
        if (v < 0)
            return false;
        return v == 0 || boost::multiprecision::msb(v) < t.width;
    }
    if (t.kind == ValueType::Kind::Int) {
        BigInt bound = BigInt(1) << (t.width - 1);
        return v >= -bound && v < bound;
    }
    return false;
}

Value Value::uint_(BigInt v, unsigned bits) {
    return Value(ValueType::uint_(bits), std::move(v));
}

Value Value::int_(BigInt v, unsigned bits) {
    return Value(ValueType::int_(bits), std::move(v));
}

Value Value::address(const Address& a) {
    return Value(ValueType::address(), a);
}

Value Value::boolean(bool b) {
    return Value(ValueType::boolean(), b);
}

Value Value::string(std::string s) {
    return Value(ValueType::string(), std::move(s));
}

Value Value::bytes(std::vector<std::uint8_t> b) {
    return Value(ValueType::bytes(), std::move(b));
}

Value Value::fixed_bytes(std::vector<std::uint8_t> b) {
    auto n = static_cast<unsigned>(b.size());
    return Value(ValueType::fixed_bytes(n), std::move(b));
}

Value Value::word(const Word32& w) {
    return fixed_bytes(std::vector<std::uint8_t>(w.begin(), w.end()));
}

Value Value::list(ValueType elementType, List elems) {
    return Value(ValueType::list(std::move(elementType)), std::move(elems));
}

const BigInt& Value::as_int() const {
    return std::get<BigInt>(data_);
}

const Address& Value::as_address() const {
    return std::get<Address>(data_);
}

bool Value::as_bool() const {
    return std::get<bool>(data_);
}

const std::string& Value::as_string() const {
    return std::get<std::string>(data_);
}

const std::vector<std::uint8_t>& Value::as_bytes() const {
    return std::get<std::vector<std::uint8_t>>(data_);
}

const Value::List& Value::as_list() const {
    return std::get<List>(data_);
}

std::string Value::render() const {
    switch (type_.kind) {
    case ValueType::Kind::Uint:
    case ValueType::Kind::Int:
        return as_int().str();
    case ValueType::Kind::Address:
        return render_address(as_address());
    case ValueType::Kind::Bool:
        return as_bool() ? "true" : "false";
    case ValueType::Kind::String:
        return as_string();
    case ValueType::Kind::Bytes:
    case ValueType::Kind::FixedBytes:
        return render_data(as_bytes());
    case ValueType::Kind::List: {
        std::string out = "[";
        const auto& elems = as_list();
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (i)
                out += ", ";
            out += elems[i].render();
        }
        out += "]";
        return out;
    }
    }
    return "?";
}

bool Value::operator==(const Value& other) const {
    return type_ == other.type_ && data_ == other.data_;
}

bool Value::less_than(const Value& other) const {
    if (type_.kind != other.type_.kind)
        return type_.kind < other.type_.kind;
    return data_ < other.data_;
}

} // namespace chainlog
