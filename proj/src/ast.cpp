#include "chainlog/ast.hpp"

#include <algorithm>

namespace chainlog::ast {

std::optional<Value> literal_value(const Expr& e, const ValueType& target) {
    if (const auto* lit = e.as<Expr::IntLit>()) {
        if (!target.is_numeric() || !fits_numeric(lit->value, target))
            return std::nullopt;
        return target.kind == ValueType::Kind::Uint ? Value::uint_(lit->value, target.width)
                                                    : Value::int_(lit->value, target.width);
    }
    if (const auto* lit = e.as<Expr::StringLit>())
        return target.kind == ValueType::Kind::String ? std::optional<Value>(Value::string(lit->value))
                                                      : std::nullopt;
    if (const auto* lit = e.as<Expr::BoolLit>())
        return target.kind == ValueType::Kind::Bool ? std::optional<Value>(Value::boolean(lit->value))
                                                    : std::nullopt;
    if (const auto* lit = e.as<Expr::HexLit>()) {
        switch (target.kind) {
        case ValueType::Kind::Address: {
            if (!lit->isAddress)
                return std::nullopt;
            Address a{};
            std::copy(lit->bytes.begin(), lit->bytes.end(), a.begin());
            return Value::address(a);
        }
        case ValueType::Kind::Bytes:
            return Value::bytes(lit->bytes);
        case ValueType::Kind::FixedBytes:
            if (lit->bytes.size() != target.width)
                return std::nullopt;
            return Value::fixed_bytes(lit->bytes);
        default:
            return std::nullopt;
        }
    }
    return std::nullopt;
}

const Span& Stmt::span() const {
    return std::visit([](const auto& n) -> const Span& { return n.span; }, node);
}

std::vector<const DictionarySpec*> Manifest::dictionaries() const {
    std::vector<const DictionarySpec*> out;
    for (const auto& item : items)
        if (const auto* d = std::get_if<DictionarySpec>(&item))
            out.push_back(d);
    return out;
}

std::vector<const BitMappingSpec*> Manifest::bitmappings() const {
    std::vector<const BitMappingSpec*> out;
    for (const auto& item : items)
        if (const auto* b = std::get_if<BitMappingSpec>(&item))
            out.push_back(b);
    return out;
}

std::vector<const OutputDecl*> Manifest::outputs() const {
    std::vector<const OutputDecl*> out;
    for (const auto& item : items)
        if (const auto* o = std::get_if<OutputDecl>(&item))
            out.push_back(o);
    return out;
}

const DictionarySpec* Manifest::find_dictionary(const std::string& name) const {
    for (const auto* d : dictionaries())
        if (d->name == name)
            return d;
    return nullptr;
}

const BitMappingSpec* Manifest::find_bitmapping(const std::string& name) const {
    for (const auto* b : bitmappings())
        if (b->name == name)
            return b;
    return nullptr;
}

} // namespace chainlog::ast
