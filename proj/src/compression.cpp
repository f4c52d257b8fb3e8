#include "chainlog/compression.hpp"

#include "chainlog/errors.hpp"

namespace chainlog {

BigInt ValueDictionary::encode(const Value& source) const {
    for (const auto& [value, code] : entries)
        if (value == source)
            return code;
    if (defaultEntry)
        return defaultEntry->second;
    throw UnknownSource("dictionary '" + name + "' has no code for " + source.render());
}

Value ValueDictionary::decode(const BigInt& code) const {
    for (const auto& [value, entryCode] : entries)
        if (entryCode == code)
            return value;
    if (defaultEntry)
        return defaultEntry->first;
    throw UnknownCode("dictionary '" + name + "' has no entry for code " + code.str());
}

ValueDictionary ValueDictionary::from_ast(const ast::DictionarySpec& spec) {
    ValueDictionary dict;
    dict.name = spec.name;
    dict.sourceType = spec.sourceType;
    dict.codeType = spec.codeType;
    auto convert = [&](const ast::DictEntry& entry) -> std::pair<Value, BigInt> {
        auto source = ast::literal_value(entry.source, spec.sourceType);
        auto code = ast::literal_value(entry.code, spec.codeType);
        if (!source || !code)
            throw Error("dictionary '" + spec.name + "' has entries that do not fit its types");
        return {*source, code->as_int()};
    };
    for (const auto& entry : spec.entries)
        dict.entries.push_back(convert(entry));
    if (spec.defaultEntry)
        dict.defaultEntry = convert(*spec.defaultEntry);
    return dict;
}

BigInt BitMapping::encode(const std::map<std::string, BigInt>& values) const {
    BigInt out = 0;
    for (const auto& field : fields) {
        auto it = values.find(field.name);
        if (it == values.end())
            throw MissingField("bit mapping '" + name + "' needs field '" + field.name + "'");
        const BigInt& v = it->second;
        if (v < 0 || v >= (BigInt(1) << field.bitLength))
            throw FieldOutOfRange("field '" + field.name + "' value " + v.str() +
                                  " does not fit " + std::to_string(field.bitLength) + " bits");
        out |= v << field.fromBit;
    }
    return out;
}

std::map<std::string, BigInt> BitMapping::decode_raw(const BigInt& encoded) const {
    std::map<std::string, BigInt> out;
    for (const auto& field : fields) {
        BigInt mask = (BigInt(1) << field.bitLength) - 1;
        out[field.name] = (encoded >> field.fromBit) & mask;
    }
    return out;
}

unsigned BitMapping::payload_bits() const {
    unsigned highest = 0;
    for (const auto& field : fields)
        highest = std::max(highest, field.fromBit + field.bitLength);
    return highest;
}

const BitMapping::Field* BitMapping::find_field(const std::string& fieldName) const {
    for (const auto& field : fields)
        if (field.name == fieldName)
            return &field;
    return nullptr;
}

BitMapping BitMapping::from_ast(const ast::BitMappingSpec& spec) {
    BitMapping map;
    map.name = spec.name;
    for (const auto& field : spec.fields)
        map.fields.push_back(Field{field.name, field.fromBit, field.bitLength, field.viaDict});
    return map;
}

std::map<std::string, Value> decode_fields(const BitMapping& mapping, const BigInt& encoded,
                                           const DictionaryLookup& dictionaries) {
    std::map<std::string, Value> out;
    for (const auto& [name, raw] : mapping.decode_raw(encoded)) {
        const BitMapping::Field* field = mapping.find_field(name);
        if (field->viaDict) {
            const ValueDictionary* dict = dictionaries(*field->viaDict);
            if (!dict)
                throw Error("bit mapping '" + mapping.name + "' references unknown dictionary '" +
                            *field->viaDict + "'");
            out.emplace(name, dict->decode(raw));
        } else {
            out.emplace(name, Value::uint_(raw));
        }
    }
    return out;
}

unsigned abi_word_count(const ValueType& t) {
    return t.is_dynamic_abi() ? 3 : 1;
}

} // namespace chainlog
