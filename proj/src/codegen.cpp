#include "chainlog/codegen.hpp"

#include <cctype>

#include "chainlog/errors.hpp"

namespace chainlog {

namespace {

std::string solidity_type(const ValueType& t, bool memoryLocation) {
    std::string base = t.name();
    if (t.kind == ValueType::Kind::String || t.kind == ValueType::Kind::Bytes ||
        t.kind == ValueType::Kind::List)
        return memoryLocation ? base + " memory" : base;
    return base;
}

std::string solidity_literal(const Value& v) {
    switch (v.type().kind) {
    case ValueType::Kind::Uint:
    case ValueType::Kind::Int:
        return v.as_int().str();
    case ValueType::Kind::Bool:
        return v.as_bool() ? "true" : "false";
    case ValueType::Kind::String: {
        std::string out = "\"";
        for (char c : v.as_string()) {
            if (c == '"' || c == '\\')
                out.push_back('\\');
            out.push_back(c);
        }
        return out + "\"";
    }
    case ValueType::Kind::Address:
        return "address(" + v.render() + ")";
    default:
        return v.render(); // hex form for bytes
    }
}

// string comparisons go through keccak in the generated code
std::string comparison(const ValueType& sourceType, const std::string& var, const Value& v) {
    if (sourceType.kind == ValueType::Kind::String)
        return "keccak256(bytes(" + var + ")) == keccak256(bytes(" + solidity_literal(v) + "))";
    return var + " == " + solidity_literal(v);
}

} // namespace

std::string fragment_function_name(const std::string& prefix, const std::string& specName) {
    std::string suffix = specName;
    if (!suffix.empty())
        suffix[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(suffix[0])));
    return prefix + suffix;
}

std::string generate_fragment(const ValueDictionary& dict, const std::string& eventName) {
    const std::string codeType = solidity_type(dict.codeType, false);
    const std::string paramType = solidity_type(dict.sourceType, true);
    const std::string encodeFn = fragment_function_name("encode", dict.name);
    const std::string logFn = fragment_function_name("log", dict.name);

    std::string out;
    out += "// Logging helpers for value dictionary '" + dict.name + "' (" +
           dict.sourceType.name() + " -> " + dict.codeType.name() + ").\n";
    out += "event " + eventName + "(" + codeType + " value);\n";
    out += "\n";
    out += "function " + encodeFn + "(" + paramType + " value) internal pure returns (" + codeType +
           ") {\n";
    for (const auto& [source, code] : dict.entries)
        out += "    if (" + comparison(dict.sourceType, "value", source) + ") return " + code.str() +
               ";\n";
    if (dict.defaultEntry)
        out += "    return " + dict.defaultEntry->second.str() + ";\n";
    else
        out += "    revert(\"" + dict.name + ": unmapped value\");\n";
    out += "}\n";
    out += "\n";
    out += "function " + logFn + "(" + paramType + " value) internal {\n";
    out += "    emit " + eventName + "(" + encodeFn + "(value));\n";
    out += "}\n";
    return out;
}

std::string generate_fragment(const BitMapping& mapping, const std::string& eventName,
                              const DictionaryLookup& dictionaries) {
    const std::string encodeFn = fragment_function_name("encode", mapping.name);
    const std::string logFn = fragment_function_name("log", mapping.name);

    std::string params;
    std::string passThrough;
    for (std::size_t i = 0; i < mapping.fields.size(); ++i) {
        const auto& field = mapping.fields[i];
        if (i) {
            params += ", ";
            passThrough += ", ";
        }
        std::string paramType = "uint256";
        if (field.viaDict) {
            const ValueDictionary* dict = dictionaries ? dictionaries(*field.viaDict) : nullptr;
            if (!dict)
                throw Error("bit mapping '" + mapping.name + "' references unknown dictionary '" +
                            *field.viaDict + "'");
            paramType = solidity_type(dict->sourceType, true);
        }
        params += paramType + " " + field.name;
        passThrough += field.name;
    }

    std::string out;
    out += "// Logging helpers for bit mapping '" + mapping.name + "' (" +
           std::to_string(mapping.payload_bits()) + " payload bits).\n";
    out += "event " + eventName + "(uint256 packed);\n";
    out += "\n";
    out += "function " + encodeFn + "(" + params + ") internal pure returns (uint256) {\n";
    std::string expr;
    for (std::size_t i = 0; i < mapping.fields.size(); ++i) {
        const auto& field = mapping.fields[i];
        std::string term = field.name;
        if (field.viaDict) {
            // dictionary codes fit the range by construction
            std::string codeVar = field.name + "Code";
            out += "    uint256 " + codeVar + " = uint256(" +
                   fragment_function_name("encode", *field.viaDict) + "(" + field.name + "));\n";
            term = codeVar;
        } else {
            BigInt cap = BigInt(1) << field.bitLength;
            out += "    require(" + field.name + " < " + cap.str() + ", \"" + field.name +
                   " out of range\");\n";
        }
        if (i)
            expr += " | ";
        expr += "(" + term + " << " + std::to_string(field.fromBit) + ")";
    }
    out += "    return " + expr + ";\n";
    out += "}\n";
    out += "\n";
    out += "function " + logFn + "(" + params + ") internal {\n";
    out += "    emit " + eventName + "(" + encodeFn + "(" + passThrough + "));\n";
    out += "}\n";
    return out;
}

} // namespace chainlog
