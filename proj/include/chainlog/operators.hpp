#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chainlog/value.hpp"

namespace chainlog {

struct OperatorSignature {
    std::vector<ValueType> params;
    ValueType result;
};

/// Named transformation operators with typed overloads. Arguments match a
/// signature when each one widens to the declared parameter type; integer
/// literals additionally match any numeric parameter they fit (the caller
/// passes that via the literal flags). Custom operators are registered at
/// startup on a copy of the built-in table.
class OperatorRegistry {
public:
    using Fn = std::function<Value(const std::vector<Value>&)>;

    struct Overload {
        OperatorSignature signature;
        Fn fn;
    };

    void register_operator(const std::string& name, OperatorSignature signature, Fn fn);

    bool has(const std::string& name) const { return operators_.count(name) > 0; }

    const std::vector<Overload>* overloads(const std::string& name) const;

    /// First registered overload whose parameters accept the argument types;
    /// `intLiteral[i]` marks arguments that may narrow to any numeric type
    /// that fits `literalValue[i]`.
    const Overload* resolve(const std::string& name, const std::vector<ValueType>& argTypes,
                            const std::vector<bool>& intLiteral,
                            const std::vector<BigInt>& literalValues) const;

    /// Evaluates with runtime overload resolution (argument values carry
    /// their concrete types). Throws EvalError on domain errors.
    Value apply(const std::string& name, const std::vector<Value>& args) const;

    std::vector<std::string> names() const;

    static const OperatorRegistry& builtins();

private:
    std::map<std::string, std::vector<Overload>> operators_;
};

/// Names with special argument forms handled outside the registry:
/// mapValue/unmapValue (dictionary lookups) and unpackBits (bit-mapping
/// field extraction).
bool is_special_form(const std::string& name);

} // namespace chainlog
