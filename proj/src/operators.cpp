#include "chainlog/operators.hpp"

#include "chainlog/errors.hpp"

namespace chainlog {

namespace {

using Kind = ValueType::Kind;

const BigInt kUintMax = (BigInt(1) << 256) - 1;

Value make_numeric(const BigInt& v, Kind kind) {
    if (kind == Kind::Uint) {
        if (v < 0 || v > kUintMax)
            throw EvalError(EvalError::Category::Arithmetic,
                            "result " + v.str() + " out of uint256 range");
        return Value::uint_(v);
    }
    if (!fits_numeric(v, ValueType::int_(256)))
        throw EvalError(EvalError::Category::Arithmetic, "result " + v.str() + " out of int256 range");
    return Value::int_(v);
}

BigInt parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        negative = s[i] == '-';
        ++i;
    }
    if (i >= s.size())
        throw EvalError(EvalError::Category::Data, "not a decimal number: \"" + s + "\"");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw EvalError(EvalError::Category::Data, "not a decimal number: \"" + s + "\"");
        v *= 10;
        v += s[i] - '0';
    }
    return negative ? -v : v;
}

void add_arith(OperatorRegistry& reg, const std::string& name,
               BigInt (*op)(const BigInt&, const BigInt&)) {
    for (Kind kind : {Kind::Uint, Kind::Int}) {
        ValueType t = kind == Kind::Uint ? ValueType::uint_() : ValueType::int_();
        reg.register_operator(name, {{t, t}, t}, [op, kind](const std::vector<Value>& args) {
            return make_numeric(op(args[0].as_int(), args[1].as_int()), kind);
        });
    }
}

void add_comparison(OperatorRegistry& reg, const std::string& name,
                    bool (*cmp)(const Value&, const Value&), bool orderedOnly) {
    std::vector<ValueType> types = {ValueType::uint_(), ValueType::int_(), ValueType::string()};
    if (!orderedOnly) {
        types.push_back(ValueType::boolean());
        types.push_back(ValueType::address());
        types.push_back(ValueType::bytes());
    }
    for (const auto& t : types)
        reg.register_operator(name, {{t, t}, ValueType::boolean()},
                              [cmp](const std::vector<Value>& args) {
                                  return Value::boolean(cmp(args[0], args[1]));
                              });
}

int compare_values(const Value& a, const Value& b) {
    if (a.type().is_numeric()) {
        if (a.as_int() < b.as_int())
            return -1;
        return a.as_int() == b.as_int() ? 0 : 1;
    }
    if (a.type().kind == Kind::String)
        return a.as_string().compare(b.as_string());
    if (a.type().kind == Kind::Bool)
        return int(a.as_bool()) - int(b.as_bool());
    if (a.type().kind == Kind::Address) {
        if (a.as_address() < b.as_address())
            return -1;
        return a.as_address() == b.as_address() ? 0 : 1;
    }
    // bytes / fixed bytes
    const auto& x = a.as_bytes();
    const auto& y = b.as_bytes();
    if (x < y)
        return -1;
    return x == y ? 0 : 1;
}

const std::vector<ValueType> kListElementTypes = {
    ValueType::uint_(), ValueType::int_(), ValueType::address(), ValueType::string(),
    ValueType::boolean(),
};

OperatorRegistry build_builtins() {
    OperatorRegistry reg;

    add_arith(reg, "add", [](const BigInt& a, const BigInt& b) { return BigInt(a + b); });
    add_arith(reg, "subtract", [](const BigInt& a, const BigInt& b) { return BigInt(a - b); });
    add_arith(reg, "multiply", [](const BigInt& a, const BigInt& b) { return BigInt(a * b); });
    add_arith(reg, "divide", [](const BigInt& a, const BigInt& b) {
        if (b == 0)
            throw divide_by_zero();
        return BigInt(a / b);
    });
    add_arith(reg, "mod", [](const BigInt& a, const BigInt& b) {
        if (b == 0)
            throw divide_by_zero();
        return BigInt(a % b);
    });

    reg.register_operator("negate", {{ValueType::int_()}, ValueType::int_()},
                          [](const std::vector<Value>& args) {
                              return make_numeric(-args[0].as_int(), Kind::Int);
                          });

    add_comparison(reg, "eq", [](const Value& a, const Value& b) { return compare_values(a, b) == 0; },
                   false);
    add_comparison(reg, "neq",
                   [](const Value& a, const Value& b) { return compare_values(a, b) != 0; }, false);
    add_comparison(reg, "lt", [](const Value& a, const Value& b) { return compare_values(a, b) < 0; },
                   true);
    add_comparison(reg, "le", [](const Value& a, const Value& b) { return compare_values(a, b) <= 0; },
                   true);
    add_comparison(reg, "gt", [](const Value& a, const Value& b) { return compare_values(a, b) > 0; },
                   true);
    add_comparison(reg, "ge", [](const Value& a, const Value& b) { return compare_values(a, b) >= 0; },
                   true);

    reg.register_operator("and", {{ValueType::boolean(), ValueType::boolean()}, ValueType::boolean()},
                          [](const std::vector<Value>& args) {
                              return Value::boolean(args[0].as_bool() && args[1].as_bool());
                          });
    reg.register_operator("or", {{ValueType::boolean(), ValueType::boolean()}, ValueType::boolean()},
                          [](const std::vector<Value>& args) {
                              return Value::boolean(args[0].as_bool() || args[1].as_bool());
                          });
    reg.register_operator("not", {{ValueType::boolean()}, ValueType::boolean()},
                          [](const std::vector<Value>& args) {
                              return Value::boolean(!args[0].as_bool());
                          });

    reg.register_operator("concatenate",
                          {{ValueType::string(), ValueType::string()}, ValueType::string()},
                          [](const std::vector<Value>& args) {
                              return Value::string(args[0].as_string() + args[1].as_string());
                          });
    reg.register_operator("concatenate", {{ValueType::bytes(), ValueType::bytes()}, ValueType::bytes()},
                          [](const std::vector<Value>& args) {
                              auto out = args[0].as_bytes();
                              const auto& tail = args[1].as_bytes();
                              out.insert(out.end(), tail.begin(), tail.end());
                              return Value::bytes(std::move(out));
                          });

    reg.register_operator("contains", {{ValueType::string(), ValueType::string()}, ValueType::boolean()},
                          [](const std::vector<Value>& args) {
                              return Value::boolean(args[0].as_string().find(args[1].as_string()) !=
                                                    std::string::npos);
                          });
    for (const auto& elem : kListElementTypes) {
        reg.register_operator(
            "contains", {{ValueType::list(elem), elem}, ValueType::boolean()},
            [](const std::vector<Value>& args) {
                for (const auto& e : args[0].as_list())
                    if (compare_values(e, args[1]) == 0)
                        return Value::boolean(true);
                return Value::boolean(false);
            });
        reg.register_operator("append", {{ValueType::list(elem), elem}, ValueType::list(elem)},
                              [elem](const std::vector<Value>& args) {
                                  auto out = args[0].as_list();
                                  out.push_back(args[1]);
                                  return Value::list(elem, std::move(out));
                              });
        reg.register_operator("length", {{ValueType::list(elem)}, ValueType::uint_()},
                              [](const std::vector<Value>& args) {
                                  return Value::uint_(BigInt(args[0].as_list().size()));
                              });
    }
    reg.register_operator("length", {{ValueType::string()}, ValueType::uint_()},
                          [](const std::vector<Value>& args) {
                              return Value::uint_(BigInt(args[0].as_string().size()));
                          });
    reg.register_operator("length", {{ValueType::bytes()}, ValueType::uint_()},
                          [](const std::vector<Value>& args) {
                              return Value::uint_(BigInt(args[0].as_bytes().size()));
                          });

    for (const auto& t : {ValueType::uint_(), ValueType::int_(), ValueType::boolean(),
                          ValueType::address(), ValueType::bytes(), ValueType::string()})
        reg.register_operator("toString", {{t}, ValueType::string()},
                              [](const std::vector<Value>& args) {
                                  return Value::string(args[0].render());
                              });

    reg.register_operator("toUint", {{ValueType::string()}, ValueType::uint_()},
                          [](const std::vector<Value>& args) {
                              BigInt v = parse_decimal(args[0].as_string());
                              if (v < 0)
                                  throw EvalError(EvalError::Category::Data,
                                                  "negative value for toUint");
                              return make_numeric(v, Kind::Uint);
                          });
    reg.register_operator("toUint", {{ValueType::bytes()}, ValueType::uint_()},
                          [](const std::vector<Value>& args) {
                              const auto& b = args[0].as_bytes();
                              if (b.size() > 32)
                                  throw EvalError(EvalError::Category::Data,
                                                  "toUint input longer than 32 bytes");
                              return Value::uint_(bytes_to_uint(b.data(), b.size()));
                          });
    reg.register_operator("toInt", {{ValueType::string()}, ValueType::int_()},
                          [](const std::vector<Value>& args) {
                              return make_numeric(parse_decimal(args[0].as_string()), Kind::Int);
                          });
    reg.register_operator("toAddress", {{ValueType::bytes()}, ValueType::address()},
                          [](const std::vector<Value>& args) {
                              const auto& b = args[0].as_bytes();
                              Address a{};
                              if (b.size() == 20) {
                                  std::copy(b.begin(), b.end(), a.begin());
                              } else if (b.size() == 32) {
                                  for (std::size_t i = 0; i < 12; ++i)
                                      if (b[i] != 0)
                                          throw EvalError(EvalError::Category::Data,
                                                          "32-byte value with nonzero prefix is not "
                                                          "an address");
                                  std::copy(b.begin() + 12, b.end(), a.begin());
                              } else {
                                  throw EvalError(EvalError::Category::Data,
                                                  "toAddress needs 20 or 32 bytes, got " +
                                                      std::to_string(b.size()));
                              }
                              return Value::address(a);
                          });

    return reg;
}

} // namespace

void OperatorRegistry::register_operator(const std::string& name, OperatorSignature signature,
                                         Fn fn) {
    operators_[name].push_back(Overload{std::move(signature), std::move(fn)});
}

const std::vector<OperatorRegistry::Overload>* OperatorRegistry::overloads(
    const std::string& name) const {
    auto it = operators_.find(name);
    return it == operators_.end() ? nullptr : &it->second;
}

const OperatorRegistry::Overload* OperatorRegistry::resolve(
    const std::string& name, const std::vector<ValueType>& argTypes,
    const std::vector<bool>& intLiteral, const std::vector<BigInt>& literalValues) const {
    const auto* candidates = overloads(name);
    if (!candidates)
        return nullptr;
    for (const auto& overload : *candidates) {
        const auto& params = overload.signature.params;
        if (params.size() != argTypes.size())
            continue;
        bool match = true;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (argTypes[i].widens_to(params[i]))
                continue;
            bool literalFit = i < intLiteral.size() && intLiteral[i] && params[i].is_numeric() &&
                              fits_numeric(literalValues[i], params[i]);
            if (!literalFit) {
                match = false;
                break;
            }
        }
        if (match)
            return &overload;
    }
    return nullptr;
}

Value OperatorRegistry::apply(const std::string& name, const std::vector<Value>& args) const {
    std::vector<ValueType> types;
    types.reserve(args.size());
    for (const auto& a : args)
        types.push_back(a.type());
    std::vector<bool> literals(args.size(), false);
    std::vector<BigInt> values(args.size(), 0);
    const Overload* overload = resolve(name, types, literals, values);
    if (!overload)
        throw EvalError(EvalError::Category::Type, "no matching signature for operator " + name);
    return overload->fn(args);
}

std::vector<std::string> OperatorRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(operators_.size());
    for (const auto& [name, _] : operators_)
        out.push_back(name);
    return out;
}

const OperatorRegistry& OperatorRegistry::builtins() {
    static const OperatorRegistry registry = build_builtins();
    return registry;
}

bool is_special_form(const std::string& name) {
    return name == "mapValue" || name == "unmapValue" || name == "unpackBits";
}

} // namespace chainlog
