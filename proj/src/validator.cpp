#include "chainlog/validator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "chainlog/abi.hpp"

namespace chainlog {

using namespace ast;

namespace {

struct AttrEntry {
    const char* entity;
    const char* attr;
    ValueType type;
};

const std::vector<AttrEntry>& attribute_table() {
    static const std::vector<AttrEntry> table = {
        {"block", "number", ValueType::uint_()},
        {"block", "hash", ValueType::fixed_bytes(32)},
        {"block", "parentHash", ValueType::fixed_bytes(32)},
        {"block", "timestamp", ValueType::uint_()},
        {"block", "miner", ValueType::address()},
        {"block", "difficulty", ValueType::uint_()},
        {"block", "gasUsed", ValueType::uint_()},
        {"block", "gasLimit", ValueType::uint_()},
        {"block", "transactionCount", ValueType::uint_()},
        {"tx", "hash", ValueType::fixed_bytes(32)},
        {"tx", "blockNumber", ValueType::uint_()},
        {"tx", "index", ValueType::uint_()},
        {"tx", "from", ValueType::address()},
        {"tx", "to", ValueType::address()},
        {"tx", "value", ValueType::uint_()},
        {"tx", "gasPrice", ValueType::uint_()},
        {"tx", "gasUsed", ValueType::uint_()},
        {"tx", "status", ValueType::boolean()},
        {"tx", "isCreation", ValueType::boolean()},
        {"log", "address", ValueType::address()},
        {"log", "logIndex", ValueType::uint_()},
        {"log", "transactionHash", ValueType::fixed_bytes(32)},
    };
    return table;
}

std::string describe(const ValueType& t) {
    return t.name();
}

struct Checker {
    const Manifest& m;
    std::optional<std::uint64_t> chainHead;
    const OperatorRegistry& registry;

    std::vector<Finding> findings;
    TypeEnvironment env;

    // output name -> kind as first used/declared
    struct OutputInfo {
        OutputKind kind;
        bool declared = false;
    };
    std::map<std::string, OutputInfo> outputs;
    // csv table -> column names of the first row statement (order preserved)
    std::map<std::string, std::vector<std::string>> csvColumns;
    std::map<std::string, const DictionarySpec*> dictionaries;
    std::map<std::string, const BitMappingSpec*> bitmappings;

    Checker(const Manifest& manifest, std::optional<std::uint64_t> head,
            const OperatorRegistry& reg)
        : m(manifest), chainHead(head), registry(reg) {
        env.registry = &reg;
        env.manifest = &manifest;
        env.findings = &findings;
        env.push_scope(); // manifest-level scope
    }

    void error(const std::string& code, const Span& span, const std::string& message) {
        findings.push_back(Finding{Finding::Severity::Error, code, span, message});
    }
    void warn(const std::string& code, const Span& span, const std::string& message) {
        findings.push_back(Finding{Finding::Severity::Warning, code, span, message});
    }

    // ---- expressions ------------------------------------------------------

    std::optional<ValueType> infer(const Expr& e, bool report) {
        if (const auto* lit = e.as<Expr::IntLit>()) {
            if (lit->value >= 0) {
                if (fits_numeric(lit->value, ValueType::uint_()))
                    return ValueType::uint_();
            } else if (fits_numeric(lit->value, ValueType::int_())) {
                return ValueType::int_();
            }
            if (report)
                error("E_TYPE", e.span, "integer literal does not fit 256 bits");
            return std::nullopt;
        }
        if (const auto* lit = e.as<Expr::HexLit>()) {
            if (lit->isAddress)
                return ValueType::address();
            if (lit->bytes.size() >= 1 && lit->bytes.size() <= 32)
                return ValueType::fixed_bytes(static_cast<unsigned>(lit->bytes.size()));
            return ValueType::bytes();
        }
        if (e.as<Expr::StringLit>())
            return ValueType::string();
        if (e.as<Expr::BoolLit>())
            return ValueType::boolean();
        if (const auto* list = e.as<Expr::ListLit>()) {
            if (list->elements.empty()) {
                if (report)
                    error("E_TYPE", e.span,
                          "cannot infer the element type of an empty list here (declare it with a "
                          "typed variable)");
                return std::nullopt;
            }
            auto elemType = infer(list->elements[0], report);
            if (!elemType)
                return std::nullopt;
            if (elemType->kind == ValueType::Kind::List) {
                if (report)
                    error("E_TYPE", e.span, "nested lists are not supported");
                return std::nullopt;
            }
            // generalize literal elements to the canonical numeric widths
            if (elemType->is_numeric())
                elemType->width = 256;
            for (const auto& elem : list->elements)
                if (!check_against(elem, *elemType, report, "list element"))
                    return std::nullopt;
            return ValueType::list(*elemType);
        }
        if (const auto* ref = e.as<Expr::VarRef>()) {
            if (auto* var = env.lookup(ref->name)) {
                var->used = true;
                if (var->hashed)
                    warn("W_HASHED", e.span,
                         "'" + ref->name +
                             "' is an indexed dynamic parameter; only its 32-byte hash is available");
                return var->type;
            }
            if (report) {
                if (dictionaries.count(ref->name))
                    error("E_TYPE", e.span,
                          "'" + ref->name + "' is a dictionary, not a variable");
                else if (bitmappings.count(ref->name))
                    error("E_TYPE", e.span,
                          "'" + ref->name + "' is a bit mapping, not a variable");
                else
                    error("E_UNDEF", e.span, "use of undeclared variable '" + ref->name + "'");
            }
            return std::nullopt;
        }
        if (const auto* ref = e.as<Expr::AttrRef>()) {
            auto type = attribute_type(ref->entity, ref->attr);
            bool knownEntity =
                ref->entity == "block" || ref->entity == "tx" || ref->entity == "log";
            if (!knownEntity) {
                if (report)
                    error("E_ATTR", e.span,
                          "unknown entity '" + ref->entity + "' (expected block, tx or log)");
                return std::nullopt;
            }
            if (!type) {
                if (report)
                    error("E_ATTR", e.span,
                          "entity '" + ref->entity + "' has no attribute '" + ref->attr + "'");
                return std::nullopt;
            }
            bool inScope = (ref->entity == "block" && env.blockScope) ||
                           (ref->entity == "tx" && env.txScope) ||
                           (ref->entity == "log" && env.logScope);
            if (!inScope) {
                if (report)
                    error("E_ATTR", e.span,
                          ref->entity + "." + ref->attr + " referenced outside a " +
                              (ref->entity == "block"  ? "block"
                               : ref->entity == "tx" ? "transaction"
                                                     : "log entry") +
                              " filter");
                return std::nullopt;
            }
            return type;
        }
        const auto* call = e.as<Expr::Call>();
        return infer_call(e, *call, report);
    }

    std::optional<ValueType> infer_call(const Expr& e, const Expr::Call& call, bool report) {
        if (is_special_form(call.name))
            return infer_special(e, call, report);

        std::vector<ValueType> argTypes;
        std::vector<bool> literals;
        std::vector<BigInt> literalValues;
        for (const auto& arg : call.args) {
            auto t = infer(arg, report);
            if (!t)
                return std::nullopt;
            argTypes.push_back(*t);
            const auto* lit = arg.as<Expr::IntLit>();
            literals.push_back(lit != nullptr);
            literalValues.push_back(lit ? lit->value : BigInt(0));
        }
        if (!registry.has(call.name)) {
            if (report)
                error("E_UNDEF", e.span, "unknown operator '" + call.name + "'");
            return std::nullopt;
        }
        const auto* overload = registry.resolve(call.name, argTypes, literals, literalValues);
        if (!overload) {
            if (report) {
                std::string types;
                for (std::size_t i = 0; i < argTypes.size(); ++i)
                    types += (i ? ", " : "") + describe(argTypes[i]);
                error("E_TYPE", e.span,
                      "no signature of '" + call.name + "' matches (" + types + ")");
            }
            return std::nullopt;
        }
        return overload->signature.result;
    }

    std::optional<ValueType> infer_special(const Expr& e, const Expr::Call& call, bool report) {
        auto named = [&](std::size_t idx) -> const std::string* {
            if (idx >= call.args.size())
                return nullptr;
            const auto* ref = call.args[idx].as<Expr::VarRef>();
            return ref ? &ref->name : nullptr;
        };
        if (call.name == "mapValue" || call.name == "unmapValue") {
            if (call.args.size() != 2) {
                if (report)
                    error("E_TYPE", e.span, call.name + " takes (dictionary, value)");
                return std::nullopt;
            }
            const std::string* dictName = named(0);
            const DictionarySpec* dict =
                dictName && dictionaries.count(*dictName) ? dictionaries[*dictName] : nullptr;
            if (!dict) {
                if (report)
                    error("E_UNDEF", call.args[0].span,
                          "first argument of " + call.name + " must name a declared dictionary");
                return std::nullopt;
            }
            const ValueType& in = call.name == "mapValue" ? dict->sourceType : dict->codeType;
            const ValueType& out = call.name == "mapValue" ? dict->codeType : dict->sourceType;
            if (!check_against(call.args[1], in, report, call.name + " argument"))
                return std::nullopt;
            return out;
        }
        // unpackBits(map, "field", packed)
        if (call.args.size() != 3) {
            if (report)
                error("E_TYPE", e.span, "unpackBits takes (bit mapping, \"field\", packed value)");
            return std::nullopt;
        }
        const std::string* mapName = named(0);
        const BitMappingSpec* map =
            mapName && bitmappings.count(*mapName) ? bitmappings[*mapName] : nullptr;
        if (!map) {
            if (report)
                error("E_UNDEF", call.args[0].span,
                      "first argument of unpackBits must name a declared bit mapping");
            return std::nullopt;
        }
        const auto* fieldLit = call.args[1].as<Expr::StringLit>();
        if (!fieldLit) {
            if (report)
                error("E_TYPE", call.args[1].span,
                      "second argument of unpackBits must be a field name string literal");
            return std::nullopt;
        }
        const BitField* field = nullptr;
        for (const auto& f : map->fields)
            if (f.name == fieldLit->value)
                field = &f;
        if (!field) {
            if (report)
                error("E_UNDEF", call.args[1].span,
                      "bit mapping '" + *mapName + "' has no field '" + fieldLit->value + "'");
            return std::nullopt;
        }
        if (!check_against(call.args[2], ValueType::uint_(), report, "packed value"))
            return std::nullopt;
        if (field->viaDict && dictionaries.count(*field->viaDict))
            return dictionaries[*field->viaDict]->sourceType;
        return ValueType::uint_();
    }

    bool check_against(const Expr& e, const ValueType& target, bool report,
                       const std::string& what) {
        if (const auto* lit = e.as<Expr::IntLit>()) {
            if (target.is_numeric() && fits_numeric(lit->value, target))
                return true;
            if (report)
                error("E_TYPE", e.span,
                      "literal " + lit->value.str() + " does not fit " + describe(target) +
                          " (" + what + ")");
            return false;
        }
        if (const auto* list = e.as<Expr::ListLit>()) {
            if (target.kind == ValueType::Kind::List) {
                bool ok = true;
                for (const auto& elem : list->elements)
                    ok = check_against(elem, *target.element, report, what) && ok;
                return ok;
            }
        }
        auto t = infer(e, report);
        if (!t)
            return false;
        if (t->widens_to(target))
            return true;
        if (report)
            error("E_TYPE", e.span,
                  describe(*t) + " is not compatible with " + describe(target) + " (" + what + ")");
        return false;
    }

    // ---- declarations -------------------------------------------------------

    void prepass() {
        for (const auto& item : m.items) {
            if (const auto* dict = std::get_if<DictionarySpec>(&item)) {
                if (dictionaries.count(dict->name) || bitmappings.count(dict->name))
                    error("E_REDECL", dict->span, "duplicate declaration of '" + dict->name + "'");
                else
                    dictionaries[dict->name] = dict;
            } else if (const auto* map = std::get_if<BitMappingSpec>(&item)) {
                if (dictionaries.count(map->name) || bitmappings.count(map->name))
                    error("E_REDECL", map->span, "duplicate declaration of '" + map->name + "'");
                else
                    bitmappings[map->name] = map;
            } else if (const auto* out = std::get_if<OutputDecl>(&item)) {
                auto it = outputs.find(out->name);
                if (it != outputs.end())
                    error("E_REDECL", out->span, "duplicate output declaration '" + out->name + "'");
                else
                    outputs[out->name] = OutputInfo{out->kind, true};
            }
        }
        for (const auto& [name, dict] : dictionaries)
            check_dictionary(*dict);
        for (const auto& [name, map] : bitmappings)
            check_bitmapping(*map);
    }

    void check_dictionary(const DictionarySpec& dict) {
        if (dict.codeType.kind != ValueType::Kind::Uint) {
            error("E_DICT", dict.span,
                  "dictionary code type must be unsigned, got " + describe(dict.codeType));
            return;
        }
        if (dict.sourceType.kind == ValueType::Kind::List) {
            error("E_DICT", dict.span, "dictionary source type cannot be a list");
            return;
        }
        std::map<Value, Span, ValueKeyLess> sources;
        std::map<Value, Span, ValueKeyLess> codes;
        auto add_entry = [&](const DictEntry& entry, bool isDefault) {
            auto source = literal_value(entry.source, dict.sourceType);
            if (!source) {
                error("E_DICT", entry.source.span,
                      "entry value does not fit source type " + describe(dict.sourceType));
                return;
            }
            auto code = literal_value(entry.code, dict.codeType);
            if (!code) {
                error("E_DICT", entry.code.span,
                      "code does not fit code type " + describe(dict.codeType));
                return;
            }
            if (sources.count(*source))
                error("E_DICT", entry.source.span,
                      std::string("duplicate ") + (isDefault ? "default " : "") + "source value " +
                          source->render());
            else
                sources.emplace(*source, entry.source.span);
            if (codes.count(*code))
                error("E_DICT", entry.code.span,
                      std::string("duplicate ") + (isDefault ? "default " : "") + "code " +
                          code->render());
            else
                codes.emplace(*code, entry.code.span);
        };
        for (const auto& entry : dict.entries)
            add_entry(entry, false);
        if (dict.defaultEntry)
            add_entry(*dict.defaultEntry, true);
        else
            warn("W_NODEFAULT", dict.span,
                 "dictionary '" + dict.name + "' has no default; unknown codes will fail decoding");
    }

    void check_bitmapping(const BitMappingSpec& map) {
        std::set<std::string> names;
        std::vector<std::pair<unsigned, unsigned>> ranges; // [from, from+len)
        for (const auto& field : map.fields) {
            if (!names.insert(field.name).second)
                error("E_BITS", field.span, "duplicate field '" + field.name + "'");
            if (field.bitLength == 0) {
                error("E_BITS", field.span, "field '" + field.name + "' has zero width");
                continue;
            }
            if (field.fromBit + field.bitLength > 256) {
                error("E_BITS", field.span,
                      "field '" + field.name + "' extends past bit 256 (" +
                          std::to_string(field.fromBit) + "+" + std::to_string(field.bitLength) +
                          ")");
                continue;
            }
            for (const auto& [from, to] : ranges) {
                unsigned thisFrom = field.fromBit;
                unsigned thisTo = field.fromBit + field.bitLength;
                if (thisFrom < to && from < thisTo) {
                    error("E_BITS", field.span,
                          "field '" + field.name + "' overlaps bits [" + std::to_string(from) +
                              ", " + std::to_string(to) + ")");
                    break;
                }
            }
            ranges.emplace_back(field.fromBit, field.fromBit + field.bitLength);
            if (field.viaDict) {
                auto it = dictionaries.find(*field.viaDict);
                if (it == dictionaries.end()) {
                    error("E_UNDEF", field.span,
                          "field '" + field.name + "' references undeclared dictionary '" +
                              *field.viaDict + "'");
                } else if (it->second->codeType.kind == ValueType::Kind::Uint &&
                           it->second->codeType.width > field.bitLength) {
                    error("E_BITS", field.span,
                          "dictionary code type " + describe(it->second->codeType) +
                              " does not fit in " + std::to_string(field.bitLength) + " bits");
                }
            }
        }
    }

    // ---- statements -----------------------------------------------------------

    bool reserved_name(const std::string& name) {
        return name == "block" || name == "tx" || name == "log";
    }

    void declare_variable(const std::string& name, const Span& span, TypeEnvironment::VarInfo info) {
        if (reserved_name(name)) {
            error("E_REDECL", span, "'" + name + "' is a reserved entity name");
            return;
        }
        if (dictionaries.count(name) || bitmappings.count(name)) {
            error("E_REDECL", span, "'" + name + "' is already declared as a dictionary or mapping");
            return;
        }
        if (!env.declare(name, info))
            error("E_REDECL", span, "redeclaration of visible name '" + name + "'");
    }

    void check_var_decl(const VarDecl& decl) {
        if (decl.init.as<Expr::ListLit>() && decl.init.as<Expr::ListLit>()->elements.empty() &&
            decl.type.kind == ValueType::Kind::List) {
            // empty list literal adopts the declared type
        } else {
            check_against(decl.init, decl.type, true, "initializer of '" + decl.name + "'");
        }
        declare_variable(decl.name, decl.span,
                         TypeEnvironment::VarInfo{decl.type, decl.span, true, false, false});
    }

    void check_assignment(const Assignment& assign) {
        auto* var = env.lookup(assign.name);
        if (!var) {
            error("E_UNDEF", assign.span, "assignment to undeclared variable '" + assign.name + "'");
            // still check the value expression for secondary problems
            infer(assign.value, true);
            return;
        }
        if (!var->assignable) {
            error("E_TYPE", assign.span,
                  "'" + assign.name + "' is a filter binding and cannot be assigned");
            return;
        }
        check_against(assign.value, var->type, true, "assignment to '" + assign.name + "'");
    }

    void use_output(const std::string& name, OutputKind kind, const Span& span) {
        auto it = outputs.find(name);
        if (it == outputs.end()) {
            outputs[name] = OutputInfo{kind, false};
            return;
        }
        if (it->second.kind != kind) {
            auto kindName = [](OutputKind k) {
                return k == OutputKind::Log ? "LOG" : k == OutputKind::Csv ? "CSV" : "XES";
            };
            error("E_REDECL", span,
                  "output '" + name + "' is a " + kindName(it->second.kind) + " output, not " +
                      kindName(kind));
        }
    }

    void check_emit_log(const EmitLog& emit) {
        use_output(emit.output, OutputKind::Log, emit.span);
        for (const auto& part : emit.tmpl.parts)
            if (part.isExpr)
                infer(*part.expr, true);
    }

    void check_emit_csv(const EmitCsv& emit) {
        use_output(emit.table, OutputKind::Csv, emit.span);
        std::vector<std::string> columns;
        std::set<std::string> seen;
        for (const auto& [name, expr] : emit.columns) {
            if (!seen.insert(name).second)
                error("E_CSV", emit.span, "duplicate column '" + name + "'");
            columns.push_back(name);
            infer(expr, true);
        }
        auto it = csvColumns.find(emit.table);
        if (it == csvColumns.end()) {
            csvColumns[emit.table] = columns;
            return;
        }
        auto sortedExisting = it->second;
        auto sortedNew = columns;
        std::sort(sortedExisting.begin(), sortedExisting.end());
        std::sort(sortedNew.begin(), sortedNew.end());
        if (sortedExisting != sortedNew) {
            std::string expected;
            for (const auto& c : it->second)
                expected += (expected.empty() ? "" : ", ") + c;
            error("E_CSV", emit.span,
                  "table '" + emit.table + "' was first used with columns {" + expected + "}");
        }
    }

    void check_emit_xes(const EmitXes& emit) {
        use_output(emit.output, OutputKind::Xes, emit.span);
        auto idType = infer(emit.traceId, true);
        if (idType && idType->kind == ValueType::Kind::List)
            error("E_XES", emit.traceId.span, "trace identifier cannot be a list");
        std::set<std::string> keys;
        for (const auto& attr : emit.attrs) {
            if (!keys.insert(attr.key).second)
                error("E_XES", attr.span, "duplicate attribute key '" + attr.key + "'");
            auto type = infer(attr.value, true);
            if (!type)
                continue;
            bool ok = true;
            switch (attr.type) {
            case XesAttrType::Date:
                ok = type->kind == ValueType::Kind::Uint;
                break;
            case XesAttrType::Int:
            case XesAttrType::Float:
                ok = type->is_numeric();
                break;
            case XesAttrType::Boolean:
                ok = type->kind == ValueType::Kind::Bool;
                break;
            case XesAttrType::String:
            case XesAttrType::Id:
            case XesAttrType::Auto:
                ok = type->kind != ValueType::Kind::List;
                break;
            }
            if (!ok)
                error("E_XES", attr.span,
                      "attribute '" + attr.key + "' declared as " + xes_type_label(attr.type) +
                          " cannot take a " + describe(*type) + " value");
        }
    }

    static std::string xes_type_label(XesAttrType t) {
        switch (t) {
        case XesAttrType::String: return "string";
        case XesAttrType::Date: return "date";
        case XesAttrType::Int: return "int";
        case XesAttrType::Float: return "float";
        case XesAttrType::Boolean: return "boolean";
        case XesAttrType::Id: return "id";
        case XesAttrType::Auto: return "auto";
        }
        return "?";
    }

    void check_event_signature(const EventSignatureDecl& sig) {
        std::size_t indexed = 0;
        std::set<std::string> names;
        for (const auto& param : sig.params) {
            if (param.indexed)
                ++indexed;
            if (!abi::is_supported_type(param.type))
                error("E_SIG", param.span,
                      "type " + describe(param.type) + " is not supported in event signatures");
            if (!names.insert(param.name).second)
                error("E_SIG", param.span, "duplicate parameter name '" + param.name + "'");
        }
        if (indexed > 3)
            error("E_SIG", sig.span,
                  "event '" + sig.name + "' has " + std::to_string(indexed) +
                      " indexed parameters (at most 3)");
    }

    void check_address_list(const AddressList& list) {
        for (const auto& expr : list.items)
            check_against(expr, ValueType::address(), true, "address list entry");
    }

    void check_block_range(const FilterNode& f) {
        if (f.fromSpec.kind == BlockSpec::Kind::Continuous)
            error("E_RANGE", f.fromSpec.span, "CONTINUOUS is only valid as the upper bound");
        auto numeric = [](const BlockSpec& spec) -> std::optional<BigInt> {
            if (spec.kind == BlockSpec::Kind::Number)
                return spec.number;
            if (spec.kind == BlockSpec::Kind::Earliest)
                return BigInt(0);
            return std::nullopt;
        };
        auto from = numeric(f.fromSpec);
        auto to = numeric(f.toSpec);
        if (from && to && *from > *to)
            error("E_RANGE", f.span,
                  "block range is empty: " + from->str() + " > " + to->str());
        if (chainHead && to && *to > BigInt(*chainHead))
            warn("W_RANGE", f.toSpec.span,
                 "upper bound " + to->str() + " exceeds the current chain head " +
                     std::to_string(*chainHead));
    }

    // nearest non-generic ancestor kinds; empty at top level
    void check_filter(const FilterNode& f, std::vector<FilterKind>& ancestors) {
        std::optional<FilterKind> nearest;
        for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it) {
            if (*it != FilterKind::Generic) {
                nearest = *it;
                break;
            }
        }
        switch (f.kind) {
        case FilterKind::Block:
            if (!ancestors.empty())
                error("E_NESTING", f.span, "block filters must be at the top level");
            check_block_range(f);
            break;
        case FilterKind::Transaction:
            if (nearest != FilterKind::Block)
                error("E_NESTING", f.span,
                      "transaction filters must be nested within a block filter");
            check_address_list(f.senders);
            check_address_list(f.recipients);
            break;
        case FilterKind::LogEntry:
            if (nearest != FilterKind::Block && nearest != FilterKind::Transaction)
                error("E_NESTING", f.span,
                      "log entry filters must be combined with a transaction or block filter");
            check_address_list(f.contracts);
            check_event_signature(f.signature);
            break;
        case FilterKind::State:
            if (nearest != FilterKind::Block)
                error("E_NESTING", f.span, "state filters must be nested within a block filter");
            check_against(*f.contract, ValueType::address(), true, "contract address");
            for (const auto& member : f.members) {
                if (!abi::is_supported_type(member.type))
                    error("E_SIG", member.span,
                          "type " + describe(member.type) + " is not supported for state members");
                for (const auto& arg : member.args) {
                    auto t = infer(arg, true);
                    if (t && !abi::is_supported_type(*t))
                        error("E_SIG", arg.span,
                              "argument type " + describe(*t) + " cannot be sent in a contract call");
                }
            }
            break;
        case FilterKind::Generic:
            if (ancestors.empty())
                error("E_NESTING", f.span, "generic filters must be nested within another filter");
            check_against(*f.predicate, ValueType::boolean(), true, "filter predicate");
            break;
        }

        bool wasBlock = env.blockScope, wasTx = env.txScope, wasLog = env.logScope;
        switch (f.kind) {
        case FilterKind::Block: env.blockScope = true; break;
        case FilterKind::Transaction: env.txScope = true; break;
        case FilterKind::LogEntry: env.logScope = true; break;
        default: break;
        }

        env.push_scope();
        if (f.kind == FilterKind::LogEntry) {
            for (const auto& param : f.signature.params) {
                bool hashed = param.indexed && param.type.is_dynamic_abi();
                ValueType bound = hashed ? ValueType::fixed_bytes(32) : param.type;
                declare_variable(param.name, param.span,
                                 TypeEnvironment::VarInfo{bound, param.span, false, hashed, false});
            }
        }
        if (f.kind == FilterKind::State) {
            for (const auto& member : f.members)
                declare_variable(member.name, member.span,
                                 TypeEnvironment::VarInfo{member.type, member.span, false, false,
                                                          false});
        }

        ancestors.push_back(f.kind);
        for (const auto& stmt : f.body)
            check_stmt(stmt, ancestors);
        ancestors.pop_back();

        report_unused_in_top_scope();
        env.pop_scope();
        env.blockScope = wasBlock;
        env.txScope = wasTx;
        env.logScope = wasLog;
    }

    void report_unused_in_top_scope() {
        for (const auto& [name, info] : env.scopes.back())
            if (info.assignable && !info.used)
                warn("W_UNUSED", info.declSpan, "variable '" + name + "' is never read");
    }

    void check_stmt(const Stmt& stmt, std::vector<FilterKind>& ancestors) {
        bool insideBlock =
            std::find(ancestors.begin(), ancestors.end(), FilterKind::Block) != ancestors.end();
        if (const auto* decl = stmt.as<VarDecl>()) {
            check_var_decl(*decl);
        } else if (const auto* assign = stmt.as<Assignment>()) {
            check_assignment(*assign);
        } else if (const auto* emit = stmt.as<EmitLog>()) {
            if (!insideBlock)
                error("E_NESTING", emit->span, "emit statements must be inside a block filter");
            check_emit_log(*emit);
        } else if (const auto* emit = stmt.as<EmitCsv>()) {
            if (!insideBlock)
                error("E_NESTING", emit->span, "emit statements must be inside a block filter");
            check_emit_csv(*emit);
        } else if (const auto* emit = stmt.as<EmitXes>()) {
            if (!insideBlock)
                error("E_NESTING", emit->span, "emit statements must be inside a block filter");
            check_emit_xes(*emit);
        } else if (const auto* filter = stmt.as<FilterNode>()) {
            check_filter(*filter, ancestors);
        }
    }

    ValidationReport run() {
        prepass();
        std::vector<FilterKind> ancestors;
        for (const auto& item : m.items)
            if (const auto* stmt = std::get_if<Stmt>(&item))
                check_stmt(*stmt, ancestors);
        report_unused_in_top_scope();
        return ValidationReport{std::move(findings)};
    }
};

} // namespace

TypeEnvironment::VarInfo* TypeEnvironment::lookup(const std::string& name) {
    for (auto scope = scopes.rbegin(); scope != scopes.rend(); ++scope)
        for (auto& [candidate, info] : *scope)
            if (candidate == name)
                return &info;
    return nullptr;
}

bool TypeEnvironment::declare(const std::string& name, VarInfo info) {
    if (lookup(name))
        return false;
    scopes.back().emplace_back(name, std::move(info));
    return true;
}

std::optional<ValueType> attribute_type(const std::string& entity, const std::string& attr) {
    for (const auto& entry : attribute_table())
        if (entity == entry.entity && attr == entry.attr)
            return entry.type;
    return std::nullopt;
}

bool ValidationReport::ok() const {
    return error_count() == 0;
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(),
                      [](const Finding& f) { return f.severity == Finding::Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const {
    return findings.size() - error_count();
}

std::string ValidationReport::render() const {
    std::string out;
    for (const auto& f : findings) {
        out += f.severity == Finding::Severity::Error ? "error " : "warning ";
        out += f.code + " " + std::to_string(f.span.line) + ":" + std::to_string(f.span.column) +
               " " + f.message + "\n";
    }
    return out;
}

std::string ValidationReport::render_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : findings)
        arr.push_back({
            {"severity", f.severity == Finding::Severity::Error ? "error" : "warning"},
            {"code", f.code},
            {"line", f.span.line},
            {"col", f.span.column},
            {"message", f.message},
        });
    return nlohmann::json{{"findings", arr}}.dump(2) + "\n";
}

ValidationReport validate(const ast::Manifest& m, std::optional<std::uint64_t> chainHead,
                          const OperatorRegistry& registry) {
    Checker checker(m, chainHead, registry);
    return checker.run();
}

std::optional<ValueType> type_of(const ast::Expr& expr, TypeEnvironment& env) {
    // reuse the full checker against a synthetic empty manifest
    static const ast::Manifest empty;
    Checker checker(empty, std::nullopt, env.registry ? *env.registry
                                                      : OperatorRegistry::builtins());
    if (env.manifest) {
        for (const auto* d : env.manifest->dictionaries())
            checker.dictionaries[d->name] = d;
        for (const auto* b : env.manifest->bitmappings())
            checker.bitmappings[b->name] = b;
    }
    checker.env.scopes = env.scopes;
    checker.env.blockScope = env.blockScope;
    checker.env.txScope = env.txScope;
    checker.env.logScope = env.logScope;
    auto result = checker.infer(expr, true);
    if (env.findings)
        env.findings->insert(env.findings->end(), checker.findings.begin(),
                             checker.findings.end());
    env.scopes = checker.env.scopes; // carry back usage marks
    return result;
}

} // namespace chainlog
