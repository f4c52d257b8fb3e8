#include "chainlog/extractor.hpp"

#include <algorithm>
#include <functional>
#include <thread>

#include <json.hpp>

#include "chainlog/abi.hpp"
#include "chainlog/compression.hpp"
#include "chainlog/errors.hpp"
#include "chainlog/validator.hpp"

namespace chainlog {

using namespace ast;

namespace {

const BigInt kInt64Min = -(BigInt(1) << 63);
const BigInt kInt64Max = (BigInt(1) << 63) - 1;

void walk_statements(const std::vector<Stmt>& body, const std::function<void(const Stmt&)>& visit) {
    for (const auto& stmt : body) {
        visit(stmt);
        if (const auto* f = stmt.as<FilterNode>())
            walk_statements(f->body, visit);
    }
}

void walk_manifest(const Manifest& m, const std::function<void(const Stmt&)>& visit) {
    for (const auto& item : m.items)
        if (const auto* stmt = std::get_if<Stmt>(&item)) {
            visit(*stmt);
            if (const auto* f = stmt->as<FilterNode>())
                walk_statements(f->body, visit);
        }
}

abi::EventSpec event_spec_of(const EventSignatureDecl& sig) {
    abi::EventSpec spec;
    spec.name = sig.name;
    for (const auto& param : sig.params)
        spec.params.push_back(abi::EventParam{param.type, param.indexed, param.name});
    return spec;
}

struct ResolvedRange {
    const FilterNode* root = nullptr;
    std::uint64_t from = 0;
    std::optional<std::uint64_t> to; // nullopt: follow the head
};

struct Runtime {
    const Manifest& m;
    rpc::NodeClient& client;
    SinkSet& sinks;
    const ExtractionOptions& options;
    const OperatorRegistry& registry;

    ExtractionSummary summary;

    std::map<std::string, ValueDictionary> dictionaries;
    std::map<std::string, BitMapping> bitmappings;
    std::map<std::string, std::vector<std::string>> csvColumns;

    struct Binding {
        std::string name;
        ValueType type;
        Value value;
    };
    std::vector<std::vector<Binding>> scopes;

    struct StagedWrite {
        std::size_t scopeIdx;
        std::size_t bindingIdx;
        Value value;
    };
    std::vector<StagedWrite> staged;

    const Block* curBlock = nullptr;
    const Transaction* curTx = nullptr;
    const LogEntry* curLog = nullptr;
    std::optional<std::uint64_t> provTxIndex;
    std::optional<std::uint64_t> provLogIndex;
    bool txBoundary = false;
    std::size_t txBoundaryDepth = 0;

    std::map<std::string, std::vector<std::uint8_t>> callCache;

    // fast-path query (no transaction/state filters in the manifest)
    bool fastPath = false;
    std::vector<Address> fastPathAddresses;
    std::vector<Word32> fastPathTopics;

    Runtime(const Manifest& manifest, rpc::NodeClient& nodeClient, SinkSet& sinkSet,
            const ExtractionOptions& opts)
        : m(manifest), client(nodeClient), sinks(sinkSet), options(opts),
          registry(*opts.registry) {}

    // ---- compile steps -----------------------------------------------------

    void compile() {
        for (const auto* dict : m.dictionaries())
            dictionaries.emplace(dict->name, ValueDictionary::from_ast(*dict));
        for (const auto* map : m.bitmappings())
            bitmappings.emplace(map->name, BitMapping::from_ast(*map));
        csvColumns = csv_table_columns(m);
        for (const auto& [name, kind] : collect_outputs(m))
            sinks.declare(name, kind);
        for (const auto& [table, columns] : csvColumns)
            sinks.declare_csv_columns(table, columns);
        plan_fast_path();
    }

    void plan_fast_path() {
        bool hasTxOrState = false;
        bool allContractsLiteral = true;
        walk_manifest(m, [&](const Stmt& stmt) {
            const auto* f = stmt.as<FilterNode>();
            if (!f)
                return;
            if (f->kind == FilterKind::Transaction || f->kind == FilterKind::State)
                hasTxOrState = true;
            if (f->kind == FilterKind::LogEntry) {
                fastPathTopics.push_back(abi::event_topic0(event_spec_of(f->signature)));
                if (f->contracts.any) {
                    allContractsLiteral = false;
                } else {
                    for (const auto& expr : f->contracts.items) {
                        const auto* lit = expr.as<Expr::HexLit>();
                        if (lit && lit->isAddress) {
                            Address a{};
                            std::copy(lit->bytes.begin(), lit->bytes.end(), a.begin());
                            if (std::find(fastPathAddresses.begin(), fastPathAddresses.end(), a) ==
                                fastPathAddresses.end())
                                fastPathAddresses.push_back(a);
                        } else {
                            // a variable could be rebound mid-run; filtering by
                            // the old address would lose admissions
                            allContractsLiteral = false;
                        }
                    }
                }
            }
        });
        fastPath = !hasTxOrState;
        if (!allContractsLiteral)
            fastPathAddresses.clear();
        std::sort(fastPathTopics.begin(), fastPathTopics.end());
        fastPathTopics.erase(std::unique(fastPathTopics.begin(), fastPathTopics.end()),
                             fastPathTopics.end());
    }

    // ---- variables ----------------------------------------------------------

    std::pair<std::size_t, std::size_t> find_binding(const std::string& name) {
        for (std::size_t s = scopes.size(); s-- > 0;)
            for (std::size_t i = 0; i < scopes[s].size(); ++i)
                if (scopes[s][i].name == name)
                    return {s, i};
        throw EvalError(EvalError::Category::Scope, "unbound variable '" + name + "'");
    }

    void bind(const std::string& name, const ValueType& type, Value value) {
        scopes.back().push_back(Binding{name, type, std::move(value)});
    }

    Value coerce(const Value& v, const ValueType& target) {
        if (v.type() == target)
            return v;
        if (v.type().is_numeric() && target.is_numeric() && v.type().kind == target.kind) {
            if (!fits_numeric(v.as_int(), target))
                throw EvalError(EvalError::Category::Type,
                                v.as_int().str() + " does not fit " + target.name());
            return target.kind == ValueType::Kind::Uint ? Value::uint_(v.as_int(), target.width)
                                                        : Value::int_(v.as_int(), target.width);
        }
        if (v.type().kind == ValueType::Kind::FixedBytes && target.kind == ValueType::Kind::Bytes)
            return Value::bytes(v.as_bytes());
        if (v.type().kind == ValueType::Kind::List && target.kind == ValueType::Kind::List) {
            Value::List elems;
            elems.reserve(v.as_list().size());
            for (const auto& e : v.as_list())
                elems.push_back(coerce(e, *target.element));
            return Value::list(*target.element, std::move(elems));
        }
        if (v.type().widens_to(target))
            return v;
        throw EvalError(EvalError::Category::Type,
                        "cannot use " + v.type().name() + " as " + target.name());
    }

    void commit_staged() {
        for (auto& write : staged)
            scopes[write.scopeIdx][write.bindingIdx].value = std::move(write.value);
        staged.clear();
    }

    // ---- expression evaluation ------------------------------------------------

    Value eval(const Expr& e) {
        if (const auto* lit = e.as<Expr::IntLit>())
            return lit->value >= 0 ? Value::uint_(lit->value) : Value::int_(lit->value);
        if (const auto* lit = e.as<Expr::HexLit>()) {
            if (lit->isAddress) {
                Address a{};
                std::copy(lit->bytes.begin(), lit->bytes.end(), a.begin());
                return Value::address(a);
            }
            if (lit->bytes.size() >= 1 && lit->bytes.size() <= 32)
                return Value::fixed_bytes(lit->bytes);
            return Value::bytes(lit->bytes);
        }
        if (const auto* lit = e.as<Expr::StringLit>())
            return Value::string(lit->value);
        if (const auto* lit = e.as<Expr::BoolLit>())
            return Value::boolean(lit->value);
        if (const auto* lit = e.as<Expr::ListLit>()) {
            if (lit->elements.empty())
                return Value::list(ValueType::uint_(), {});
            Value::List elems;
            for (const auto& elem : lit->elements)
                elems.push_back(eval(elem));
            ValueType elemType = elems[0].type();
            if (elemType.is_numeric())
                elemType.width = 256;
            for (auto& elem : elems)
                elem = coerce(elem, elemType);
            return Value::list(elemType, std::move(elems));
        }
        if (const auto* ref = e.as<Expr::VarRef>()) {
            auto [scopeIdx, bindingIdx] = find_binding(ref->name);
            return scopes[scopeIdx][bindingIdx].value;
        }
        if (const auto* ref = e.as<Expr::AttrRef>())
            return eval_attribute(*ref);
        return eval_call(*e.as<Expr::Call>());
    }

    Value eval_attribute(const Expr::AttrRef& ref) {
        if (ref.entity == "block") {
            if (!curBlock)
                throw EvalError(EvalError::Category::Scope, "no block in scope");
            const Block& b = *curBlock;
            if (ref.attr == "number") return Value::uint_(BigInt(b.number));
            if (ref.attr == "hash") return Value::word(b.hash);
            if (ref.attr == "parentHash") return Value::word(b.parentHash);
            if (ref.attr == "timestamp") return Value::uint_(BigInt(b.timestamp));
            if (ref.attr == "miner") return Value::address(b.miner);
            if (ref.attr == "difficulty") return Value::uint_(b.difficulty);
            if (ref.attr == "gasUsed") return Value::uint_(b.gasUsed);
            if (ref.attr == "gasLimit") return Value::uint_(b.gasLimit);
            if (ref.attr == "transactionCount")
                return Value::uint_(BigInt(b.transactions.size()));
        }
        if (ref.entity == "tx") {
            if (!curTx)
                throw EvalError(EvalError::Category::Scope, "no transaction in scope");
            const Transaction& tx = *curTx;
            if (ref.attr == "hash") return Value::word(tx.hash);
            if (ref.attr == "blockNumber") return Value::uint_(BigInt(tx.blockNumber));
            if (ref.attr == "index") return Value::uint_(BigInt(tx.index));
            if (ref.attr == "from") return Value::address(tx.from);
            if (ref.attr == "to") {
                if (!tx.to)
                    throw EvalError(EvalError::Category::Data,
                                    "transaction creates a contract and has no recipient");
                return Value::address(*tx.to);
            }
            if (ref.attr == "value") return Value::uint_(tx.value);
            if (ref.attr == "gasPrice") return Value::uint_(tx.gasPrice);
            if (ref.attr == "gasUsed") return Value::uint_(tx.gasUsed);
            if (ref.attr == "status") return Value::boolean(tx.status);
            if (ref.attr == "isCreation") return Value::boolean(!tx.to.has_value());
        }
        if (ref.entity == "log") {
            if (!curLog)
                throw EvalError(EvalError::Category::Scope, "no log entry in scope");
            const LogEntry& log = *curLog;
            if (ref.attr == "address") return Value::address(log.address);
            if (ref.attr == "logIndex") return Value::uint_(BigInt(log.logIndex));
            if (ref.attr == "transactionHash") return Value::word(log.transactionHash);
        }
        throw EvalError(EvalError::Category::Scope,
                        "unknown attribute " + ref.entity + "." + ref.attr);
    }

    Value eval_call(const Expr::Call& call) {
        // boolean operators short-circuit
        if (call.name == "and" && call.args.size() == 2) {
            if (!eval(call.args[0]).as_bool())
                return Value::boolean(false);
            return Value::boolean(eval(call.args[1]).as_bool());
        }
        if (call.name == "or" && call.args.size() == 2) {
            if (eval(call.args[0]).as_bool())
                return Value::boolean(true);
            return Value::boolean(eval(call.args[1]).as_bool());
        }
        if (call.name == "mapValue" || call.name == "unmapValue") {
            const auto& dict = dictionaries.at(call.args[0].as<Expr::VarRef>()->name);
            if (call.name == "mapValue") {
                Value source = coerce(eval(call.args[1]), dict.sourceType);
                return Value::uint_(dict.encode(source), dict.codeType.width);
            }
            Value code = coerce(eval(call.args[1]), dict.codeType);
            return dict.decode(code.as_int());
        }
        if (call.name == "unpackBits") {
            const auto& mapping = bitmappings.at(call.args[0].as<Expr::VarRef>()->name);
            const std::string& fieldName = call.args[1].as<Expr::StringLit>()->value;
            const BitMapping::Field* field = mapping.find_field(fieldName);
            if (!field)
                throw EvalError(EvalError::Category::Scope,
                                "no field '" + fieldName + "' in bit mapping " + mapping.name);
            Value packed = coerce(eval(call.args[2]), ValueType::uint_());
            BigInt raw =
                (packed.as_int() >> field->fromBit) & ((BigInt(1) << field->bitLength) - 1);
            if (field->viaDict)
                return dictionaries.at(*field->viaDict).decode(raw);
            return Value::uint_(raw);
        }
        std::vector<Value> args;
        args.reserve(call.args.size());
        for (const auto& arg : call.args)
            args.push_back(eval(arg));
        return registry.apply(call.name, args);
    }

    // ---- emission -----------------------------------------------------------

    Provenance here() const {
        Provenance p;
        p.block = curBlock ? curBlock->number : 0;
        p.txIndex = provTxIndex;
        p.logIndex = provLogIndex;
        return p;
    }

    void record_incident(EvalError::Category category, const std::string& message) {
        const char* label = category == EvalError::Category::Type         ? "type"
                            : category == EvalError::Category::Scope      ? "scope"
                            : category == EvalError::Category::Arithmetic ? "arithmetic"
                                                                          : "data";
        summary.errorsEncountered.push_back(RuntimeIncident{
            curBlock ? curBlock->number : 0, provTxIndex, provLogIndex, label, message});
    }

    /// Runs an entity body; on an evaluation failure records the incident,
    /// unwinds the scope stack to where it was, and lets the caller continue
    /// with the next entity. Transport, node-decode and sink errors pass
    /// through untouched.
    template <typename F> void guarded(F&& body) {
        std::size_t baseline = scopes.size();
        try {
            body();
        } catch (const EvalError& e) {
            record_incident(e.category, e.what());
        } catch (const CallReverted& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const TopicMismatch& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const DataUnderflow& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const OffsetOutOfBounds& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const TypeMismatch& e) {
            record_incident(EvalError::Category::Type, e.what());
        } catch (const ArityMismatch& e) {
            record_incident(EvalError::Category::Type, e.what());
        } catch (const UnknownCode& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const UnknownSource& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const FieldOutOfRange& e) {
            record_incident(EvalError::Category::Data, e.what());
        } catch (const MissingField& e) {
            record_incident(EvalError::Category::Data, e.what());
        }
        while (scopes.size() > baseline)
            scopes.pop_back();
    }

    std::string render_template(const Template& tmpl) {
        std::string out;
        for (const auto& part : tmpl.parts) {
            if (part.isExpr)
                out += eval(*part.expr).render();
            else
                out += part.text;
        }
        return out;
    }

    XesAttribute resolve_xes_attr(const XesAttr& attr) {
        Value v = eval(attr.value);
        XesAttrType type = attr.type;
        if (type == XesAttrType::Auto) {
            switch (v.type().kind) {
            case ValueType::Kind::String: type = XesAttrType::String; break;
            case ValueType::Kind::Bool: type = XesAttrType::Boolean; break;
            case ValueType::Kind::Uint:
            case ValueType::Kind::Int: type = XesAttrType::Int; break;
            default: type = XesAttrType::String; break;
            }
        }
        switch (type) {
        case XesAttrType::Date: {
            const BigInt& secs = v.as_int();
            if (secs < 0 || secs > BigInt(UINT64_MAX))
                throw EvalError(EvalError::Category::Data,
                                "timestamp " + secs.str() + " out of range");
            return {attr.key, "date", iso8601_utc(secs.convert_to<std::uint64_t>())};
        }
        case XesAttrType::Int: {
            const BigInt& n = v.as_int();
            if (n < kInt64Min || n > kInt64Max)
                throw EvalError(EvalError::Category::Data,
                                "value " + n.str() + " does not fit an XES int");
            return {attr.key, "int", n.str()};
        }
        case XesAttrType::Float:
            return {attr.key, "float", v.as_int().str() + ".0"};
        case XesAttrType::Boolean:
            return {attr.key, "boolean", v.as_bool() ? "true" : "false"};
        case XesAttrType::Id:
            return {attr.key, "id", v.render()};
        default:
            return {attr.key, "string", v.render()};
        }
    }

    // ---- statement execution ------------------------------------------------

    void exec_body(const std::vector<Stmt>& body) {
        for (const auto& stmt : body)
            exec_stmt(stmt);
    }

    void exec_stmt(const Stmt& stmt) {
        if (const auto* decl = stmt.as<VarDecl>()) {
            bind(decl->name, decl->type, coerce(eval(decl->init), decl->type));
        } else if (const auto* assign = stmt.as<Assignment>()) {
            exec_assignment(*assign);
        } else if (const auto* emit = stmt.as<EmitLog>()) {
            sinks.emit_log_line(emit->output, here(), render_template(emit->tmpl));
        } else if (const auto* emit = stmt.as<EmitCsv>()) {
            std::map<std::string, std::string> cells;
            for (const auto& [name, expr] : emit->columns)
                cells[name] = eval(expr).render();
            sinks.emit_csv_row(emit->table, cells);
        } else if (const auto* emit = stmt.as<EmitXes>()) {
            Value traceId = eval(emit->traceId);
            std::vector<XesAttribute> attrs;
            attrs.reserve(emit->attrs.size());
            for (const auto& attr : emit->attrs)
                attrs.push_back(resolve_xes_attr(attr));
            if (emit->trace)
                sinks.emit_xes_trace_attrs(emit->output, traceId, attrs);
            else
                sinks.emit_xes_event(emit->output, traceId, attrs);
        } else if (const auto* filter = stmt.as<FilterNode>()) {
            exec_filter(*filter);
        }
    }

    void exec_assignment(const Assignment& assign) {
        auto [scopeIdx, bindingIdx] = find_binding(assign.name);
        Binding& binding = scopes[scopeIdx][bindingIdx];
        Value v = coerce(eval(assign.value), binding.type);
        // address rebinds from inside a transaction take effect with the
        // next entity (its tx-boundary commit), not mid-transaction
        bool deferred = binding.type.kind == ValueType::Kind::Address && txBoundary &&
                        scopeIdx < txBoundaryDepth;
        if (deferred)
            staged.push_back(StagedWrite{scopeIdx, bindingIdx, std::move(v)});
        else
            binding.value = std::move(v);
    }

    void exec_filter(const FilterNode& f) {
        switch (f.kind) {
        case FilterKind::Block:
            break; // roots are driven by the block loop; never nested
        case FilterKind::Transaction:
            exec_tx_filter(f);
            break;
        case FilterKind::LogEntry:
            exec_log_filter(f);
            break;
        case FilterKind::State:
            exec_state_filter(f);
            break;
        case FilterKind::Generic:
            if (eval(*f.predicate).as_bool()) {
                scopes.emplace_back();
                exec_body(f.body);
                scopes.pop_back();
            }
            break;
        }
    }

    // nullopt = ANY (no constraint)
    std::optional<std::vector<Address>> eval_address_list(const AddressList& list) {
        if (list.any)
            return std::nullopt;
        std::vector<Address> out;
        out.reserve(list.items.size());
        for (const auto& expr : list.items)
            out.push_back(coerce(eval(expr), ValueType::address()).as_address());
        return out;
    }

    static bool address_in(const std::optional<std::vector<Address>>& set, const Address& a) {
        if (!set)
            return true;
        return std::find(set->begin(), set->end(), a) != set->end();
    }

    void exec_tx_filter(const FilterNode& f) {
        for (const auto& tx : curBlock->transactions) {
            // parameters are re-evaluated per transaction so address
            // variables rebound earlier in the block take effect here
            auto senders = eval_address_list(f.senders);
            auto recipients = eval_address_list(f.recipients);
            if (!address_in(senders, tx.from))
                continue;
            if (recipients && (!tx.to || !address_in(recipients, *tx.to)))
                continue;
            ++summary.transactionsMatched;
            curTx = &tx;
            provTxIndex = tx.index;
            txBoundary = true;
            txBoundaryDepth = scopes.size();
            guarded([&] {
                scopes.emplace_back();
                exec_body(f.body);
                scopes.pop_back();
            });
            curTx = nullptr;
            provTxIndex.reset();
            txBoundary = false;
            commit_staged();
        }
    }

    void exec_log_filter(const FilterNode& f) {
        abi::EventSpec spec = event_spec_of(f.signature);
        Word32 topic0 = abi::event_topic0(spec);
        if (curTx) {
            auto contracts = eval_address_list(f.contracts);
            for (const auto& log : curTx->logs)
                try_log_entry(f, spec, topic0, contracts, log);
            return;
        }
        // directly under the block filter: iterate transactions ourselves,
        // committing staged address updates at each transaction boundary
        for (const auto& tx : curBlock->transactions) {
            provTxIndex = tx.index;
            txBoundary = true;
            txBoundaryDepth = scopes.size();
            auto contracts = eval_address_list(f.contracts);
            for (const auto& log : tx.logs)
                try_log_entry(f, spec, topic0, contracts, log);
            txBoundary = false;
            provTxIndex.reset();
            commit_staged();
        }
    }

    void try_log_entry(const FilterNode& f, const abi::EventSpec& spec, const Word32& topic0,
                       const std::optional<std::vector<Address>>& contracts, const LogEntry& log) {
        if (log.topics.empty() || log.topics[0] != topic0)
            return;
        if (!address_in(contracts, log.address))
            return;
        ++summary.logEntriesMatched;
        provLogIndex = log.logIndex;
        curLog = &log;
        guarded([&] {
            auto decoded = abi::decode_log(log, spec);
            scopes.emplace_back();
            for (const auto& param : decoded) {
                ValueType bound = param.hashed ? ValueType::fixed_bytes(32) : param.value.type();
                scopes.back().push_back(Binding{param.name, bound, param.value});
            }
            exec_body(f.body);
            scopes.pop_back();
        });
        curLog = nullptr;
        provLogIndex.reset();
    }

    void exec_state_filter(const FilterNode& f) {
        Address contract = coerce(eval(*f.contract), ValueType::address()).as_address();
        scopes.emplace_back();
        for (const auto& member : f.members) {
            std::vector<Value> args;
            std::vector<ValueType> argTypes;
            for (const auto& argExpr : member.args) {
                args.push_back(eval(argExpr));
                argTypes.push_back(args.back().type());
            }
            abi::FunctionSpec spec{member.name, argTypes, {member.type}};
            auto calldata = abi::encode_call(spec, args);
            // cache key includes the block hash so reorged blocks re-query
            std::string key = render_word32(curBlock->hash) + "|" + render_address(contract) +
                              "|" + render_data(calldata);
            auto it = callCache.find(key);
            if (it == callCache.end()) {
                auto result = client.call_contract(contract, calldata, curBlock->number);
                it = callCache.emplace(key, std::move(result)).first;
            }
            auto values = abi::decode_return(it->second, {member.type});
            scopes.back().push_back(Binding{member.name, member.type, values.at(0)});
        }
        exec_body(f.body);
        scopes.pop_back();
    }

    // ---- block processing ----------------------------------------------------

    Block fetch_for_run(std::uint64_t number) {
        if (!fastPath)
            return client.fetch_block(number);
        Block b = client.fetch_block_shallow(number);
        if (!fastPathTopics.empty()) {
            auto candidates =
                client.transactions_with_logs(number, fastPathAddresses, fastPathTopics);
            for (auto& tx : b.transactions)
                if (std::find(candidates.begin(), candidates.end(), tx.hash) != candidates.end())
                    client.merge_receipt(tx);
        }
        check_block_invariants(b);
        return b;
    }

    void process_block(const Block& b, const std::vector<ResolvedRange>& ranges) {
        ++summary.blocksProcessed;
        curBlock = &b;
        for (const auto& range : ranges) {
            if (b.number < range.from || (range.to && b.number > *range.to))
                continue;
            guarded([&] {
                scopes.emplace_back();
                exec_body(range.root->body);
                scopes.pop_back();
            });
        }
        curBlock = nullptr;
    }
};

} // namespace

std::map<std::string, std::vector<std::string>> csv_table_columns(const Manifest& m) {
    std::map<std::string, std::vector<std::string>> out;
    walk_manifest(m, [&](const Stmt& stmt) {
        const auto* emit = stmt.as<EmitCsv>();
        if (!emit || out.count(emit->table))
            return;
        std::vector<std::string> columns;
        for (const auto& [name, expr] : emit->columns)
            columns.push_back(name);
        out[emit->table] = std::move(columns);
    });
    return out;
}

std::map<std::string, ast::OutputKind> collect_outputs(const Manifest& m) {
    std::map<std::string, ast::OutputKind> out;
    for (const auto* decl : m.outputs())
        out.emplace(decl->name, decl->kind);
    walk_manifest(m, [&](const Stmt& stmt) {
        if (const auto* emit = stmt.as<EmitLog>())
            out.emplace(emit->output, OutputKind::Log);
        else if (const auto* emit = stmt.as<EmitCsv>())
            out.emplace(emit->table, OutputKind::Csv);
        else if (const auto* emit = stmt.as<EmitXes>())
            out.emplace(emit->output, OutputKind::Xes);
    });
    return out;
}

bool selects_streaming(const Manifest& m, const ExtractionOptions& options) {
    if (options.mode == ExtractionOptions::Mode::Stream)
        return true;
    if (options.mode == ExtractionOptions::Mode::Batch)
        return false;
    if (options.toOverride)
        return false;
    for (const auto& item : m.items)
        if (const auto* stmt = std::get_if<Stmt>(&item))
            if (const auto* f = stmt->as<FilterNode>())
                if (f->kind == FilterKind::Block && f->toSpec.kind == BlockSpec::Kind::Continuous)
                    return true;
    return false;
}

std::string ExtractionSummary::render() const {
    std::string out;
    out += "blocks processed:     " + std::to_string(blocksProcessed) + "\n";
    out += "transactions matched: " + std::to_string(transactionsMatched) + "\n";
    out += "log entries matched:  " + std::to_string(logEntriesMatched) + "\n";
    out += "emissions:\n";
    for (const auto& [name, count] : emissionsPerSink)
        out += "  " + name + ": " + std::to_string(count) + "\n";
    out += "errors: " + std::to_string(errorsEncountered.size()) + "\n";
    for (const auto& incident : errorsEncountered) {
        out += "  block " + std::to_string(incident.block);
        if (incident.txIndex)
            out += " tx " + std::to_string(*incident.txIndex);
        if (incident.logIndex)
            out += " log " + std::to_string(*incident.logIndex);
        out += " [" + incident.category + "] " + incident.message + "\n";
    }
    if (aborted)
        out += "aborted: " + abortReason + "\n";
    return out;
}

std::string ExtractionSummary::render_json() const {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& incident : errorsEncountered) {
        nlohmann::json obj = {
            {"block", incident.block},
            {"category", incident.category},
            {"message", incident.message},
        };
        if (incident.txIndex)
            obj["txIndex"] = *incident.txIndex;
        if (incident.logIndex)
            obj["logIndex"] = *incident.logIndex;
        errors.push_back(obj);
    }
    nlohmann::json out = {
        {"blocksProcessed", blocksProcessed},
        {"transactionsMatched", transactionsMatched},
        {"logEntriesMatched", logEntriesMatched},
        {"emissionsPerSink", emissionsPerSink},
        {"errors", errors},
        {"aborted", aborted},
    };
    if (aborted)
        out["abortReason"] = abortReason;
    return out.dump(2) + "\n";
}

ExtractionSummary run(const Manifest& m, rpc::NodeClient& client, SinkSet& sinks,
                      const ExtractionOptions& options) {
    ValidationReport report = validate(m, std::nullopt, *options.registry);
    if (!report.ok())
        throw Error("manifest failed validation:\n" + report.render());

    Runtime rt(m, client, sinks, options);
    rt.compile();

    bool streaming = selects_streaming(m, options);

    auto finish = [&](const std::string& reason) {
        rt.summary.emissionsPerSink = sinks.emission_counts();
        if (!reason.empty()) {
            rt.summary.aborted = true;
            rt.summary.abortReason = reason;
        }
        return std::move(rt.summary);
    };

    std::optional<std::uint64_t> head;
    auto need_head = [&]() -> std::uint64_t {
        if (!head)
            head = client.latest_block_number();
        return *head;
    };

    std::vector<ResolvedRange> ranges;
    for (const auto& item : m.items) {
        const auto* stmt = std::get_if<Stmt>(&item);
        const FilterNode* f = stmt ? stmt->as<FilterNode>() : nullptr;
        if (!f || f->kind != FilterKind::Block)
            continue;
        ResolvedRange range;
        range.root = f;
        auto resolve = [&](const BlockSpec& spec) -> std::optional<std::uint64_t> {
            switch (spec.kind) {
            case BlockSpec::Kind::Number:
                if (spec.number < 0 || spec.number > BigInt(UINT64_MAX))
                    throw RangeUnresolvable("block number " + spec.number.str() + " out of range");
                return spec.number.convert_to<std::uint64_t>();
            case BlockSpec::Kind::Earliest:
                return 0;
            case BlockSpec::Kind::Current:
                return need_head();
            case BlockSpec::Kind::Continuous:
                return std::nullopt;
            }
            return std::nullopt;
        };
        range.from = resolve(f->fromSpec).value_or(0);
        range.to = resolve(f->toSpec);
        if (options.fromOverride)
            range.from = *options.fromOverride;
        if (options.toOverride)
            range.to = *options.toOverride;
        else if (!streaming && !range.to)
            range.to = need_head(); // batch forced over a CONTINUOUS manifest
        ranges.push_back(range);
    }
    if (ranges.empty())
        return finish("");

    std::uint64_t globalFrom = UINT64_MAX;
    std::optional<std::uint64_t> globalTo = 0;
    for (const auto& range : ranges) {
        globalFrom = std::min(globalFrom, range.from);
        if (!range.to)
            globalTo = std::nullopt;
        else if (globalTo && *range.to > *globalTo)
            globalTo = *range.to;
    }
    if (!streaming && globalTo && globalFrom > *globalTo)
        throw RangeUnresolvable("resolved range is empty: " + std::to_string(globalFrom) + " > " +
                                std::to_string(*globalTo));

    try {
        // manifest-level statements run once, in order
        rt.scopes.emplace_back();
        for (const auto& item : m.items) {
            if (const auto* stmt = std::get_if<Stmt>(&item)) {
                if (const auto* decl = stmt->as<VarDecl>())
                    rt.bind(decl->name, decl->type, rt.coerce(rt.eval(decl->init), decl->type));
                else if (const auto* assign = stmt->as<Assignment>())
                    rt.exec_assignment(*assign);
            }
        }

        if (!streaming) {
            for (std::uint64_t n = globalFrom; n <= *globalTo; ++n) {
                Block b = rt.fetch_for_run(n);
                rt.process_block(b, ranges);
            }
            sinks.flush_batch();
            return finish("");
        }

        // streaming: catch up to the head, then poll for new blocks and
        // hash changes at already-processed heights
        std::map<std::uint64_t, Word32> processedHashes;
        std::optional<std::uint64_t> lastProcessed;
        auto process_one = [&](std::uint64_t n) {
            Block b = rt.fetch_for_run(n);
            rt.process_block(b, ranges);
            sinks.flush_block(n);
            processedHashes[n] = b.hash;
        };
        std::uint64_t target = need_head();
        if (globalTo)
            target = std::min(target, *globalTo);
        for (std::uint64_t n = globalFrom; n <= target; ++n) {
            process_one(n);
            lastProcessed = n;
        }
        std::uint64_t polls = 0;
        while (true) {
            if (globalTo && lastProcessed && *lastProcessed >= *globalTo)
                break;
            if (options.maxPolls && polls >= options.maxPolls)
                break;
            std::this_thread::sleep_for(options.pollInterval);
            ++polls;
            std::uint64_t newHead = client.latest_block_number();
            for (auto& [height, storedHash] : processedHashes) {
                Word32 current = client.block_hash_at(height);
                if (current != storedHash)
                    process_one(height); // rewrites that block's files
            }
            std::uint64_t upper = newHead;
            if (globalTo)
                upper = std::min(upper, *globalTo);
            std::uint64_t next = lastProcessed ? *lastProcessed + 1 : globalFrom;
            for (std::uint64_t n = next; n <= upper; ++n) {
                process_one(n);
                lastProcessed = n;
            }
        }
        return finish("");
    } catch (const SinkError& e) {
        return finish(e.what());
    } catch (const TransportError& e) {
        return finish(e.what());
    } catch (const RpcError& e) {
        return finish(e.what());
    } catch (const BlockNotFound& e) {
        return finish(e.what());
    } catch (const DecodeError& e) {
        return finish(e.what());
    } catch (const EvalError& e) {
        rt.record_incident(e.category, e.what());
        return finish(e.what());
    }
}

} // namespace chainlog
