#include "chainlog/render.hpp"

#include <cctype>

namespace chainlog::ast {

namespace {

std::string escape_string(const std::string& raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    return out + "\"";
}

bool plain_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

struct Renderer {
    std::string out;
    int depth = 0;

    void indent() { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

    void line(const std::string& text) {
        indent();
        out += text;
        out += "\n";
    }

    std::string block_spec(const BlockSpec& spec) {
        switch (spec.kind) {
        case BlockSpec::Kind::Number:
            return spec.number.str();
        case BlockSpec::Kind::Earliest:
            return "EARLIEST";
        case BlockSpec::Kind::Current:
            return "CURRENT";
        case BlockSpec::Kind::Continuous:
            return "CONTINUOUS";
        }
        return "";
    }

    std::string address_list(const AddressList& list) {
        if (list.any)
            return "ANY";
        std::string s;
        for (std::size_t i = 0; i < list.items.size(); ++i) {
            if (i)
                s += ", ";
            s += render_expr(list.items[i]);
        }
        return s;
    }

    std::string signature(const EventSignatureDecl& sig) {
        std::string s = sig.name + "(";
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (i)
                s += ", ";
            const auto& p = sig.params[i];
            s += p.type.name();
            if (p.indexed)
                s += " indexed";
            s += " " + p.name;
        }
        return s + ")";
    }

    std::string member(const MemberSpec& m) {
        std::string s = m.type.name() + " " + m.name;
        if (m.hasArgs) {
            s += "(";
            for (std::size_t i = 0; i < m.args.size(); ++i) {
                if (i)
                    s += ", ";
                s += render_expr(m.args[i]);
            }
            s += ")";
        }
        return s;
    }

    std::string template_text(const Template& tmpl) {
        std::string raw;
        for (const auto& part : tmpl.parts) {
            if (part.isExpr) {
                raw += "{" + render_expr(*part.expr) + "}";
            } else {
                for (char c : part.text) {
                    if (c == '{')
                        raw += "{{";
                    else if (c == '}')
                        raw += "}}";
                    else
                        raw.push_back(c);
                }
            }
        }
        return escape_string(raw);
    }

    std::string xes_type_name(XesAttrType t) {
        switch (t) {
        case XesAttrType::String: return "string ";
        case XesAttrType::Date: return "date ";
        case XesAttrType::Int: return "int ";
        case XesAttrType::Float: return "float ";
        case XesAttrType::Boolean: return "boolean ";
        case XesAttrType::Id: return "id ";
        case XesAttrType::Auto: return "";
        }
        return "";
    }

    void filter(const FilterNode& f) {
        std::string head;
        switch (f.kind) {
        case FilterKind::Block:
            head = "BLOCKS (" + block_spec(f.fromSpec) + ") (" + block_spec(f.toSpec) + ")";
            break;
        case FilterKind::Transaction:
            head = "TRANSACTIONS (" + address_list(f.senders) + ") (" + address_list(f.recipients) +
                   ")";
            break;
        case FilterKind::LogEntry:
            head = "LOG ENTRIES (" + address_list(f.contracts) + ") (" + signature(f.signature) + ")";
            break;
        case FilterKind::State: {
            head = "SMART CONTRACT (" + render_expr(*f.contract) + ") (";
            for (std::size_t i = 0; i < f.members.size(); ++i) {
                if (i)
                    head += ", ";
                head += member(f.members[i]);
            }
            head += ")";
            break;
        }
        case FilterKind::Generic:
            head = "IF (" + render_expr(*f.predicate) + ")";
            break;
        }
        line(head + " {");
        ++depth;
        for (const auto& stmt : f.body)
            statement(stmt);
        --depth;
        line("}");
    }

    void statement(const Stmt& stmt) {
        if (const auto* decl = stmt.as<VarDecl>()) {
            line(decl->type.name() + " " + decl->name + " = " + render_expr(decl->init) + ";");
        } else if (const auto* assign = stmt.as<Assignment>()) {
            line(assign->name + " = " + render_expr(assign->value) + ";");
        } else if (const auto* log = stmt.as<EmitLog>()) {
            line("EMIT LOG LINE (" + log->output + ", " + template_text(log->tmpl) + ");");
        } else if (const auto* csv = stmt.as<EmitCsv>()) {
            std::string s = "EMIT CSV ROW (" + csv->table;
            for (const auto& [name, expr] : csv->columns)
                s += ", " + name + " = " + render_expr(expr);
            line(s + ");");
        } else if (const auto* xes = stmt.as<EmitXes>()) {
            std::string s = std::string("EMIT XES ") + (xes->trace ? "TRACE" : "EVENT") + " (" +
                            xes->output + ", " + render_expr(xes->traceId);
            for (const auto& attr : xes->attrs) {
                std::string key = plain_ident(attr.key) ? attr.key : escape_string(attr.key);
                s += ", " + xes_type_name(attr.type) + key + " = " + render_expr(attr.value);
            }
            line(s + ");");
        } else if (const auto* f = stmt.as<FilterNode>()) {
            filter(*f);
        }
    }

    void dictionary(const DictionarySpec& dict) {
        line("DICTIONARY " + dict.name + " (" + dict.sourceType.name() + " -> " +
             dict.codeType.name() + ") {");
        ++depth;
        for (const auto& entry : dict.entries)
            line(render_expr(entry.source) + ": " + render_expr(entry.code) + ",");
        if (dict.defaultEntry)
            line("default: " + render_expr(dict.defaultEntry->source) + ": " +
                 render_expr(dict.defaultEntry->code));
        --depth;
        line("}");
    }

    void bitmapping(const BitMappingSpec& map) {
        line("BITMAPPING " + map.name + " {");
        ++depth;
        for (const auto& field : map.fields) {
            std::string s = field.name + ": bits(" + std::to_string(field.fromBit) + ", " +
                            std::to_string(field.bitLength) + ")";
            if (field.viaDict)
                s += " via " + *field.viaDict;
            line(s + ";");
        }
        --depth;
        line("}");
    }

    void output(const OutputDecl& decl) {
        const char* kind = decl.kind == OutputKind::Log   ? "LOG"
                           : decl.kind == OutputKind::Csv ? "CSV"
                                                          : "XES";
        line(std::string("OUTPUT ") + kind + " " + decl.name + ";");
    }
};

} // namespace

std::string render_expr(const Expr& e) {
    struct Visitor {
        std::string operator()(const Expr::IntLit& lit) const { return lit.value.str(); }
        std::string operator()(const Expr::HexLit& lit) const {
            return render_data(lit.bytes);
        }
        std::string operator()(const Expr::StringLit& lit) const { return escape_string(lit.value); }
        std::string operator()(const Expr::BoolLit& lit) const { return lit.value ? "true" : "false"; }
        std::string operator()(const Expr::ListLit& lit) const {
            std::string s = "[";
            for (std::size_t i = 0; i < lit.elements.size(); ++i) {
                if (i)
                    s += ", ";
                s += render_expr(lit.elements[i]);
            }
            return s + "]";
        }
        std::string operator()(const Expr::VarRef& ref) const { return ref.name; }
        std::string operator()(const Expr::AttrRef& ref) const { return ref.entity + "." + ref.attr; }
        std::string operator()(const Expr::Call& call) const {
            std::string s = call.name + "(";
            for (std::size_t i = 0; i < call.args.size(); ++i) {
                if (i)
                    s += ", ";
                s += render_expr(call.args[i]);
            }
            return s + ")";
        }
    };
    return std::visit(Visitor{}, e.node);
}

std::string render_manifest(const Manifest& m) {
    Renderer r;
    for (const auto& item : m.items) {
        if (const auto* stmt = std::get_if<Stmt>(&item))
            r.statement(*stmt);
        else if (const auto* dict = std::get_if<DictionarySpec>(&item))
            r.dictionary(*dict);
        else if (const auto* map = std::get_if<BitMappingSpec>(&item))
            r.bitmapping(*map);
        else if (const auto* out = std::get_if<OutputDecl>(&item))
            r.output(*out);
    }
    return r.out;
}

} // namespace chainlog::ast
