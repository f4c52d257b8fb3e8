#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chainlog/value.hpp"

namespace chainlog::ast {

/// Half-open byte range into the source text plus the 1-based position of
/// its first character.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    unsigned line = 1;
    unsigned column = 1;
};

struct Expr {
    struct IntLit {
        BigInt value;
    };
    // 40 hex digits parse as an address literal, anything else as raw bytes
    struct HexLit {
        std::vector<std::uint8_t> bytes;
        bool isAddress = false;
    };
    struct StringLit {
        std::string value;
    };
    struct BoolLit {
        bool value = false;
    };
    struct ListLit {
        std::vector<Expr> elements;
    };
    struct VarRef {
        std::string name;
    };
    // entity attribute access: block.number, tx.gasPrice, log.address
    struct AttrRef {
        std::string entity;
        std::string attr;
    };
    struct Call {
        std::string name;
        std::vector<Expr> args;
    };

    Span span;
    std::variant<IntLit, HexLit, StringLit, BoolLit, ListLit, VarRef, AttrRef, Call> node;

    template <typename T> const T* as() const { return std::get_if<T>(&node); }
};

/// LOG LINE templates are parsed into alternating literal and expression
/// parts; placeholders are written {name} or {entity.attr}, literal braces
/// as {{ and }}.
struct TemplatePart {
    bool isExpr = false;
    std::string text; // literal chunk when !isExpr
    std::optional<Expr> expr;
};

struct Template {
    Span span;
    std::vector<TemplatePart> parts;
};

struct BlockSpec {
    enum class Kind { Number, Earliest, Current, Continuous };
    Kind kind = Kind::Number;
    BigInt number = 0;
    Span span;
};

struct AddressList {
    bool any = false;
    std::vector<Expr> items;
    Span span;
};

struct EventParamDecl {
    ValueType type;
    bool indexed = false;
    std::string name;
    Span span;
};

struct EventSignatureDecl {
    std::string name;
    std::vector<EventParamDecl> params;
    Span span;
};

/// State filter member: a public variable (no argument list) or function
/// call; the result is bound under the member's name inside the body.
struct MemberSpec {
    ValueType type;
    std::string name;
    bool hasArgs = false;
    std::vector<Expr> args;
    Span span;
};

struct VarDecl {
    ValueType type;
    std::string name;
    Expr init;
    Span span;
};

struct Assignment {
    std::string name;
    Expr value;
    Span span;
};

struct EmitLog {
    std::string output;
    Template tmpl;
    Span span;
};

struct EmitCsv {
    std::string table;
    std::vector<std::pair<std::string, Expr>> columns;
    Span span;
};

enum class XesAttrType { Auto, String, Date, Int, Float, Boolean, Id };

struct XesAttr {
    XesAttrType type = XesAttrType::Auto;
    std::string key;
    Expr value;
    Span span;
};

struct EmitXes {
    bool trace = false; // XES TRACE sets trace-level attributes
    std::string output;
    Expr traceId;
    std::vector<XesAttr> attrs;
    Span span;
};

enum class FilterKind { Block, Transaction, LogEntry, State, Generic };

struct Stmt;

struct FilterNode {
    FilterKind kind = FilterKind::Block;
    Span span;

    BlockSpec fromSpec, toSpec;            // Block
    AddressList senders, recipients;       // Transaction
    AddressList contracts;                 // LogEntry
    EventSignatureDecl signature;          // LogEntry
    std::optional<Expr> contract;          // State
    std::vector<MemberSpec> members;       // State
    std::optional<Expr> predicate;         // Generic

    std::vector<Stmt> body;
};

struct Stmt {
    std::variant<VarDecl, Assignment, EmitLog, EmitCsv, EmitXes, FilterNode> node;

    const Span& span() const;
    template <typename T> const T* as() const { return std::get_if<T>(&node); }
};

struct DictEntry {
    Expr source;
    Expr code;
};

struct DictionarySpec {
    std::string name;
    ValueType sourceType, codeType;
    std::vector<DictEntry> entries;
    // encode fallback code plus the marker value unknown codes decode to
    std::optional<DictEntry> defaultEntry;
    Span span;
};

struct BitField {
    std::string name;
    unsigned fromBit = 0;
    unsigned bitLength = 0;
    std::optional<std::string> viaDict;
    Span span;
};

struct BitMappingSpec {
    std::string name;
    std::vector<BitField> fields;
    Span span;
};

enum class OutputKind { Log, Csv, Xes };

struct OutputDecl {
    OutputKind kind = OutputKind::Log;
    std::string name;
    Span span;
};

using TopItem = std::variant<Stmt, DictionarySpec, BitMappingSpec, OutputDecl>;

/// Converts a literal expression to a Value of the given target type;
/// nullopt when the expression is not a literal or does not fit.
std::optional<Value> literal_value(const Expr& e, const ValueType& target);

struct Manifest {
    std::vector<TopItem> items;

    std::vector<const DictionarySpec*> dictionaries() const;
    std::vector<const BitMappingSpec*> bitmappings() const;
    std::vector<const OutputDecl*> outputs() const;
    const DictionarySpec* find_dictionary(const std::string& name) const;
    const BitMappingSpec* find_bitmapping(const std::string& name) const;
};

} // namespace chainlog::ast
