#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainlog/ast.hpp"
#include "chainlog/operators.hpp"

namespace chainlog {

struct Finding {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code; // E_NESTING, E_TYPE, ..., W_UNUSED, ...
    ast::Span span;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const; // extraction/generation may proceed iff true
    std::size_t error_count() const;
    std::size_t warning_count() const;

    /// One line per finding: "<severity> <code> <line>:<col> <message>".
    std::string render() const;
    /// Same fields as JSON: {"findings":[{severity, code, line, col, message}]}.
    std::string render_json() const;
};

/// Semantic analysis: typing, scoping, nesting and declaration rules.
/// Collects every detectable problem instead of stopping at the first.
/// `chainHead`, when known, enables the range-beyond-head warning.
/// `registry` supplies operator signatures (defaults to the built-ins).
ValidationReport validate(const ast::Manifest& m,
                          std::optional<std::uint64_t> chainHead = std::nullopt,
                          const OperatorRegistry& registry = OperatorRegistry::builtins());

/// Typing of entity attributes (block.*, tx.*, log.*); nullopt when the
/// entity/attribute pair is unknown.
std::optional<ValueType> attribute_type(const std::string& entity, const std::string& attr);

/// Infers the type of an expression in the scope of `m` assuming it appears
/// directly inside the given filter kinds. Intended for tests and tooling;
/// returns nullopt (with findings) when the expression does not type.
struct TypeEnvironment;
std::optional<ValueType> type_of(const ast::Expr& expr, TypeEnvironment& env);

/// Scope/typing context shared by validate() and type_of(). Scopes form a
/// stack; redeclaring any visible name is an error.
struct TypeEnvironment {
    struct VarInfo {
        ValueType type;
        ast::Span declSpan;
        bool assignable = false; // VarDecl-introduced (not an event/member binding)
        bool hashed = false;     // indexed dynamic event parameter
        bool used = false;
    };

    const OperatorRegistry* registry = &OperatorRegistry::builtins();
    const ast::Manifest* manifest = nullptr;
    std::vector<std::vector<std::pair<std::string, VarInfo>>> scopes;
    bool blockScope = false, txScope = false, logScope = false;
    std::vector<Finding>* findings = nullptr; // where type errors are recorded

    void push_scope() { scopes.emplace_back(); }
    void pop_scope() { scopes.pop_back(); }
    VarInfo* lookup(const std::string& name);
    bool declare(const std::string& name, VarInfo info); // false if already visible
};

} // namespace chainlog
