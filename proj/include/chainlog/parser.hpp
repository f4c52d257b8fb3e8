#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainlog/ast.hpp"

namespace chainlog::ast {

struct SyntaxError {
    unsigned line = 1;
    unsigned column = 1;
    std::string message;
    std::string expected; // hint: what the parser was looking for

    std::string render() const;
};

struct ParseResult {
    // present iff errors is empty
    std::optional<Manifest> manifest;
    std::vector<SyntaxError> errors;

    bool ok() const { return errors.empty(); }
};

/// Purely syntactic: no name resolution or typing. Recovers at statement
/// boundaries so several errors can be reported per run, and never throws
/// on any byte input.
ParseResult parse_manifest(std::string_view text);

} // namespace chainlog::ast
