#pragma once

#include <string>

#include "chainlog/ast.hpp"

namespace chainlog::ast {

/// Deterministic canonical text for a manifest; parsing the result yields a
/// structurally equal AST. An empty manifest renders as the empty string.
std::string render_manifest(const Manifest& m);

std::string render_expr(const Expr& e);

} // namespace chainlog::ast
