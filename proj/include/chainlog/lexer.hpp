#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chainlog/ast.hpp"

namespace chainlog::ast {

enum class TokenType {
    Ident,
    Int,    // decimal literal
    Hex,    // 0x...
    String, // double-quoted, escapes resolved
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
    Dot,
    Assign, // =
    Arrow,  // ->
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Eq,  // ==
    Neq, // !=
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    End,
    Bad, // lexically invalid input; text carries the diagnostic
};

struct Token {
    TokenType type = TokenType::End;
    std::string text;  // raw text (Ident) or diagnostic (Bad) or unescaped value (String)
    BigInt intValue;   // Int
    Span span;
};

/// Tokenizes the whole input. Never throws: invalid characters and
/// unterminated strings become Bad tokens. The last token is always End.
std::vector<Token> lex(std::string_view text);

} // namespace chainlog::ast
