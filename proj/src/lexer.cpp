#include "chainlog/lexer.hpp"

namespace chainlog::ast {

namespace {

bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
}

bool digit(char c) {
    return c >= '0' && c <= '9';
}

bool hex_digit(char c) {
    return digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;
    unsigned line = 1, col = 1;
    std::vector<Token> out;

    bool eof() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    Span start_span() const { return Span{pos, 0, line, col}; }

    void finish(Token t, const Span& start) {
        t.span = start;
        t.span.length = pos - start.offset;
        out.push_back(std::move(t));
    }

    void push(TokenType type, const Span& start, std::string text = {}) {
        finish(Token{type, std::move(text), 0, {}}, start);
    }

    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    void lex_string() {
        Span start = start_span();
        advance(); // opening quote
        std::string value;
        while (true) {
            if (eof() || peek() == '\n') {
                push(TokenType::Bad, start, "unterminated string literal");
                return;
            }
            char c = peek();
            if (c == '"') {
                advance();
                finish(Token{TokenType::String, std::move(value), 0, {}}, start);
                return;
            }
            if (c == '\\') {
                advance();
                if (eof()) {
                    push(TokenType::Bad, start, "unterminated string literal");
                    return;
                }
                char esc = peek();
                switch (esc) {
                case '"': value.push_back('"'); break;
                case '\\': value.push_back('\\'); break;
                case 'n': value.push_back('\n'); break;
                case 't': value.push_back('\t'); break;
                case 'r': value.push_back('\r'); break;
                default:
                    push(TokenType::Bad, start, std::string("unknown escape \\") + esc);
                    advance();
                    return;
                }
                advance();
                continue;
            }
            value.push_back(c);
            advance();
        }
    }

    void lex_number() {
        Span start = start_span();
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance();
            advance();
            std::string digits;
            while (!eof() && hex_digit(peek())) {
                digits.push_back(peek());
                advance();
            }
            if (digits.empty()) {
                push(TokenType::Bad, start, "hex literal needs digits after 0x");
                return;
            }
            finish(Token{TokenType::Hex, std::move(digits), 0, {}}, start);
            return;
        }
        BigInt value = 0;
        while (!eof() && digit(peek())) {
            value *= 10;
            value += peek() - '0';
            advance();
        }
        if (!eof() && ident_start(peek())) {
            push(TokenType::Bad, start, "identifier cannot start with a digit");
            return;
        }
        finish(Token{TokenType::Int, {}, value, {}}, start);
    }

    void run() {
        while (true) {
            skip_trivia();
            if (eof())
                break;
            Span start = start_span();
            char c = peek();
            if (c == '"') {
                lex_string();
                continue;
            }
            if (digit(c)) {
                lex_number();
                continue;
            }
            if (ident_start(c)) {
                std::string word;
                while (!eof() && ident_char(peek())) {
                    word.push_back(peek());
                    advance();
                }
                finish(Token{TokenType::Ident, std::move(word), 0, {}}, start);
                continue;
            }
            auto two = [&](char second) { return peek(1) == second; };
            switch (c) {
            case '(': advance(); push(TokenType::LParen, start); break;
            case ')': advance(); push(TokenType::RParen, start); break;
            case '{': advance(); push(TokenType::LBrace, start); break;
            case '}': advance(); push(TokenType::RBrace, start); break;
            case '[': advance(); push(TokenType::LBracket, start); break;
            case ']': advance(); push(TokenType::RBracket, start); break;
            case ',': advance(); push(TokenType::Comma, start); break;
            case ';': advance(); push(TokenType::Semicolon, start); break;
            case ':': advance(); push(TokenType::Colon, start); break;
            case '.': advance(); push(TokenType::Dot, start); break;
            case '+': advance(); push(TokenType::Plus, start); break;
            case '*': advance(); push(TokenType::Star, start); break;
            case '/': advance(); push(TokenType::Slash, start); break;
            case '%': advance(); push(TokenType::Percent, start); break;
            case '-':
                advance();
                if (!eof() && peek() == '>') {
                    advance();
                    push(TokenType::Arrow, start);
                } else {
                    push(TokenType::Minus, start);
                }
                break;
            case '=':
                advance();
                if (!eof() && peek() == '=') {
                    advance();
                    push(TokenType::Eq, start);
                } else {
                    push(TokenType::Assign, start);
                }
                break;
            case '!':
                advance();
                if (!eof() && peek() == '=') {
                    advance();
                    push(TokenType::Neq, start);
                } else {
                    push(TokenType::Bang, start);
                }
                break;
            case '<':
                advance();
                if (!eof() && peek() == '=') {
                    advance();
                    push(TokenType::Le, start);
                } else {
                    push(TokenType::Lt, start);
                }
                break;
            case '>':
                advance();
                if (!eof() && peek() == '=') {
                    advance();
                    push(TokenType::Ge, start);
                } else {
                    push(TokenType::Gt, start);
                }
                break;
            case '&':
                advance();
                if (!eof() && peek() == '&') {
                    advance();
                    push(TokenType::AndAnd, start);
                } else {
                    push(TokenType::Bad, start, "single '&' (use &&)");
                }
                break;
            case '|':
                advance();
                if (!eof() && peek() == '|') {
                    advance();
                    push(TokenType::OrOr, start);
                } else {
                    push(TokenType::Bad, start, "single '|' (use ||)");
                }
                break;
            default:
                advance();
                push(TokenType::Bad, start, std::string("unexpected character '") + c + "'");
                break;
            }
        }
        Span end{pos, 0, line, col};
        push(TokenType::End, end);
    }
};

} // namespace

std::vector<Token> lex(std::string_view text) {
    Lexer lexer{text};
    lexer.run();
    return std::move(lexer.out);
}

} // namespace chainlog::ast
