#include "chainlog/parser.hpp"

#include <algorithm>
#include <cctype>

#include "chainlog/lexer.hpp"

namespace chainlog::ast {

namespace {

// thrown to abandon the statement being parsed; recovery happens at the
// statement loop
struct Bail {};

Span cover(const Span& first, const Span& last) {
    Span s = first;
    s.length = last.offset + last.length - first.offset;
    return s;
}

const char* kXesTypeNames[] = {"string", "date", "int", "float", "boolean", "id"};

struct Parser {
    std::string_view text;
    std::vector<Token> tokens;
    std::size_t pos = 0;
    std::vector<SyntaxError> errors;

    explicit Parser(std::string_view input) : text(input), tokens(lex(input)) {}

    const Token& cur() const { return tokens[pos]; }
    const Token& peek(std::size_t ahead = 1) const {
        return tokens[std::min(pos + ahead, tokens.size() - 1)];
    }
    bool at(TokenType t) const { return cur().type == t; }
    bool at_word(std::string_view w) const {
        return cur().type == TokenType::Ident && cur().text == w;
    }

    Token consume() {
        Token t = cur();
        if (!at(TokenType::End))
            ++pos;
        return t;
    }

    void error_at(const Token& t, std::string message, std::string expected) {
        errors.push_back(
            SyntaxError{t.span.line, t.span.column, std::move(message), std::move(expected)});
    }

    [[noreturn]] void fail(std::string message, std::string expected) {
        if (at(TokenType::Bad))
            error_at(cur(), cur().text, std::move(expected));
        else
            error_at(cur(), std::move(message), std::move(expected));
        throw Bail{};
    }

    std::string describe_current() const {
        switch (cur().type) {
        case TokenType::End:
            return "end of input";
        case TokenType::Ident:
            return "'" + cur().text + "'";
        case TokenType::Int:
            return "number " + cur().intValue.str();
        case TokenType::String:
            return "string literal";
        case TokenType::Hex:
            return "hex literal";
        default:
            return "'" + std::string(text.substr(cur().span.offset, cur().span.length)) + "'";
        }
    }

    Token expect(TokenType t, const char* what) {
        if (!at(t))
            fail("unexpected " + describe_current(), what);
        return consume();
    }

    Token expect_word(const char* word) {
        if (!at_word(word))
            fail("unexpected " + describe_current(), word);
        return consume();
    }

    // Skips to a statement boundary: past the next ';', over a balanced
    // brace block, or up to '}' / end of input.
    void synchronize() {
        while (!at(TokenType::End)) {
            switch (cur().type) {
            case TokenType::Semicolon:
                consume();
                return;
            case TokenType::RBrace:
                return;
            case TokenType::LBrace: {
                int depth = 0;
                while (!at(TokenType::End)) {
                    if (at(TokenType::LBrace))
                        ++depth;
                    if (at(TokenType::RBrace) && --depth == 0) {
                        consume();
                        return;
                    }
                    consume();
                }
                return;
            }
            default:
                consume();
            }
        }
    }

    // ---- expressions ----------------------------------------------------

    Expr make_call(std::string name, std::vector<Expr> args, const Span& span) {
        Expr e;
        e.span = span;
        e.node = Expr::Call{std::move(name), std::move(args)};
        return e;
    }

    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (at(TokenType::OrOr)) {
            consume();
            Expr rhs = parse_and();
            Span s = cover(lhs.span, rhs.span);
            std::vector<Expr> args;
            args.push_back(std::move(lhs));
            args.push_back(std::move(rhs));
            lhs = make_call("or", std::move(args), s);
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_cmp();
        while (at(TokenType::AndAnd)) {
            consume();
            Expr rhs = parse_cmp();
            Span s = cover(lhs.span, rhs.span);
            std::vector<Expr> args;
            args.push_back(std::move(lhs));
            args.push_back(std::move(rhs));
            lhs = make_call("and", std::move(args), s);
        }
        return lhs;
    }

    Expr parse_cmp() {
        Expr lhs = parse_add();
        const char* op = nullptr;
        switch (cur().type) {
        case TokenType::Eq: op = "eq"; break;
        case TokenType::Neq: op = "neq"; break;
        case TokenType::Lt: op = "lt"; break;
        case TokenType::Le: op = "le"; break;
        case TokenType::Gt: op = "gt"; break;
        case TokenType::Ge: op = "ge"; break;
        default: return lhs;
        }
        consume();
        Expr rhs = parse_add();
        Span s = cover(lhs.span, rhs.span);
        std::vector<Expr> args;
        args.push_back(std::move(lhs));
        args.push_back(std::move(rhs));
        return make_call(op, std::move(args), s);
    }

    Expr parse_add() {
        Expr lhs = parse_mul();
        while (at(TokenType::Plus) || at(TokenType::Minus)) {
            const char* op = at(TokenType::Plus) ? "add" : "subtract";
            consume();
            Expr rhs = parse_mul();
            Span s = cover(lhs.span, rhs.span);
            std::vector<Expr> args;
            args.push_back(std::move(lhs));
            args.push_back(std::move(rhs));
            lhs = make_call(op, std::move(args), s);
        }
        return lhs;
    }

    Expr parse_mul() {
        Expr lhs = parse_unary();
        while (at(TokenType::Star) || at(TokenType::Slash) || at(TokenType::Percent)) {
            const char* op = at(TokenType::Star)    ? "multiply"
                             : at(TokenType::Slash) ? "divide"
                                                    : "mod";
            consume();
            Expr rhs = parse_unary();
            Span s = cover(lhs.span, rhs.span);
            std::vector<Expr> args;
            args.push_back(std::move(lhs));
            args.push_back(std::move(rhs));
            lhs = make_call(op, std::move(args), s);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (at(TokenType::Bang)) {
            Token bang = consume();
            Expr operand = parse_unary();
            Span s = cover(bang.span, operand.span);
            std::vector<Expr> args;
            args.push_back(std::move(operand));
            return make_call("not", std::move(args), s);
        }
        if (at(TokenType::Minus)) {
            Token minus = consume();
            Expr operand = parse_unary();
            Span s = cover(minus.span, operand.span);
            if (auto* lit = std::get_if<Expr::IntLit>(&operand.node)) {
                Expr e;
                e.span = s;
                e.node = Expr::IntLit{-lit->value};
                return e;
            }
            std::vector<Expr> args;
            args.push_back(std::move(operand));
            return make_call("negate", std::move(args), s);
        }
        return parse_primary();
    }

    Expr parse_hex_literal() {
        Token t = consume();
        Expr e;
        e.span = t.span;
        if (t.text.size() % 2 != 0)
            fail("hex data needs an even number of digits", "hex data");
        std::vector<std::uint8_t> bytes;
        bytes.reserve(t.text.size() / 2);
        for (std::size_t i = 0; i < t.text.size(); i += 2)
            bytes.push_back(
                static_cast<std::uint8_t>(hex_nibble(t.text[i]) << 4 | hex_nibble(t.text[i + 1])));
        e.node = Expr::HexLit{std::move(bytes), t.text.size() == 40};
        return e;
    }

    Expr parse_primary() {
        switch (cur().type) {
        case TokenType::Int: {
            Token t = consume();
            Expr e;
            e.span = t.span;
            e.node = Expr::IntLit{t.intValue};
            return e;
        }
        case TokenType::Hex:
            return parse_hex_literal();
        case TokenType::String: {
            Token t = consume();
            Expr e;
            e.span = t.span;
            e.node = Expr::StringLit{t.text};
            return e;
        }
        case TokenType::LParen: {
            consume();
            Expr e = parse_expr();
            expect(TokenType::RParen, ")");
            return e;
        }
        case TokenType::LBracket: {
            Token open = consume();
            Expr e;
            std::vector<Expr> elems;
            if (!at(TokenType::RBracket)) {
                elems.push_back(parse_expr());
                while (at(TokenType::Comma)) {
                    consume();
                    elems.push_back(parse_expr());
                }
            }
            Token close = expect(TokenType::RBracket, "]");
            e.span = cover(open.span, close.span);
            e.node = Expr::ListLit{std::move(elems)};
            return e;
        }
        case TokenType::Ident: {
            Token t = consume();
            Expr e;
            e.span = t.span;
            if (t.text == "true" || t.text == "false") {
                e.node = Expr::BoolLit{t.text == "true"};
                return e;
            }
            if (at(TokenType::LParen)) {
                consume();
                std::vector<Expr> args;
                if (!at(TokenType::RParen)) {
                    args.push_back(parse_expr());
                    while (at(TokenType::Comma)) {
                        consume();
                        args.push_back(parse_expr());
                    }
                }
                Token close = expect(TokenType::RParen, ")");
                e.span = cover(t.span, close.span);
                e.node = Expr::Call{t.text, std::move(args)};
                return e;
            }
            if (at(TokenType::Dot)) {
                consume();
                Token attr = expect(TokenType::Ident, "attribute name");
                e.span = cover(t.span, attr.span);
                e.node = Expr::AttrRef{t.text, attr.text};
                return e;
            }
            e.node = Expr::VarRef{t.text};
            return e;
        }
        default:
            fail("unexpected " + describe_current(), "an expression");
        }
    }

    // a literal expression: int (optionally negated), hex, string or bool
    Expr parse_literal() {
        if (at(TokenType::Minus) || at(TokenType::Int) || at(TokenType::Hex) ||
            at(TokenType::String) || at_word("true") || at_word("false")) {
            Expr e = parse_unary();
            bool literal = std::holds_alternative<Expr::IntLit>(e.node) ||
                           std::holds_alternative<Expr::HexLit>(e.node) ||
                           std::holds_alternative<Expr::StringLit>(e.node) ||
                           std::holds_alternative<Expr::BoolLit>(e.node);
            if (!literal)
                fail("expected a literal value", "literal");
            return e;
        }
        fail("unexpected " + describe_current(), "literal");
    }

    // ---- types ----------------------------------------------------------

    bool at_type_name() const {
        return at(TokenType::Ident) && ValueType::parse(cur().text).has_value();
    }

    ValueType parse_type() {
        if (!at(TokenType::Ident))
            fail("unexpected " + describe_current(), "type name");
        auto base = ValueType::parse(cur().text);
        if (!base)
            fail("'" + cur().text + "' is not a type name", "type name");
        consume();
        if (at(TokenType::LBracket) && peek().type == TokenType::RBracket) {
            consume();
            consume();
            if (base->kind == ValueType::Kind::List)
                fail("nested list types are not supported", "element type");
            return ValueType::list(*base);
        }
        return *base;
    }

    // ---- templates --------------------------------------------------------

    Template parse_template(const Token& stringToken) {
        Template tmpl;
        tmpl.span = stringToken.span;
        const std::string& raw = stringToken.text;
        std::string literal;
        auto flush_literal = [&] {
            if (!literal.empty()) {
                tmpl.parts.push_back(TemplatePart{false, literal, std::nullopt});
                literal.clear();
            }
        };
        for (std::size_t i = 0; i < raw.size(); ++i) {
            char c = raw[i];
            if (c == '{') {
                if (i + 1 < raw.size() && raw[i + 1] == '{') {
                    literal.push_back('{');
                    ++i;
                    continue;
                }
                auto end = raw.find('}', i);
                if (end == std::string::npos) {
                    error_at(stringToken, "unterminated {placeholder} in template", "}");
                    throw Bail{};
                }
                std::string inner = raw.substr(i + 1, end - i - 1);
                Expr expr;
                if (!parse_placeholder(inner, stringToken, expr)) {
                    error_at(stringToken, "bad placeholder {" + inner + "}: use {name} or {entity.attr}",
                             "placeholder");
                    throw Bail{};
                }
                flush_literal();
                tmpl.parts.push_back(TemplatePart{true, "", std::move(expr)});
                i = end;
                continue;
            }
            if (c == '}') {
                if (i + 1 < raw.size() && raw[i + 1] == '}') {
                    literal.push_back('}');
                    ++i;
                    continue;
                }
                error_at(stringToken, "stray '}' in template (use }})", "}}");
                throw Bail{};
            }
            literal.push_back(c);
        }
        flush_literal();
        return tmpl;
    }

    bool parse_placeholder(const std::string& inner, const Token& within, Expr& out) {
        auto identOk = [](const std::string& s) {
            if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
                return false;
            return std::all_of(s.begin(), s.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            });
        };
        out.span = within.span;
        auto dot = inner.find('.');
        if (dot == std::string::npos) {
            if (!identOk(inner))
                return false;
            out.node = Expr::VarRef{inner};
            return true;
        }
        std::string entity = inner.substr(0, dot);
        std::string attr = inner.substr(dot + 1);
        if (!identOk(entity) || !identOk(attr))
            return false;
        out.node = Expr::AttrRef{entity, attr};
        return true;
    }

    // ---- filters and statements -------------------------------------------

    BlockSpec parse_block_spec() {
        BlockSpec spec;
        spec.span = cur().span;
        if (at(TokenType::Int)) {
            spec.kind = BlockSpec::Kind::Number;
            spec.number = consume().intValue;
            return spec;
        }
        if (at_word("EARLIEST")) {
            consume();
            spec.kind = BlockSpec::Kind::Earliest;
            return spec;
        }
        if (at_word("CURRENT")) {
            consume();
            spec.kind = BlockSpec::Kind::Current;
            return spec;
        }
        if (at_word("CONTINUOUS")) {
            consume();
            spec.kind = BlockSpec::Kind::Continuous;
            return spec;
        }
        fail("unexpected " + describe_current(), "block number, EARLIEST, CURRENT or CONTINUOUS");
    }

    AddressList parse_address_list() {
        AddressList list;
        list.span = cur().span;
        if (at_word("ANY")) {
            Token t = consume();
            list.any = true;
            list.span = t.span;
            return list;
        }
        list.items.push_back(parse_expr());
        while (at(TokenType::Comma)) {
            consume();
            list.items.push_back(parse_expr());
        }
        list.span = cover(list.items.front().span, list.items.back().span);
        return list;
    }

    EventSignatureDecl parse_event_signature() {
        EventSignatureDecl sig;
        Token name = expect(TokenType::Ident, "event name");
        sig.name = name.text;
        sig.span = name.span;
        expect(TokenType::LParen, "(");
        if (!at(TokenType::RParen)) {
            while (true) {
                EventParamDecl param;
                param.span = cur().span;
                param.type = parse_type();
                if (at_word("indexed")) {
                    consume();
                    param.indexed = true;
                }
                Token pname = expect(TokenType::Ident, "parameter name");
                param.name = pname.text;
                param.span = cover(param.span, pname.span);
                sig.params.push_back(std::move(param));
                if (!at(TokenType::Comma))
                    break;
                consume();
            }
        }
        Token close = expect(TokenType::RParen, ")");
        sig.span = cover(name.span, close.span);
        return sig;
    }

    MemberSpec parse_member_spec() {
        MemberSpec member;
        member.span = cur().span;
        member.type = parse_type();
        Token name = expect(TokenType::Ident, "member name");
        member.name = name.text;
        member.span = cover(member.span, name.span);
        if (at(TokenType::LParen)) {
            consume();
            member.hasArgs = true;
            if (!at(TokenType::RParen)) {
                member.args.push_back(parse_expr());
                while (at(TokenType::Comma)) {
                    consume();
                    member.args.push_back(parse_expr());
                }
            }
            Token close = expect(TokenType::RParen, ")");
            member.span = cover(member.span, close.span);
        }
        return member;
    }

    std::vector<Stmt> parse_body() {
        expect(TokenType::LBrace, "{");
        std::vector<Stmt> body;
        while (!at(TokenType::RBrace) && !at(TokenType::End)) {
            try {
                body.push_back(parse_stmt());
            } catch (Bail&) {
                synchronize();
            }
        }
        expect(TokenType::RBrace, "}");
        return body;
    }

    FilterNode parse_block_filter() {
        FilterNode f;
        f.kind = FilterKind::Block;
        Token kw = expect_word("BLOCKS");
        expect(TokenType::LParen, "(");
        f.fromSpec = parse_block_spec();
        expect(TokenType::RParen, ")");
        expect(TokenType::LParen, "( — block filters take two range arguments");
        f.toSpec = parse_block_spec();
        expect(TokenType::RParen, ")");
        f.body = parse_body();
        f.span = cover(kw.span, tokens[pos - 1].span);
        return f;
    }

    FilterNode parse_tx_filter() {
        FilterNode f;
        f.kind = FilterKind::Transaction;
        Token kw = expect_word("TRANSACTIONS");
        expect(TokenType::LParen, "(");
        f.senders = parse_address_list();
        expect(TokenType::RParen, ")");
        expect(TokenType::LParen, "( — transaction filters take senders and recipients");
        f.recipients = parse_address_list();
        expect(TokenType::RParen, ")");
        f.body = parse_body();
        f.span = cover(kw.span, tokens[pos - 1].span);
        return f;
    }

    FilterNode parse_log_filter() {
        FilterNode f;
        f.kind = FilterKind::LogEntry;
        Token kw = expect_word("LOG");
        expect_word("ENTRIES");
        expect(TokenType::LParen, "(");
        f.contracts = parse_address_list();
        expect(TokenType::RParen, ")");
        expect(TokenType::LParen, "( — log entry filters take contracts and an event signature");
        f.signature = parse_event_signature();
        expect(TokenType::RParen, ")");
        f.body = parse_body();
        f.span = cover(kw.span, tokens[pos - 1].span);
        return f;
    }

    FilterNode parse_state_filter() {
        FilterNode f;
        f.kind = FilterKind::State;
        Token kw = expect_word("SMART");
        expect_word("CONTRACT");
        expect(TokenType::LParen, "(");
        f.contract = parse_expr();
        expect(TokenType::RParen, ")");
        expect(TokenType::LParen, "( — state filters take an address and members");
        f.members.push_back(parse_member_spec());
        while (at(TokenType::Comma)) {
            consume();
            f.members.push_back(parse_member_spec());
        }
        expect(TokenType::RParen, ")");
        f.body = parse_body();
        f.span = cover(kw.span, tokens[pos - 1].span);
        return f;
    }

    FilterNode parse_generic_filter() {
        FilterNode f;
        f.kind = FilterKind::Generic;
        Token kw = expect_word("IF");
        expect(TokenType::LParen, "(");
        f.predicate = parse_expr();
        expect(TokenType::RParen, ")");
        f.body = parse_body();
        f.span = cover(kw.span, tokens[pos - 1].span);
        return f;
    }

    Stmt parse_emit() {
        Token kw = expect_word("EMIT");
        if (at_word("LOG")) {
            consume();
            expect_word("LINE");
            expect(TokenType::LParen, "(");
            Token output = expect(TokenType::Ident, "output name");
            expect(TokenType::Comma, ",");
            Token str = expect(TokenType::String, "template string");
            Template tmpl = parse_template(str);
            expect(TokenType::RParen, ")");
            Token semi = expect(TokenType::Semicolon, ";");
            EmitLog e{output.text, std::move(tmpl), cover(kw.span, semi.span)};
            return Stmt{std::move(e)};
        }
        if (at_word("CSV")) {
            consume();
            expect_word("ROW");
            expect(TokenType::LParen, "(");
            Token table = expect(TokenType::Ident, "table name");
            EmitCsv e;
            e.table = table.text;
            while (at(TokenType::Comma)) {
                consume();
                Token col = expect(TokenType::Ident, "column name");
                expect(TokenType::Assign, "=");
                Expr value = parse_expr();
                e.columns.emplace_back(col.text, std::move(value));
            }
            if (e.columns.empty())
                fail("CSV rows need at least one column", ", column = expression");
            expect(TokenType::RParen, ")");
            Token semi = expect(TokenType::Semicolon, ";");
            e.span = cover(kw.span, semi.span);
            return Stmt{std::move(e)};
        }
        if (at_word("XES")) {
            consume();
            bool trace;
            if (at_word("EVENT")) {
                consume();
                trace = false;
            } else if (at_word("TRACE")) {
                consume();
                trace = true;
            } else {
                fail("unexpected " + describe_current(), "EVENT or TRACE");
            }
            expect(TokenType::LParen, "(");
            Token output = expect(TokenType::Ident, "output name");
            expect(TokenType::Comma, ",");
            EmitXes e;
            e.trace = trace;
            e.output = output.text;
            e.traceId = parse_expr();
            while (at(TokenType::Comma)) {
                consume();
                e.attrs.push_back(parse_xes_attr());
            }
            expect(TokenType::RParen, ")");
            Token semi = expect(TokenType::Semicolon, ";");
            e.span = cover(kw.span, semi.span);
            return Stmt{std::move(e)};
        }
        fail("unexpected " + describe_current(), "LOG LINE, CSV ROW, XES EVENT or XES TRACE");
    }

    XesAttr parse_xes_attr() {
        XesAttr attr;
        attr.span = cur().span;
        // optional XES type keyword, then an identifier or string key
        if (at(TokenType::Ident)) {
            for (std::size_t i = 0; i < std::size(kXesTypeNames); ++i) {
                if (cur().text == kXesTypeNames[i] &&
                    (peek().type == TokenType::Ident || peek().type == TokenType::String)) {
                    attr.type = static_cast<XesAttrType>(i + 1);
                    consume();
                    break;
                }
            }
        }
        if (at(TokenType::Ident))
            attr.key = consume().text;
        else if (at(TokenType::String))
            attr.key = consume().text;
        else
            fail("unexpected " + describe_current(), "attribute key");
        expect(TokenType::Assign, "=");
        attr.value = parse_expr();
        attr.span = cover(attr.span, attr.value.span);
        return attr;
    }

    Stmt parse_var_decl() {
        Span start = cur().span;
        VarDecl decl;
        decl.type = parse_type();
        Token name = expect(TokenType::Ident, "variable name");
        decl.name = name.text;
        expect(TokenType::Assign, "=");
        decl.init = parse_expr();
        Token semi = expect(TokenType::Semicolon, ";");
        decl.span = cover(start, semi.span);
        return Stmt{std::move(decl)};
    }

    Stmt parse_assignment() {
        Token name = expect(TokenType::Ident, "variable name");
        Assignment assign;
        assign.name = name.text;
        expect(TokenType::Assign, "=");
        assign.value = parse_expr();
        Token semi = expect(TokenType::Semicolon, ";");
        assign.span = cover(name.span, semi.span);
        return Stmt{std::move(assign)};
    }

    Stmt parse_stmt() {
        if (at(TokenType::Bad))
            fail("", "a statement");
        if (at_word("BLOCKS"))
            return Stmt{parse_block_filter()};
        if (at_word("TRANSACTIONS"))
            return Stmt{parse_tx_filter()};
        if (at_word("LOG") && peek().type == TokenType::Ident && peek().text == "ENTRIES")
            return Stmt{parse_log_filter()};
        if (at_word("SMART") && peek().type == TokenType::Ident && peek().text == "CONTRACT")
            return Stmt{parse_state_filter()};
        if (at_word("IF"))
            return Stmt{parse_generic_filter()};
        if (at_word("EMIT"))
            return parse_emit();
        if (at_word("DICTIONARY") || at_word("BITMAPPING") || at_word("OUTPUT"))
            fail(cur().text + " declarations are only allowed at the top level", "a statement");
        if (at_type_name() &&
            (peek().type == TokenType::Ident ||
             (peek().type == TokenType::LBracket && peek(2).type == TokenType::RBracket &&
              peek(3).type == TokenType::Ident)))
            return parse_var_decl();
        if (at(TokenType::Ident) && peek().type == TokenType::Assign)
            return parse_assignment();
        fail("unexpected " + describe_current(), "a statement");
    }

    // ---- top-level declarations ---------------------------------------------

    DictionarySpec parse_dictionary() {
        DictionarySpec dict;
        Token kw = expect_word("DICTIONARY");
        Token name = expect(TokenType::Ident, "dictionary name");
        dict.name = name.text;
        expect(TokenType::LParen, "(");
        dict.sourceType = parse_type();
        expect(TokenType::Arrow, "->");
        dict.codeType = parse_type();
        expect(TokenType::RParen, ")");
        expect(TokenType::LBrace, "{");
        bool sawEntry = false;
        while (!at(TokenType::RBrace) && !at(TokenType::End)) {
            if (at_word("default")) {
                consume();
                expect(TokenType::Colon, ":");
                DictEntry def;
                def.source = parse_literal();
                expect(TokenType::Colon, ": — default takes a source and a code literal");
                def.code = parse_literal();
                dict.defaultEntry = std::move(def);
                break;
            }
            DictEntry entry;
            entry.source = parse_literal();
            expect(TokenType::Colon, ":");
            entry.code = parse_literal();
            expect(TokenType::Comma, ",");
            dict.entries.push_back(std::move(entry));
            sawEntry = true;
        }
        if (!sawEntry)
            error_at(kw, "dictionary needs at least one entry", "source: code,");
        Token close = expect(TokenType::RBrace, "}");
        dict.span = cover(kw.span, close.span);
        return dict;
    }

    BitMappingSpec parse_bitmapping() {
        BitMappingSpec map;
        Token kw = expect_word("BITMAPPING");
        Token name = expect(TokenType::Ident, "bit mapping name");
        map.name = name.text;
        expect(TokenType::LBrace, "{");
        while (!at(TokenType::RBrace) && !at(TokenType::End)) {
            BitField field;
            Token fieldName = expect(TokenType::Ident, "field name");
            field.name = fieldName.text;
            field.span = fieldName.span;
            expect(TokenType::Colon, ":");
            expect_word("bits");
            expect(TokenType::LParen, "(");
            Token from = expect(TokenType::Int, "start bit");
            expect(TokenType::Comma, ",");
            Token len = expect(TokenType::Int, "bit length");
            Token close = expect(TokenType::RParen, ")");
            if (from.intValue > 256 || len.intValue > 256) {
                error_at(from, "bit positions must be at most 256", "0..256");
                throw Bail{};
            }
            field.fromBit = static_cast<unsigned>(from.intValue);
            field.bitLength = static_cast<unsigned>(len.intValue);
            if (at_word("via")) {
                consume();
                Token dictName = expect(TokenType::Ident, "dictionary name");
                field.viaDict = dictName.text;
            }
            Token semi = expect(TokenType::Semicolon, ";");
            field.span = cover(fieldName.span, semi.span);
            (void)close;
            map.fields.push_back(std::move(field));
        }
        if (map.fields.empty())
            error_at(kw, "bit mapping needs at least one field", "name: bits(from, len);");
        Token close = expect(TokenType::RBrace, "}");
        map.span = cover(kw.span, close.span);
        return map;
    }

    OutputDecl parse_output() {
        OutputDecl decl;
        Token kw = expect_word("OUTPUT");
        if (at_word("LOG"))
            decl.kind = OutputKind::Log;
        else if (at_word("CSV"))
            decl.kind = OutputKind::Csv;
        else if (at_word("XES"))
            decl.kind = OutputKind::Xes;
        else
            fail("unexpected " + describe_current(), "LOG, CSV or XES");
        consume();
        Token name = expect(TokenType::Ident, "output name");
        decl.name = name.text;
        Token semi = expect(TokenType::Semicolon, ";");
        decl.span = cover(kw.span, semi.span);
        return decl;
    }

    Manifest parse() {
        Manifest m;
        while (!at(TokenType::End)) {
            if (at(TokenType::RBrace)) {
                error_at(cur(), "unmatched '}'", "a declaration or filter");
                consume();
                continue;
            }
            try {
                if (at_word("DICTIONARY"))
                    m.items.emplace_back(parse_dictionary());
                else if (at_word("BITMAPPING"))
                    m.items.emplace_back(parse_bitmapping());
                else if (at_word("OUTPUT"))
                    m.items.emplace_back(parse_output());
                else
                    m.items.emplace_back(parse_stmt());
            } catch (Bail&) {
                synchronize();
            }
        }
        return m;
    }
};

} // namespace

std::string SyntaxError::render() const {
    std::string out = "error " + std::to_string(line) + ":" + std::to_string(column) + " " + message;
    if (!expected.empty())
        out += " (expected " + expected + ")";
    return out;
}

ParseResult parse_manifest(std::string_view text) {
    Parser parser(text);
    Manifest m = parser.parse();
    ParseResult result;
    result.errors = std::move(parser.errors);
    if (result.errors.empty())
        result.manifest = std::move(m);
    return result;
}

} // namespace chainlog::ast
