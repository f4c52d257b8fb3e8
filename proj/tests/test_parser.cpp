#include <doctest.h>

#include <chainlog/parser.hpp>

#include "support/random_values.hpp"

using namespace chainlog;
using namespace chainlog::ast;

namespace {

Manifest parse_ok(std::string_view text) {
    auto result = parse_manifest(text);
    for (const auto& e : result.errors)
        MESSAGE(e.render());
    REQUIRE(result.ok());
    return std::move(*result.manifest);
}

const FilterNode* first_filter(const Manifest& m) {
    for (const auto& item : m.items)
        if (const auto* stmt = std::get_if<Stmt>(&item))
            if (const auto* f = stmt->as<FilterNode>())
                return f;
    return nullptr;
}

} // namespace

TEST_CASE("minimal block filter") {
    Manifest m = parse_ok("BLOCKS (0) (10) { }");
    const FilterNode* f = first_filter(m);
    REQUIRE(f != nullptr);
    CHECK(f->kind == FilterKind::Block);
    CHECK(f->fromSpec.kind == BlockSpec::Kind::Number);
    CHECK(f->fromSpec.number == 0);
    CHECK(f->toSpec.number == 10);
    CHECK(f->body.empty());
}

TEST_CASE("nested transaction filter with one sender and ANY recipients") {
    Manifest m = parse_ok("BLOCKS (0) (10) {\n"
                          "  TRANSACTIONS (0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa) (ANY) { }\n"
                          "}");
    const FilterNode* block = first_filter(m);
    REQUIRE(block != nullptr);
    REQUIRE(block->body.size() == 1);
    const FilterNode* tx = block->body[0].as<FilterNode>();
    REQUIRE(tx != nullptr);
    CHECK(tx->kind == FilterKind::Transaction);
    CHECK_FALSE(tx->senders.any);
    REQUIRE(tx->senders.items.size() == 1);
    const auto* lit = tx->senders.items[0].as<Expr::HexLit>();
    REQUIRE(lit != nullptr);
    CHECK(lit->isAddress);
    CHECK(tx->recipients.any);
}

TEST_CASE("missing second range argument is a syntax error") {
    auto result = parse_manifest("BLOCKS (0) { }");
    CHECK_FALSE(result.ok());
    CHECK_FALSE(result.manifest.has_value());
    REQUIRE(!result.errors.empty());
    CHECK(result.errors[0].line == 1);
}

TEST_CASE("parser reports multiple errors in one run") {
    auto result = parse_manifest("BLOCKS (0) { }\n"
                                 "OUTPUT CSV t\n" // missing semicolon
                                 "BLOCKS (zzz) (10) { }\n");
    CHECK(result.errors.size() >= 2);
}

TEST_CASE("full statement surface parses") {
    Manifest m = parse_ok(R"(
OUTPUT CSV stats;
OUTPUT LOG updates;
OUTPUT XES lifecycle;
DICTIONARY phase (string -> uint8) {
  "Pregnant": 0,
  "Birth": 1,
  default: "unknown": 255
}
BITMAPPING packed {
  a: bits(0, 3);
  b: bits(3, 2) via phase;
}
uint256 total = 0;
address registry = 0x00000000000000000000000000000000000000a1;
uint256[] born = [];
BLOCKS (EARLIEST) (CONTINUOUS) {
  uint256 txCount = 0;
  TRANSACTIONS (ANY) (registry) {
    txCount = txCount + 1;
    IF (tx.gasUsed > 21000) {
      EMIT CSV ROW (stats, block = block.number, fee = tx.gasUsed * tx.gasPrice);
    }
    LOG ENTRIES (registry) (Update(string key, address indexed target)) {
      registry = target;
      EMIT LOG LINE (updates, "update {key} -> {target}");
    }
  }
  SMART CONTRACT (registry) (uint256 totalSupply, address ownerOf(7)) {
    EMIT XES EVENT (lifecycle, totalSupply, "concept:name" = "check", date "time:timestamp" = block.timestamp);
    EMIT XES TRACE (lifecycle, totalSupply, string note = "trace-level");
  }
}
)");
    CHECK(m.dictionaries().size() == 1);
    CHECK(m.bitmappings().size() == 1);
    CHECK(m.outputs().size() == 3);
    const auto* dict = m.find_dictionary("phase");
    REQUIRE(dict != nullptr);
    CHECK(dict->entries.size() == 2);
    REQUIRE(dict->defaultEntry.has_value());
    const auto* map = m.find_bitmapping("packed");
    REQUIRE(map != nullptr);
    REQUIRE(map->fields.size() == 2);
    CHECK(map->fields[1].viaDict == "phase");
}

TEST_CASE("infix operators desugar to named calls") {
    Manifest m = parse_ok("BLOCKS (0) (1) { IF (tx.gasUsed > 21000 && !tx.status) { } }");
    const FilterNode* block = first_filter(m);
    const FilterNode* cond = block->body[0].as<FilterNode>();
    REQUIRE(cond != nullptr);
    const auto* andCall = cond->predicate->as<Expr::Call>();
    REQUIRE(andCall != nullptr);
    CHECK(andCall->name == "and");
    REQUIRE(andCall->args.size() == 2);
    CHECK(andCall->args[0].as<Expr::Call>()->name == "gt");
    CHECK(andCall->args[1].as<Expr::Call>()->name == "not");
}

TEST_CASE("precedence: multiplication binds tighter than addition") {
    Manifest m = parse_ok("uint256 x = 1 + 2 * 3;");
    const auto* decl = std::get_if<Stmt>(&m.items[0])->as<VarDecl>();
    const auto* add = decl->init.as<Expr::Call>();
    REQUIRE(add != nullptr);
    CHECK(add->name == "add");
    CHECK(add->args[1].as<Expr::Call>()->name == "multiply");
}

TEST_CASE("negative integer literals fold") {
    Manifest m = parse_ok("int256 x = -5;");
    const auto* decl = std::get_if<Stmt>(&m.items[0])->as<VarDecl>();
    const auto* lit = decl->init.as<Expr::IntLit>();
    REQUIRE(lit != nullptr);
    CHECK(lit->value == -5);
}

TEST_CASE("template placeholders and brace escapes") {
    Manifest m = parse_ok(R"(BLOCKS (0) (1) { EMIT LOG LINE (out, "a {{b}} {x} {tx.gasUsed}"); })");
    const FilterNode* block = first_filter(m);
    const auto* emit = block->body[0].as<EmitLog>();
    REQUIRE(emit != nullptr);
    REQUIRE(emit->tmpl.parts.size() == 4);
    CHECK(emit->tmpl.parts[0].text == "a {b} ");
    CHECK(emit->tmpl.parts[1].isExpr);
    CHECK(emit->tmpl.parts[2].text == " ");
    CHECK(emit->tmpl.parts[3].expr->as<Expr::AttrRef>()->attr == "gasUsed");

    CHECK_FALSE(parse_manifest(R"(BLOCKS (0) (1) { EMIT LOG LINE (out, "bad {"); })").ok());
    CHECK_FALSE(parse_manifest(R"(BLOCKS (0) (1) { EMIT LOG LINE (out, "bad {1+2}"); })").ok());
}

TEST_CASE("filters parse at any nesting level, leaving placement to semantics") {
    CHECK(parse_manifest("LOG ENTRIES (ANY) (E()) { }").ok());
    CHECK(parse_manifest("BLOCKS (0) (1) { BLOCKS (0) (1) { } }").ok());
    CHECK(parse_manifest("TRANSACTIONS (ANY) (ANY) { SMART CONTRACT (x) (uint256 a) { } }").ok());
}

TEST_CASE("declarations are rejected inside filter bodies") {
    CHECK_FALSE(parse_manifest("BLOCKS (0) (1) { OUTPUT CSV t; }").ok());
    CHECK_FALSE(parse_manifest("BLOCKS (0) (1) { DICTIONARY d (string -> uint8) { \"a\": 1, } }").ok());
}

TEST_CASE("every span lies inside the input text") {
    std::string text = R"(
uint256 total = 0;
BLOCKS (0) (10) {
  TRANSACTIONS (ANY) (ANY) {
    total = total + tx.gasUsed * 2;
    EMIT CSV ROW (stats, a = total);
  }
}
)";
    Manifest m = parse_ok(text);

    struct Walk {
        std::size_t limit;
        void check(const Span& s) const {
            CHECK(s.offset <= limit);
            CHECK(s.offset + s.length <= limit);
            CHECK(s.length > 0);
        }
        void expr(const Expr& e) const {
            check(e.span);
            if (const auto* call = e.as<Expr::Call>())
                for (const auto& a : call->args)
                    expr(a);
            if (const auto* list = e.as<Expr::ListLit>())
                for (const auto& el : list->elements)
                    expr(el);
        }
        void stmt(const Stmt& s) const {
            check(s.span());
            if (const auto* decl = s.as<VarDecl>())
                expr(decl->init);
            if (const auto* assign = s.as<Assignment>())
                expr(assign->value);
            if (const auto* f = s.as<FilterNode>()) {
                if (f->predicate)
                    expr(*f->predicate);
                for (const auto& inner : f->body)
                    stmt(inner);
            }
        }
    } walk{text.size()};
    for (const auto& item : m.items)
        if (const auto* stmt = std::get_if<Stmt>(&item))
            walk.stmt(*stmt);
}

TEST_CASE("parser survives arbitrary byte input") {
    testsupport::Rng rng(0x5eedf00d);
    for (int i = 0; i < 300; ++i) {
        std::size_t len = rng() % 200;
        std::string junk;
        for (std::size_t j = 0; j < len; ++j)
            junk.push_back(static_cast<char>(rng() % 256));
        auto result = parse_manifest(junk); // must not crash or hang
        CHECK((result.ok() || !result.errors.empty()));
    }
    // structured junk: keyword soup
    const char* words[] = {"BLOCKS", "(", ")", "{", "}", "EMIT", "IF", ";", "=",
                           "0x12",   "7", ",", "\"s\"", "uint256", "LOG", "ENTRIES"};
    for (int i = 0; i < 300; ++i) {
        std::string soup;
        for (int j = 0; j < 40; ++j) {
            soup += words[rng() % std::size(words)];
            soup += " ";
        }
        auto result = parse_manifest(soup);
        CHECK((result.ok() || !result.errors.empty()));
    }
}
