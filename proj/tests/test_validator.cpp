#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <chainlog/parser.hpp>
#include <chainlog/validator.hpp>

using namespace chainlog;
using namespace chainlog::ast;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Manifest parse_ok(const std::string& text) {
    auto result = parse_manifest(text);
    for (const auto& e : result.errors)
        MESSAGE(e.render());
    REQUIRE(result.ok());
    return std::move(*result.manifest);
}

ValidationReport validate_text(const std::string& text,
                               std::optional<std::uint64_t> head = std::nullopt) {
    Manifest m = parse_ok(text);
    return validate(m, head);
}

bool has_code(const ValidationReport& report, const std::string& code) {
    for (const auto& f : report.findings)
        if (f.code == code)
            return true;
    return false;
}

// "E_NESTING_toplevel_log" -> "E_NESTING"
std::string expected_code(const std::string& stem) {
    auto first = stem.find('_');
    auto second = stem.find('_', first + 1);
    return stem.substr(0, second);
}

} // namespace

TEST_CASE("invalid corpus: each manifest is rejected with its expected code") {
    std::filesystem::path dir = std::filesystem::path(CHAINLOG_CORPUS_DIR) / "invalid";
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".manifest")
            continue;
        ++count;
        CAPTURE(entry.path().filename().string());
        auto report = validate_text(slurp(entry.path()));
        CHECK_FALSE(report.ok());
        CHECK(has_code(report, expected_code(entry.path().stem().string())));
    }
    CHECK(count >= 12);
}

TEST_CASE("valid corpus: accepted with zero errors") {
    std::filesystem::path dir = std::filesystem::path(CHAINLOG_CORPUS_DIR) / "valid";
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".manifest")
            continue;
        ++count;
        CAPTURE(entry.path().filename().string());
        auto report = validate_text(slurp(entry.path()));
        for (const auto& f : report.findings)
            MESSAGE(f.code, " ", f.message);
        CHECK(report.ok());
    }
    CHECK(count >= 6);
}

TEST_CASE("validation is deterministic") {
    Manifest m = parse_ok(slurp(std::filesystem::path(CHAINLOG_CORPUS_DIR) /
                                "invalid/E_CSV_columns.manifest"));
    CHECK(validate(m).render() == validate(m).render());
    CHECK(validate(m).render_json() == validate(m).render_json());
}

TEST_CASE("every finding carries a span inside the source") {
    std::string text = slurp(std::filesystem::path(CHAINLOG_CORPUS_DIR) /
                             "invalid/E_TYPE_operator.manifest");
    Manifest m = parse_ok(text);
    auto report = validate(m);
    REQUIRE_FALSE(report.findings.empty());
    for (const auto& f : report.findings) {
        CHECK(f.span.offset + f.span.length <= text.size());
        CHECK(f.span.line >= 1);
    }
}

TEST_CASE("nesting matrix") {
    // a generic filter is transparent for nesting checks
    CHECK(validate_text("BLOCKS (0) (1) { IF (true) { TRANSACTIONS (ANY) (ANY) { } } }").ok());
    CHECK(has_code(validate_text("BLOCKS (0) (1) { LOG ENTRIES (ANY) (E()) { TRANSACTIONS (ANY) "
                                 "(ANY) { } } }"),
                   "E_NESTING"));
    CHECK(has_code(validate_text("IF (true) { }"), "E_NESTING"));
    CHECK(has_code(validate_text("TRANSACTIONS (ANY) (ANY) { }"), "E_NESTING"));
    // log filters nest under transaction or block filters
    CHECK(validate_text("BLOCKS (0) (1) { LOG ENTRIES (ANY) (E()) { } }").ok());
    CHECK(validate_text(
              "BLOCKS (0) (1) { TRANSACTIONS (ANY) (ANY) { LOG ENTRIES (ANY) (E()) { } } }")
              .ok());
    CHECK(has_code(
        validate_text("BLOCKS (0) (1) { LOG ENTRIES (ANY) (E()) { LOG ENTRIES (ANY) (F()) { } } }"),
        "E_NESTING"));
}

TEST_CASE("typing rules from the attribute and operator tables") {
    // spec'd examples: block.number types as uint256, add over uint256
    std::vector<Finding> findings;
    Manifest m = parse_ok("BLOCKS (0) (1) { TRANSACTIONS (ANY) (ANY) { } }");
    TypeEnvironment env;
    env.manifest = &m;
    env.findings = &findings;
    env.push_scope();
    env.blockScope = true;
    env.txScope = true;

    auto type_of_text = [&](const std::string& exprText) {
        auto parsed = parse_manifest("uint256 probe = " + exprText + ";");
        REQUIRE(parsed.ok());
        const auto* stmt = std::get_if<Stmt>(&parsed.manifest->items[0]);
        const auto* decl = stmt->as<VarDecl>();
        return type_of(decl->init, env);
    };

    auto t1 = type_of_text("block.number");
    REQUIRE(t1.has_value());
    CHECK(t1->name() == "uint256");

    auto t2 = type_of_text("add(tx.gasUsed, 1)");
    REQUIRE(t2.has_value());
    CHECK(t2->name() == "uint256");

    findings.clear();
    auto t3 = type_of_text("add(tx.gasUsed, \"x\")");
    CHECK_FALSE(t3.has_value());
    REQUIRE_FALSE(findings.empty());
    CHECK(findings[0].code == "E_TYPE");
}

TEST_CASE("integer literals narrow only when they fit") {
    CHECK(validate_text("uint8 x = 255;").ok());
    CHECK(has_code(validate_text("uint8 x = 256;"), "E_TYPE"));
    CHECK(validate_text("int8 x = -128;").ok());
    CHECK(has_code(validate_text("int8 x = -129;"), "E_TYPE"));
    // no implicit widening between signed and unsigned
    CHECK(has_code(validate_text("uint256 u = 1;\nint256 s = u;"), "E_TYPE"));
}

TEST_CASE("warnings") {
    auto unused = validate_text("BLOCKS (0) (1) { uint256 dead = 1; }");
    CHECK(unused.ok());
    CHECK(has_code(unused, "W_UNUSED"));

    auto nodefault = validate_text("DICTIONARY d (string -> uint8) { \"a\": 1, }");
    CHECK(has_code(nodefault, "W_NODEFAULT"));

    auto range = validate_text("BLOCKS (0) (100) { }", 50);
    CHECK(range.ok());
    CHECK(has_code(range, "W_RANGE"));
    CHECK_FALSE(has_code(validate_text("BLOCKS (0) (100) { }", 200), "W_RANGE"));
    CHECK_FALSE(has_code(validate_text("BLOCKS (0) (100) { }"), "W_RANGE"));

    auto hashed = validate_text("BLOCKS (0) (1) { LOG ENTRIES (ANY) (E(string indexed s)) { EMIT "
                                "CSV ROW (t, a = s); } }");
    CHECK(hashed.ok());
    CHECK(has_code(hashed, "W_HASHED"));
}

TEST_CASE("dictionary rules") {
    CHECK(has_code(validate_text("DICTIONARY d (string -> uint8) { \"a\": 1, \"a\": 2, }"),
                   "E_DICT"));
    // default code must not collide with an entry code
    CHECK(has_code(
        validate_text("DICTIONARY d (string -> uint8) { \"a\": 1, default: \"x\": 1 }"), "E_DICT"));
    // code type must be unsigned
    CHECK(has_code(validate_text("DICTIONARY d (string -> string) { \"a\": \"b\", }"), "E_DICT"));
    CHECK(validate_text(
              "DICTIONARY d (string -> uint8) { \"a\": 1, default: \"x\": 0 }")
              .ok());
}

TEST_CASE("bit mapping rules") {
    CHECK(has_code(validate_text("BITMAPPING m { a: bits(0, 0); }"), "E_BITS"));
    CHECK(has_code(validate_text("BITMAPPING m { a: bits(0, 3); a2: bits(2, 4); }"), "E_BITS"));
    CHECK(has_code(validate_text("BITMAPPING m { a: bits(0, 3); a: bits(4, 3); }"), "E_BITS"));
    // dictionary codes must fit the field
    CHECK(has_code(validate_text("DICTIONARY d (string -> uint8) { \"a\": 1, default: \"x\": 0 }\n"
                                 "BITMAPPING m { f: bits(0, 4) via d; }"),
                   "E_BITS"));
    CHECK(has_code(validate_text("BITMAPPING m { f: bits(0, 8) via nosuch; }"), "E_UNDEF"));
    CHECK(validate_text("DICTIONARY d (string -> uint8) { \"a\": 1, default: \"x\": 0 }\n"
                        "BITMAPPING m { f: bits(0, 8) via d; g: bits(8, 248); }")
              .ok());
}

TEST_CASE("special form checks") {
    std::string dict = "DICTIONARY d (string -> uint8) { \"a\": 1, default: \"x\": 0 }\n";
    CHECK(validate_text(dict + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = mapValue(d, \"a\")); }").ok());
    CHECK(validate_text(dict + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = unmapValue(d, 1)); }").ok());
    CHECK(has_code(validate_text(dict + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = mapValue(d, 1)); }"),
                   "E_TYPE"));
    CHECK(has_code(
        validate_text("BLOCKS (0) (1) { EMIT CSV ROW (t, a = mapValue(nosuch, \"a\")); }"),
        "E_UNDEF"));
    std::string map = "BITMAPPING m { f: bits(0, 8); }\n";
    CHECK(validate_text(map + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = unpackBits(m, \"f\", 33)); }")
              .ok());
    CHECK(has_code(
        validate_text(map + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = unpackBits(m, \"g\", 33)); }"),
        "E_UNDEF"));
    // a dictionary name is not a variable
    CHECK(has_code(validate_text(dict + "BLOCKS (0) (1) { EMIT CSV ROW (t, a = d); }"), "E_TYPE"));
}

TEST_CASE("assignments") {
    CHECK(validate_text("uint256 x = 0;\nBLOCKS (0) (1) { x = x + 1; EMIT CSV ROW (t, a = x); }")
              .ok());
    CHECK(has_code(validate_text("BLOCKS (0) (1) { y = 1; }"), "E_UNDEF"));
    // event parameters are read-only bindings
    CHECK(has_code(validate_text("BLOCKS (0) (1) { LOG ENTRIES (ANY) (E(uint256 v)) { v = 1; } }"),
                   "E_TYPE"));
    CHECK(has_code(validate_text("uint256 x = 0;\nBLOCKS (0) (1) { x = \"nope\"; }"), "E_TYPE"));
}

TEST_CASE("output kind conflicts") {
    CHECK(has_code(validate_text("OUTPUT CSV shared;\nBLOCKS (0) (1) { EMIT LOG LINE (shared, "
                                 "\"x\"); }"),
                   "E_REDECL"));
    CHECK(has_code(validate_text("BLOCKS (0) (1) { EMIT CSV ROW (shared, a = 1); EMIT XES EVENT "
                                 "(shared, 1); }"),
                   "E_REDECL"));
}

TEST_CASE("report rendering format") {
    auto report = validate_text("BLOCKS (10) (0) {\n}\n");
    REQUIRE_FALSE(report.ok());
    std::string rendered = report.render();
    CHECK(rendered.find("error E_RANGE 1:1 ") != std::string::npos);
    std::string json = report.render_json();
    CHECK(json.find("\"code\": \"E_RANGE\"") != std::string::npos);
    CHECK(json.find("\"severity\": \"error\"") != std::string::npos);
}
