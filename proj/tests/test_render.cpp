#include <doctest.h>

#include <chainlog/parser.hpp>
#include <chainlog/render.hpp>

using namespace chainlog::ast;

namespace {

// Canonical-form comparison: render is injective over the constructs it
// prints, so equal canonical text means structurally equal ASTs.
void check_round_trip(const std::string& text) {
    auto first = parse_manifest(text);
    for (const auto& e : first.errors)
        MESSAGE(e.render());
    REQUIRE(first.ok());
    std::string canonical = render_manifest(*first.manifest);
    auto second = parse_manifest(canonical);
    REQUIRE(second.ok());
    CHECK(render_manifest(*second.manifest) == canonical);
}

} // namespace

TEST_CASE("empty manifest renders as the empty string") {
    auto result = parse_manifest("");
    REQUIRE(result.ok());
    CHECK(render_manifest(*result.manifest) == "");
}

TEST_CASE("rendering is deterministic") {
    auto result = parse_manifest("BLOCKS (0) (10) { }");
    REQUIRE(result.ok());
    CHECK(render_manifest(*result.manifest) == render_manifest(*result.manifest));
}

TEST_CASE("round-trip over representative manifests") {
    check_round_trip("BLOCKS (0) (10) { }");
    check_round_trip("BLOCKS (EARLIEST) (CURRENT) { }");
    check_round_trip("BLOCKS (5) (CONTINUOUS) { }");
    check_round_trip("uint256 x = 1 + 2 * 3;");
    check_round_trip("int8 neg = -120;");
    check_round_trip("uint256[] xs = [1, 2, 3];");
    check_round_trip("address a = 0x00000000000000000000000000000000000000ff;");
    check_round_trip("bytes b = 0xdeadbeef;");
    check_round_trip("string s = \"with \\\"quotes\\\" and \\n newline\";");
    check_round_trip(R"(
OUTPUT CSV stats;
DICTIONARY phase (string -> uint8) {
  "Pregnant": 0,
  "Birth": 1,
  default: "unknown": 255
}
BITMAPPING packed {
  a: bits(0, 3);
  b: bits(3, 2) via phase;
}
BLOCKS (0) (10) {
  uint256 n = 0;
  TRANSACTIONS (ANY) (ANY) {
    n = n + 1;
    IF (tx.gasUsed >= 21000 || tx.status == false) {
      EMIT CSV ROW (stats, blk = block.number, n = n);
    }
    LOG ENTRIES (0x00000000000000000000000000000000000000aa) (E(uint256 indexed id, string note)) {
      EMIT LOG LINE (updates, "id {id}: {note} {{literal}}");
      EMIT XES EVENT (lifecycle, id, "concept:name" = "E", date "time:timestamp" = block.timestamp, boolean ok = true);
      EMIT XES TRACE (lifecycle, id, string kind = "thing");
    }
  }
  SMART CONTRACT (0x00000000000000000000000000000000000000bb) (uint256 totalSupply, address ownerOf(7)) {
    EMIT CSV ROW (stats, blk = block.number, n = totalSupply);
  }
}
)");
}

TEST_CASE("canonical text of a small manifest is stable") {
    auto result = parse_manifest("BLOCKS(0)(10){TRANSACTIONS(ANY)(ANY){EMIT CSV ROW(t,a=tx.gasUsed+1);}}");
    REQUIRE(result.ok());
    CHECK(render_manifest(*result.manifest) ==
          "BLOCKS (0) (10) {\n"
          "  TRANSACTIONS (ANY) (ANY) {\n"
          "    EMIT CSV ROW (t, a = add(tx.gasUsed, 1));\n"
          "  }\n"
          "}\n");
}
