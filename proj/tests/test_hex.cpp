#include <doctest.h>

#include <chainlog/hex.hpp>

#include "support/random_values.hpp"

using namespace chainlog;

TEST_CASE("parse_quantity accepts minimal hex quantities") {
    CHECK(parse_quantity("0x0") == 0);
    // 0x4b7 = 4*16^2 + 11*16 + 7
    CHECK(parse_quantity("0x4b7") == 1207);
    CHECK(parse_quantity("0x1") == 1);
    CHECK(parse_quantity("0xffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff") ==
          (BigInt(1) << 256) - 1);
}

TEST_CASE("parse_quantity rejects malformed input") {
    CHECK_THROWS_AS(parse_quantity("4b7"), MalformedQuantity);
    CHECK_THROWS_AS(parse_quantity("0x"), MalformedQuantity);
    CHECK_THROWS_AS(parse_quantity("0x04b7"), MalformedQuantity);
    CHECK_THROWS_AS(parse_quantity("0xg1"), MalformedQuantity);
    CHECK_THROWS_AS(parse_quantity(""), MalformedQuantity);
    CHECK_THROWS_AS(parse_quantity("0x10000000000000000000000000000000000000000000000000000000000000000"),
                    MalformedQuantity);
}

TEST_CASE("quantity round-trip over random 256-bit values") {
    testsupport::Rng rng(0x5eed0001);
    for (int i = 0; i < 500; ++i) {
        BigInt n = testsupport::random_uint(rng, 256);
        CHECK(parse_quantity(render_quantity(n)) == n);
    }
    CHECK(render_quantity(BigInt(0)) == "0x0");
    CHECK(render_quantity(BigInt(1207)) == "0x4b7");
}

TEST_CASE("normalize_address canonicalizes casing") {
    std::string zeros = "0x" + std::string(40, '0');
    Address zero = normalize_address(zeros);
    CHECK(zero == Address{});
    CHECK(render_address(zero) == zeros);

    Address mixed = normalize_address("0xAbCdEf0123456789aBcDeF0123456789ABCDEF01");
    Address lower = normalize_address("0xabcdef0123456789abcdef0123456789abcdef01");
    CHECK(mixed == lower);
    CHECK(render_address(mixed) == "0xabcdef0123456789abcdef0123456789abcdef01");
}

TEST_CASE("normalize_address is idempotent through rendering") {
    testsupport::Rng rng(0x5eed0002);
    for (int i = 0; i < 200; ++i) {
        Address a = testsupport::random_address(rng);
        CHECK(normalize_address(render_address(a)) == a);
    }
}

TEST_CASE("normalize_address rejects wrong shapes") {
    CHECK_THROWS_AS(normalize_address("0x1234"), MalformedAddress);
    CHECK_THROWS_AS(normalize_address("abcdef0123456789abcdef0123456789abcdef01"), MalformedAddress);
    CHECK_THROWS_AS(normalize_address("0xzzcdef0123456789abcdef0123456789abcdef01"), MalformedAddress);
    CHECK_THROWS_AS(normalize_address("0xabcdef0123456789abcdef0123456789abcdef012"), MalformedAddress);
}

TEST_CASE("data round-trip and validation") {
    CHECK(parse_data("0x").empty());
    CHECK(parse_data("0x00ff") == std::vector<std::uint8_t>{0x00, 0xff});
    CHECK(render_data(parse_data("0xdeadbeef")) == "0xdeadbeef");
    CHECK_THROWS_AS(parse_data("0xf"), MalformedData);
    CHECK_THROWS_AS(parse_data("f0"), MalformedData);

    testsupport::Rng rng(0x5eed0003);
    for (int i = 0; i < 100; ++i) {
        auto bytes = testsupport::random_bytes(rng, rng() % 70);
        CHECK(parse_data(render_data(bytes)) == bytes);
    }
}

TEST_CASE("uint/bytes big-endian conversions") {
    auto bytes = uint_to_bytes(BigInt(0x1234), 4);
    CHECK(bytes == std::vector<std::uint8_t>{0x00, 0x00, 0x12, 0x34});
    CHECK(bytes_to_uint(bytes.data(), bytes.size()) == 0x1234);
}
