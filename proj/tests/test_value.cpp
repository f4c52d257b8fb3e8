#include <doctest.h>

#include <chainlog/value.hpp>

using namespace chainlog;

TEST_CASE("type names parse and render canonically") {
    for (const char* name : {"uint8", "uint256", "int128", "address", "bool", "string", "bytes",
                             "bytes1", "bytes32", "uint64[]", "address[]"}) {
        auto t = ValueType::parse(name);
        REQUIRE(t.has_value());
        CHECK(t->name() == name);
    }
    CHECK_FALSE(ValueType::parse("uint7").has_value());
    CHECK_FALSE(ValueType::parse("uint0").has_value());
    CHECK_FALSE(ValueType::parse("uint264").has_value());
    CHECK_FALSE(ValueType::parse("bytes0").has_value());
    CHECK_FALSE(ValueType::parse("bytes33").has_value());
    CHECK_FALSE(ValueType::parse("uint8[][]").has_value()); // one-dimensional only
    CHECK_FALSE(ValueType::parse("tuple").has_value());
}

TEST_CASE("widening stays within a signedness class") {
    CHECK(ValueType::uint_(8).widens_to(ValueType::uint_(256)));
    CHECK(ValueType::uint_(256).widens_to(ValueType::uint_(256)));
    CHECK_FALSE(ValueType::uint_(256).widens_to(ValueType::uint_(8)));
    CHECK_FALSE(ValueType::uint_(8).widens_to(ValueType::int_(256)));
    CHECK_FALSE(ValueType::int_(8).widens_to(ValueType::uint_(256)));
    CHECK(ValueType::fixed_bytes(4).widens_to(ValueType::bytes()));
    CHECK(ValueType::list(ValueType::uint_(8)).widens_to(ValueType::list(ValueType::uint_(256))));
    CHECK_FALSE(ValueType::list(ValueType::uint_(8)).widens_to(ValueType::uint_(256)));
}

TEST_CASE("numeric range checks") {
    CHECK(fits_numeric(BigInt(255), ValueType::uint_(8)));
    CHECK_FALSE(fits_numeric(BigInt(256), ValueType::uint_(8)));
    CHECK_FALSE(fits_numeric(BigInt(-1), ValueType::uint_(8)));
    CHECK(fits_numeric(BigInt(127), ValueType::int_(8)));
    CHECK(fits_numeric(BigInt(-128), ValueType::int_(8)));
    CHECK_FALSE(fits_numeric(BigInt(128), ValueType::int_(8)));
    CHECK_FALSE(fits_numeric(BigInt(-129), ValueType::int_(8)));
    CHECK(fits_numeric((BigInt(1) << 256) - 1, ValueType::uint_(256)));
    CHECK_FALSE(fits_numeric(BigInt(1) << 256, ValueType::uint_(256)));
}

TEST_CASE("canonical value rendering") {
    CHECK(Value::uint_(BigInt(42)).render() == "42");
    CHECK(Value::int_(BigInt(-7)).render() == "-7");
    CHECK(Value::boolean(true).render() == "true");
    CHECK(Value::boolean(false).render() == "false");
    CHECK(Value::string("hi").render() == "hi");
    CHECK(Value::bytes({0xde, 0xad}).render() == "0xdead");
    Address a{};
    a[19] = 0x01;
    CHECK(Value::address(a).render() == "0x0000000000000000000000000000000000000001");
    Value lst = Value::list(ValueType::uint_(), {Value::uint_(BigInt(1)), Value::uint_(BigInt(2))});
    CHECK(lst.render() == "[1, 2]");
    CHECK(Value::list(ValueType::uint_(), {}).render() == "[]");
}

TEST_CASE("value equality is structural") {
    CHECK(Value::uint_(BigInt(5)) == Value::uint_(BigInt(5)));
    CHECK(Value::uint_(BigInt(5)) != Value::uint_(BigInt(6)));
    CHECK(Value::uint_(BigInt(5), 8) != Value::uint_(BigInt(5), 256)); // type-aware
    CHECK(Value::string("x") != Value::bytes({'x'}));
}
