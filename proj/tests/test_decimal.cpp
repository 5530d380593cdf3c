#include "regrepair/decimal.hpp"
#include "regrepair/errors.hpp"

#include <doctest.h>

#include <random>

using namespace regrepair;

TEST_CASE("decimal parses and formats round-trip") {
    CHECK(Decimal::parse("0.0125").to_string() == "0.0125");
    CHECK(Decimal::parse("0.0025").to_string() == "0.0025");
    CHECK(Decimal::parse("12").to_string() == "12");
    CHECK(Decimal::parse("12.500").to_string() == "12.5");
    CHECK(Decimal::parse("-3.5").to_string() == "-3.5");
    CHECK(Decimal::parse("0").to_string() == "0");
    CHECK(Decimal::parse("0.000000000001").pico() == 1);
}

TEST_CASE("decimal rejects malformed literals") {
    CHECK_THROWS_AS(Decimal::parse(""), Error);
    CHECK_THROWS_AS(Decimal::parse("abc"), Error);
    CHECK_THROWS_AS(Decimal::parse("1.2.3"), Error);
    CHECK_THROWS_AS(Decimal::parse("0.0000000000001"), Error);  // 13 fractional digits
}

TEST_CASE("decimal arithmetic is exact") {
    Decimal a = Decimal::parse("0.0025");
    Decimal b = Decimal::parse("0.01");
    CHECK((a + b).to_string() == "0.0125");
    CHECK(a.scaled_by(4).to_string() == "0.01");

    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(0, 1'000'000'000);
    for (int i = 0; i < 200; ++i) {
        Decimal x = Decimal::from_pico(dist(rng));
        Decimal y = Decimal::from_pico(dist(rng));
        CHECK((x + y).pico() == x.pico() + y.pico());
        CHECK(Decimal::parse(x.to_string()) == x);
    }
}
