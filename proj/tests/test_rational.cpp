#include <doctest.h>

#include "lamdyn/rational.hpp"

#include <algorithm>
#include <random>
#include <vector>

using lamdyn::Rational;
using lamdyn::parse_rational;

TEST_CASE("fractions reduce on construction") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(3, -9) == Rational(-1, 3));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("field operations") {
    CHECK(Rational(1, 6) + Rational(1, 3) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(2, 3) == Rational(-1, 3));
    CHECK(Rational(5, 6) * Rational(2, 5) == Rational(1, 3));
    CHECK(Rational(3, 4) / Rational(1, 2) == Rational(3, 2));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
}

TEST_CASE("mod1 lands in the unit interval") {
    CHECK(Rational(7, 3).mod1() == Rational(1, 3));
    CHECK(Rational(-1, 3).mod1() == Rational(2, 3));
    CHECK(Rational(4, 2).mod1() == Rational(0));
    CHECK(Rational(-7, 4).mod1() == Rational(1, 4));
}

TEST_CASE("floor rounds toward minus infinity") {
    CHECK(Rational(7, 3).floor() == 2);
    CHECK(Rational(-1, 3).floor() == -1);
    CHECK(Rational(-6, 3).floor() == -2);
    CHECK(Rational(5).floor() == 5);
}

TEST_CASE("ordering is the usual rational order") {
    CHECK(Rational(1, 3) < Rational(2, 5));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(355, 113) > Rational(314, 100));
    std::vector<Rational> v{{3, 7}, {1, 7}, {5, 7}, {2, 7}};
    std::sort(v.begin(), v.end());
    CHECK(v.front() == Rational(1, 7));
    CHECK(v.back() == Rational(5, 7));
}

TEST_CASE("parse accepts p/q and plain integers") {
    CHECK(parse_rational("3/7") == Rational(3, 7));
    CHECK(parse_rational("-2/6") == Rational(-1, 3));
    CHECK(parse_rational("14") == Rational(14));
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/2x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::domain_error);
}

TEST_CASE("overflow throws instead of wrapping") {
    Rational big(INT64_MAX - 1, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK(Rational::from_i128((__int128)INT64_MAX * 6, 6) == Rational(INT64_MAX));
}

TEST_CASE("printing") {
    CHECK(Rational(3, 7).str() == "3/7");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(4).str() == "4");
    CHECK(Rational(0).str() == "0");
}

TEST_CASE("random arithmetic round trips") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-50, 50), den(1, 50);
    for (int i = 0; i < 500; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        CHECK((a + b) - b == a);
        if (!(b == Rational(0))) CHECK((a / b) * b == a);
        int rel = (a < b ? 1 : 0) + (b < a ? 1 : 0) + (a == b ? 1 : 0);
        CHECK(rel == 1);
    }
}
