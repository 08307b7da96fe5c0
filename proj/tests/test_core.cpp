#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <limits>

#include "rtsusp/rational.hpp"
#include "rtsusp/time_ticks.hpp"

using namespace rtsusp;

TEST_CASE("tick arithmetic") {
    CHECK(TimeTicks(2) + TimeTicks(3) == TimeTicks(5));
    CHECK(TimeTicks(7) - TimeTicks(7) == TimeTicks(0));
    CHECK(TimeTicks(6) * TimeTicks(7) == TimeTicks(42));
    TimeTicks a(10);
    a += TimeTicks(5);
    CHECK(a.v == 15);
    a -= TimeTicks(1);
    CHECK(a.v == 14);
    CHECK(TimeTicks(3) < TimeTicks(4));
    CHECK(TimeTicks(4) <= TimeTicks(4));
}

TEST_CASE("tick overflow is an error, not a wrap") {
    const TimeTicks top(std::numeric_limits<std::uint64_t>::max());
    CHECK_THROWS_AS(top + TimeTicks(1), OverflowError);
    CHECK_THROWS_AS(TimeTicks(5) - TimeTicks(7), OverflowError);
    CHECK_THROWS_AS(TimeTicks(1ULL << 40) * TimeTicks(1ULL << 40), OverflowError);
    CHECK(top + TimeTicks(0) == top);
}

TEST_CASE("ceiling division") {
    CHECK(ceil_div(TimeTicks(7), TimeTicks(3)) == TimeTicks(3));
    CHECK(ceil_div(TimeTicks(6), TimeTicks(3)) == TimeTicks(2));
    CHECK(ceil_div(TimeTicks(1), TimeTicks(3)) == TimeTicks(1));
    CHECK(ceil_div(TimeTicks(0), TimeTicks(5)) == TimeTicks(0));
    CHECK_THROWS_AS(ceil_div(TimeTicks(1), TimeTicks(0)), RangeError);
}

TEST_CASE("rational construction and normal form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -3) == Rational(-1, 3));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(5) == Rational(5, 1));
    CHECK_THROWS_AS(Rational(1, 0), RangeError);
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(1, 6) + Rational(1, 10) == Rational(4, 15));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 3) + Rational(-1, 3) == Rational(0));
    CHECK(Rational(-1, 2) * Rational(-1, 2) == Rational(1, 4));
}

TEST_CASE("rational ordering") {
    CHECK(Rational(1, 3) < Rational(2, 5));
    CHECK(Rational(2, 5) > Rational(1, 3));
    CHECK(Rational(1, 2) <= Rational(1, 2));
    CHECK(Rational(1, 2) >= Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(1, 3) != Rational(1, 4));
}

TEST_CASE("rational survives denominators beyond 64 bits") {
    // five near-coprime periods around 1e5: the common denominator of the
    // sum is ~1e25 and only fits in 128-bit intermediates
    const std::int64_t periods[] = {99991, 99989, 99971, 99961, 99929};
    Rational sum(0);
    double approx = 0.0;
    for (std::int64_t p : periods) {
        sum = sum + Rational(1, p);
        approx += 1.0 / static_cast<double>(p);
    }
    CHECK(sum.to_double() == doctest::Approx(approx).epsilon(1e-12));
    CHECK(sum < Rational(1));
    Rational back = sum;
    for (std::int64_t p : periods)
        back = back - Rational(1, p);
    CHECK(back == Rational(0));
}

TEST_CASE("rational parse") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("3/20") == Rational(3, 20));
    CHECK(Rational::parse("0.15") == Rational(3, 20));
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK(Rational::parse("0.65") == Rational(13, 20));
    CHECK_THROWS_AS(Rational::parse(""), InputError);
    CHECK_THROWS_AS(Rational::parse("abc"), InputError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), InputError);
    CHECK_THROWS_AS(Rational::parse("1/0"), RangeError);
    // 20 digits still fit the 128-bit internals; 45 digits cannot
    CHECK(Rational::parse("99999999999999999999").to_double() ==
          doctest::Approx(1e20).epsilon(1e-9));
    CHECK_THROWS_AS(Rational::parse(std::string(45, '9')), OverflowError);
}

TEST_CASE("rational printing") {
    CHECK(Rational(22, 45).str() == "22/45");
    CHECK(Rational(3).str() == "3");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational(0).str() == "0");
    CHECK(Rational(1, 2).to_double() == 0.5);
}
