#include <doctest.h>

#include "degcalc/error.hpp"
#include "degcalc/exponent.hpp"

using degcalc::Exponent;

TEST_CASE("rational literals stay exact") {
    Exponent a = Exponent::parse("3/2");
    CHECK(a.is_rational());
    CHECK(a.num() == 3);
    CHECK(a.den() == 2);
    CHECK(Exponent::parse("-6/4") == Exponent::rational(-3, 2));
    CHECK(Exponent::parse("(1/3)") + Exponent::parse("2/3") == Exponent(1));
    CHECK((Exponent::rational(1, 3) * 3).is_integer());
}

TEST_CASE("reals compare with tolerance") {
    Exponent e = Exponent::parse("2.718281828459045");
    CHECK_FALSE(e.is_rational());
    CHECK(e == Exponent::real(2.718281828459045 + 1e-14));
    CHECK(e > Exponent(2));
    CHECK(Exponent::real(0.5) == Exponent::rational(1, 2));
}

TEST_CASE("text round trip") {
    for (const char* s : {"0", "7", "-3/2", "5/12"}) CHECK(Exponent::parse(s).to_string() == s);
    Exponent r = Exponent::real(1.0);
    CHECK(Exponent::parse(r.to_string()).is_rational() == false);
    Exponent e = Exponent::real(0.1);
    CHECK(Exponent::parse(e.to_string()).value() == 0.1);
}

TEST_CASE("malformed literals are rejected") {
    CHECK_THROWS_AS(Exponent::parse("1/0"), degcalc::ConfigError);
    CHECK_THROWS_AS(Exponent::parse("abc"), degcalc::ConfigError);
    CHECK_THROWS_AS(Exponent::parse(""), degcalc::ConfigError);
}
