#include <doctest.h>

#include <random>

#include "n3/cyclo.hpp"

using n3::CycloNum;
using n3::Rational;

namespace {

CycloNum random_cyclo(std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    return {Rational(d(rng), den(rng)), Rational(d(rng), den(rng)), Rational(d(rng), den(rng)),
            Rational(d(rng), den(rng))};
}

}  // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational::parse(" -6/4 ") == Rational(-3, 2));
    CHECK(Rational(6).str_pq() == "6/1");
    CHECK(Rational(-7, 2).floor() == Rational(-4));
    CHECK(Rational(-7, 2).ceil() == Rational(-3));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse("x"));
}

TEST_CASE("rational promotes past 64 bits and demotes back") {
    Rational big(1LL << 62);
    Rational sq = big * big * big;
    CHECK_FALSE(sq.is_small());
    Rational back = sq / big / big;
    CHECK(back.is_small());
    CHECK(back == big);
    CHECK(sq > big);
    CHECK((-sq) < Rational(0));
    CHECK(Rational::parse(sq.str()) == sq);
}

TEST_CASE("phase") {
    CHECK(n3::phase(Rational(1, 2)) == CycloNum(-1));
    CHECK(n3::phase(Rational(1, 4)) == CycloNum::i());
    CHECK(n3::phase(Rational(1, 8)) == CycloNum::w());
    CHECK(n3::phase(Rational(-7, 8)) == CycloNum::w());
    CHECK(n3::phase(Rational(13, 4)) == n3::phase(Rational(1, 4)));
    CHECK_THROWS_WITH(n3::phase(Rational(1, 16)), doctest::Contains("phase outside"));
    for (int a = -8; a <= 8; ++a) {
        for (int b = -8; b <= 8; ++b) {
            CHECK(n3::phase(Rational(a, 8)) * n3::phase(Rational(b, 8)) == n3::phase(Rational(a + b, 8)));
        }
        CycloNum p = n3::phase(Rational(a, 8));
        CycloNum p8 = 1;
        for (int k = 0; k < 8; ++k) p8 *= p;
        CHECK(p8 == CycloNum(1));
    }
}

TEST_CASE("field arithmetic examples") {
    CycloNum i = CycloNum::i();
    CHECK((CycloNum(1) + i) * (CycloNum(1) - i) == CycloNum(2));
    CHECK(CycloNum::w() * CycloNum(0, 0, 0, 1) == CycloNum(-1));
    CHECK(CycloNum::w().inv() == CycloNum(0, 0, 0, -1));
    CHECK(CycloNum(2).inv() == CycloNum(Rational(1, 2)));
    CycloNum x = (CycloNum(1) + i).inv();
    CHECK(x == CycloNum(Rational(1, 2), 0, Rational(-1, 2), 0));
    CHECK((CycloNum(1) + i) * x == CycloNum(1));
    CHECK_THROWS((void)CycloNum().inv());
    CHECK(CycloNum(Rational(1, 2), -1, 0, 3).str() == "1/2 - w + 3*w^3");
    CHECK(CycloNum().str() == "0");
}

TEST_CASE("field axioms on random inputs") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 200; ++iter) {
        CycloNum a = random_cyclo(rng), b = random_cyclo(rng), c = random_cyclo(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + (-a)).is_zero());
        if (!a.is_zero()) {
            CHECK(a * a.inv() == CycloNum(1));
        }
    }
}
