#include <doctest.h>

#include "n3/thetalib.hpp"
#include "oracles.hpp"

using n3::Affine;
using n3::CycloNum;
using n3::Rational;
using n3::Series;
using n3::ThetaSpec;

TEST_CASE("theta expansions from the defining sum") {
    CHECK(n3::theta(0, 1, 5).str_grouped() == "1 + q*(z^1+z^-1) + q^4*(z^2+z^-2)");
    CHECK(n3::theta(1, 1, 3).str_grouped() == "q^(1/4)*(z^(1/2)+z^(-1/2)) + q^(9/4)*(z^(3/2)+z^(-3/2))");
}

TEST_CASE("periodicity and reflection") {
    for (Rational j : {Rational(0), Rational(1, 2), Rational(3, 2), Rational(-5, 2)}) {
        for (Rational m : {Rational(1), Rational(2), Rational(3)}) {
            CHECK(n3::theta(j, m, 9) == n3::theta(j + m * 2, m, 9));
            Series neg = n3::theta(ThetaSpec{-j, m, Affine{1, -1, 0, 0}}, 9);
            CHECK(neg == n3::theta(j, m, 9));
        }
    }
}

TEST_CASE("shifted arguments") {
    // theta_{0,1}(tau, z + 2 tau) = q^{-1} zeta^{-1} theta_{0,1}(tau, z)
    Series lhs = n3::theta(ThetaSpec{0, 1, Affine{1, 1, 2, 0}}, 6);
    Series rhs = n3::theta(0, 1, 8).shifted(1, -1, -1);
    CHECK(n3::equal_up_to(lhs, rhs, 6));
    // A constant shift by 1/2 flips signs of odd terms.
    Series half = n3::theta(ThetaSpec{0, 1, Affine{1, 1, 0, Rational(1, 2)}}, 5);
    CHECK(half.coeff(1, 1) == CycloNum(-1));
    CHECK(half.coeff(4, 2) == CycloNum(1));
    CHECK_THROWS_WITH(n3::theta(ThetaSpec{1, 1, Affine{1, 1, 0, Rational(1, 16)}}, 3),
                      doctest::Contains("phase outside"));
}

TEST_CASE("theta_pm") {
    CHECK(n3::theta_pm(-1, 0, 1, 5).str_grouped() == "1 - 2*q + 2*q^4");
    for (Rational j : {Rational(0), Rational(1, 2), Rational(3)}) {
        CHECK(n3::theta_pm(1, j, 2, 7) == n3::scale(n3::theta(j, 2, 7), 1, 0));
    }
}

TEST_CASE("eta against pentagonal and Jacobi oracles") {
    CHECK(n3::eta(1, 1, 13).str_grouped() == "q^(1/24) - q^(25/24) - q^(49/24) + q^(121/24) + q^(169/24) - q^(289/24)");
    CHECK(n3::eta(1, 1, 24) == oracle::eta_pentagonal(1, 24));
    CHECK(n3::eta(1, 3, 24) == oracle::eta_cubed_jacobi(24));
    Series one = n3::eta(1, -1, 10) * n3::eta(1, 1, 10);
    CHECK(n3::equal_up_to(one, Series::one(), *one.cutoff()));
    Series q = n3::eta_quotient({{Rational(1, 2), 1}, {2, 1}, {1, -2}}, 6);
    CHECK(q == oracle::eta_product({{Rational(1, 2), 1}, {2, 1}, {1, -2}}, 6));
    CHECK(q.terms().front().q == Rational(1, 48));
}

TEST_CASE("mumford thetas against classical sums") {
    CHECK(n3::mumford("00", 1, 1, 9) == oracle::mumford_classical(0, 9));
    CHECK(n3::mumford("01", 1, 1, 9) == oracle::mumford_classical(1, 9));
    CHECK(n3::mumford("10", 1, 1, 9) == oracle::mumford_classical(10, 9));
    CHECK(n3::mumford("11", 1, 1, 9) == oracle::mumford_classical(11, 9));
    CHECK(n3::scale(n3::mumford("00", 1, 1, 5), 1, 0).str_grouped() == "1 + 2*q^(1/2) + 2*q^2 + 2*q^(9/2)");
    CHECK(n3::scale(n3::mumford("01", 1, 1, 5), 1, 0).str_grouped() == "1 - 2*q^(1/2) + 2*q^2 - 2*q^(9/2)");
    CHECK(n3::mumford("00", 2, 1, 8) == n3::theta(0, 1, 8));
    CHECK(n3::mumford("10", 2, 1, 8) == n3::theta(1, 1, 8));
    CHECK_THROWS(n3::mumford("22", 1, 1, 3));
}
