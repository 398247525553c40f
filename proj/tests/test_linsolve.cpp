#include <doctest.h>

#include <algorithm>

#include "n3/linsolve.hpp"
#include "n3/thetalib.hpp"
#include "oracles.hpp"

using n3::CycloNum;
using n3::Rational;
using n3::Series;
using n3::SolveStatus;

namespace {

Series mu(const char* l, const Rational& w) { return n3::mumford(l, 1, 1, w); }

}  // namespace

TEST_CASE("theta_{0,1}^2 over theta00, theta01") {
    const Rational w = 9;
    const Series target = n3::theta(0, 1, w) * n3::theta(0, 1, w);
    auto d = n3::decompose(target, {mu("00", w), mu("01", w)}, 6);
    CHECK(d.status == SolveStatus::Exact);
    CHECK(d.certified_order == Rational(6));
    CHECK(d.residual.empty());
    REQUIRE(d.coefficients.size() == 2);
    // (1/2) eta^5/(eta(tau/2) eta(2tau))^2 and (1/2) eta(tau/2)^2/eta
    const Series c0 = CycloNum(Rational(1, 2)) * oracle::eta_product({{1, 5}, {Rational(1, 2), -2}, {2, -2}}, 6);
    const Series c1 = CycloNum(Rational(1, 2)) * oracle::eta_product({{1, -1}, {Rational(1, 2), 2}}, 6);
    const Rational co = std::min(*d.coefficient_order(), Rational(6));
    CHECK(co >= Rational(4));
    CHECK(n3::equal_up_to(d.coefficients[0], c0, co));
    CHECK(n3::equal_up_to(d.coefficients[1], c1, co));
}

TEST_CASE("not in span and under-determined") {
    const Rational w = 8;
    auto d = n3::decompose(mu("10", w), {mu("00", w), mu("01", w)}, 6);
    CHECK(d.status == SolveStatus::NotInSpan);
    REQUIRE(d.witness.has_value());
    CHECK(d.witness->q == Rational(1, 8));
    CHECK(d.witness->z == Rational(-1, 2));
    CHECK_FALSE(n3::membership(mu("10", w), {mu("00", w)}, 6).member);

    const Series t = mu("00", w);
    auto u = n3::decompose(t, {t, CycloNum(2) * t}, 6);
    CHECK(u.status == SolveStatus::UnderDetermined);
    CHECK(u.in_span());
}

TEST_CASE("trusted order is enforced") {
    CHECK_THROWS_WITH(n3::decompose(n3::theta(0, 1, 3), {n3::theta(0, 1, 8)}, 5),
                      doctest::Contains("insufficient trusted order"));
    CHECK_THROWS_AS(n3::decompose(n3::theta(0, 1, 3), {}, 2), std::invalid_argument);
}

TEST_CASE("span comparison") {
    const Rational w = 8;
    auto eq = n3::span_equal({mu("00", w), mu("01", w)}, {n3::theta(0, 2, w), n3::theta(2, 2, w)}, 6);
    CHECK(eq.equal);
    CHECK(eq.certified_order == Rational(6));
    auto ne = n3::span_equal({mu("00", w), mu("01", w)}, {n3::theta(0, 2, w)}, 6);
    CHECK_FALSE(ne.equal);
    CHECK(ne.detail.find("not in span") != std::string::npos);
}

TEST_CASE("report is deterministic") {
    const Rational w = 8;
    auto a = n3::decompose(n3::theta(1, 1, w) * n3::theta(1, 1, w), {mu("00", w), mu("01", w)}, 6).to_json();
    auto b = n3::decompose(n3::theta(1, 1, w) * n3::theta(1, 1, w), {mu("00", w), mu("01", w)}, 6).to_json();
    CHECK(a.dump() == b.dump());
    CHECK(a["status"] == "exact");
    CHECK(a["certified_order"] == "6/1");
    CHECK(a["witness"].is_null());
}
