#pragma once

// Reference expansions built from classical closed sums.  None of these go
// through the library's theta or eta generators; they only use Series as a
// container and its ring operations.

#include <cstdlib>
#include <utility>
#include <vector>

#include "n3/series.hpp"

namespace oracle {

using n3::CycloNum;
using n3::Rational;
using n3::Series;
using n3::Term;

// q^{c/24} sum_k (-1)^k q^{c k(3k-1)/2}   (Euler's pentagonal theorem)
inline Series eta_pentagonal(const Rational& c, const Rational& order) {
    std::vector<Term> t;
    for (long long k = -200; k <= 200; ++k) {
        Rational e = c / Rational(24) + c * Rational(k * (3 * k - 1), 2);
        if (e < order) t.push_back({e, 0, CycloNum((k % 2 == 0) ? 1 : -1)});
    }
    return Series::from_terms(std::move(t), order);
}

// sum_{n>=0} (-1)^n (2n+1) q^{n(n+1)/2 + 1/8}   (Jacobi's identity for eta^3)
inline Series eta_cubed_jacobi(const Rational& order) {
    std::vector<Term> t;
    for (long long n = 0; n < 400; ++n) {
        Rational e = Rational(n * (n + 1), 2) + Rational(1, 8);
        if (!(e < order)) break;
        t.push_back({e, 0, CycloNum((n % 2 == 0 ? 1 : -1) * (2 * n + 1))});
    }
    return Series::from_terms(std::move(t), order);
}

// prod eta(c tau)^e from pentagonal sums, with negative powers via series inversion.
inline Series eta_product(const std::vector<std::pair<Rational, long long>>& f, const Rational& order) {
    // Work with enough slack that products and inverses stay trusted below order.
    Rational slack = 2;
    Series acc = Series::one();
    for (const auto& [c, e] : f) {
        Series base = eta_pentagonal(c, order + slack + Rational(std::llabs(e)));
        if (e < 0) base = n3::invert(base);
        for (long long i = 0; i < std::llabs(e); ++i) acc = acc * base;
    }
    return acc.truncate(order);
}

// Classical Mumford thetas as single sums over N:
//   00: N in Z, 01: N in Z with (-1)^N, 10: N in 1/2 + Z, 11: N in 1/2 + Z with e^{pi i N};
// each term q^{N^2/2} zeta^N.
inline Series mumford_classical(int label, const Rational& order) {
    std::vector<Term> t;
    Rational shift = (label == 10 || label == 11) ? Rational(1, 2) : Rational(0);
    for (long long k = -100; k <= 100; ++k) {
        Rational N = shift + Rational(k);
        Rational e = N * N / Rational(2);
        if (!(e < order)) continue;
        CycloNum c = 1;
        if (label == 1 && k % 2 != 0) c = -1;
        if (label == 11) c = n3::phase(N / Rational(2));
        t.push_back({e, N, c});
    }
    return Series::from_terms(std::move(t), order);
}

}  // namespace oracle
