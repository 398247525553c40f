#include "n3/thetalib.hpp"

#include <numeric>
#include <stdexcept>

namespace n3 {

namespace {

// Sums sign^k phase(m n c) q^{c1 m n^2 + m n b} zeta^{a m n} over
// n = j/(2m) + k.  The exponent is a convex quadratic in n, so scanning
// outward from the vertex in both directions and stopping at the first
// exponent >= order visits every contributing n.
Series theta_sum(const Rational& j, const Rational& m, const Affine& g, const Rational& order, int sign) {
    if (m.sign() <= 0) throw std::domain_error("theta: degree must be positive, got " + m.str());
    if (g.qscale.sign() <= 0) throw std::domain_error("divergent truncation: q-scale must be positive");
    const Rational base = j / (m * 2);
    const Rational a2 = g.qscale * m;
    const Rational a1 = m * g.tshift;
    auto exponent = [&](const Rational& n) { return a2 * n * n + a1 * n; };
    // Vertex of a2 n^2 + a1 n sits at n = -a1 / (2 a2).
    const Rational vertex = -a1 / (a2 * 2);
    const long long k0 = (vertex - base).floor().to_int();

    std::vector<Term> out;
    auto emit = [&](long long k) {
        Rational n = base + Rational(k);
        Rational e = exponent(n);
        if (!(e < order)) return false;
        CycloNum c = g.cshift.is_zero() ? CycloNum(1) : phase(m * n * g.cshift);
        if (sign < 0 && (k % 2 != 0)) c = -c;
        out.push_back({std::move(e), g.zcoeff * m * n, std::move(c)});
        return true;
    };
    for (long long k = k0; emit(k); --k) {
    }
    for (long long k = k0 + 1; emit(k); ++k) {
    }
    return Series::from_terms(std::move(out), order);
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    mpz_class num, den;
    mpz_class an = a.numerator() * b.denominator();
    mpz_class bn = b.numerator() * a.denominator();
    mpz_gcd(num.get_mpz_t(), an.get_mpz_t(), bn.get_mpz_t());
    den = a.denominator() * b.denominator();
    return Rational(mpq_class(num, den));
}

}  // namespace

Series theta(const ThetaSpec& spec, const Rational& order) { return theta_sum(spec.j, spec.m, spec.arg, order, 1); }

Series theta(const Rational& j, const Rational& m, const Rational& order) {
    return theta_sum(j, m, Affine::identity(), order, 1);
}

Series theta_pm(int sign, const Rational& j, const Rational& m, const Rational& order) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("theta_pm: sign must be +1 or -1");
    return theta_sum(j, m, Affine{1, 0, 0, 0}, order, sign);
}

Series eta(const Rational& c, long long e, const Rational& order) { return eta_quotient({{c, e}}, order); }

// With g the gcd of the scales, every factor is a power series in x = q^g:
// (1 - x^{(c/g) n})^e.  Positive powers multiply in place, negative powers
// divide by the unit 1 - x^k, which is again an in-place recurrence.
Series eta_quotient(const std::vector<std::pair<Rational, long long>>& factors, const Rational& order) {
    if (factors.empty()) return Series::one().truncate(order);
    Rational lead = 0;
    Rational g;
    for (const auto& [c, e] : factors) {
        if (c.sign() <= 0) throw std::domain_error("eta: scale must be positive, got " + c.str());
        lead += c * Rational(e) / Rational(24);
        g = g.is_zero() ? c : rational_gcd(g, c);
    }
    if (!(lead < order)) return Series::zero(order);
    const long long N = ((order - lead) / g).ceil().to_int();  // keep x^0 .. x^{N-1}
    std::vector<mpz_class> p(static_cast<std::size_t>(N), 0);
    p[0] = 1;
    for (const auto& [c, e] : factors) {
        const long long step = (c / g).to_int();
        for (long long n = 1; n * step < N; ++n) {
            const long long k = n * step;
            for (long long rep = 0; rep < std::abs(e); ++rep) {
                if (e > 0) {
                    for (long long i = N - 1; i >= k; --i) p[i] -= p[i - k];
                } else {
                    for (long long i = k; i < N; ++i) p[i] += p[i - k];
                }
            }
        }
    }
    std::vector<Term> out;
    for (long long i = 0; i < N; ++i) {
        if (p[i] == 0) continue;
        out.push_back({lead + g * Rational(i), 0, CycloNum(Rational(mpq_class(p[i])))});
    }
    return Series::from_terms(std::move(out), order);
}

Series mumford(const std::string& label, const Affine& arg, const Rational& order) {
    auto th = [&](long long j) { return theta(ThetaSpec{Rational(j), 2, arg}, order); };
    if (label == "00") return th(0) + th(2);
    if (label == "01") return th(0) - th(2);
    if (label == "10") return th(1) + th(-1);
    if (label == "11") return CycloNum::i() * (th(1) - th(-1));
    throw std::invalid_argument("mumford: unknown label '" + label + "'");
}

Series mumford(const std::string& label, const Rational& qscale, const Rational& zscale, const Rational& order) {
    return mumford(label, Affine::scaled(qscale, zscale), order);
}

}  // namespace n3
