#include "n3/cyclo.hpp"

#include <ostream>
#include <stdexcept>

namespace n3 {

CycloNum& CycloNum::operator+=(const CycloNum& o) {
    for (int k = 0; k < 4; ++k)
        if (!o.c_[k].is_zero()) c_[k] += o.c_[k];
    return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
    for (int k = 0; k < 4; ++k)
        if (!o.c_[k].is_zero()) c_[k] -= o.c_[k];
    return *this;
}

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    if (b.is_rational()) {
        if (b.c_[0] == Rational(1)) return a;
        return {a.c_[0] * b.c_[0], a.c_[1] * b.c_[0], a.c_[2] * b.c_[0], a.c_[3] * b.c_[0]};
    }
    if (a.is_rational()) return b * a;
    // w^k for k >= 4 folds back with a sign flip.
    std::array<Rational, 4> r{};
    for (int x = 0; x < 4; ++x) {
        if (a.c_[x].is_zero()) continue;
        for (int y = 0; y < 4; ++y) {
            if (b.c_[y].is_zero()) continue;
            Rational p = a.c_[x] * b.c_[y];
            int k = x + y;
            if (k < 4)
                r[k] += p;
            else
                r[k - 4] -= p;
        }
    }
    return {r[0], r[1], r[2], r[3]};
}

CycloNum CycloNum::inv() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(zeta_8)");
    if (is_rational()) return CycloNum(Rational(1) / c_[0]);
    // Galois conjugates w -> w^3, w^5, w^7; their product with *this is the rational norm.
    const auto& c = c_;
    CycloNum s3(c[0], c[3], -c[2], c[1]);
    CycloNum s5(c[0], -c[1], c[2], -c[3]);
    CycloNum s7(c[0], -c[3], -c[2], -c[1]);
    CycloNum adj = s3 * s5 * s7;
    CycloNum norm = *this * adj;
    if (!norm.is_rational()) throw std::logic_error("norm in Q(zeta_8) not rational");
    return adj * CycloNum(Rational(1) / norm.c_[0]);
}

std::string CycloNum::str() const {
    static const char* const kBasis[4] = {"", "w", "w^2", "w^3"};
    std::string out;
    for (int k = 0; k < 4; ++k) {
        if (c_[k].is_zero()) continue;
        Rational v = c_[k];
        if (!out.empty()) {
            out += v.sign() < 0 ? " - " : " + ";
            v = v.abs();
        }
        if (k == 0)
            out += v.str();
        else if (v == Rational(1))
            out += kBasis[k];
        else if (v == Rational(-1))
            out += std::string("-") + kBasis[k];
        else
            out += v.str() + "*" + kBasis[k];
    }
    return out.empty() ? "0" : out;
}

std::ostream& operator<<(std::ostream& os, const CycloNum& c) { return os << c.str(); }

CycloNum phase(const Rational& r) {
    Rational e = r * Rational(8);
    if (!e.is_integer()) throw std::domain_error("phase outside Q(zeta_8): e^{2 pi i * " + r.str() + "}");
    long long k = ((e.to_int() % 8) + 8) % 8;
    Rational sign = k >= 4 ? Rational(-1) : Rational(1);
    std::array<Rational, 4> c{};
    c[k % 4] = sign;
    return {c[0], c[1], c[2], c[3]};
}

}  // namespace n3
