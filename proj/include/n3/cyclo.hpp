#pragma once

// The field Q(zeta_8) = Q[w]/(w^4 + 1), w = e^{2 pi i / 8}.

#include <array>
#include <iosfwd>
#include <string>

#include "n3/rational.hpp"

namespace n3 {

class CycloNum {
public:
    CycloNum() = default;
    CycloNum(const Rational& r) : c_{r, 0, 0, 0} {}  // NOLINT
    CycloNum(long long r) : c_{Rational(r), 0, 0, 0} {}  // NOLINT
    CycloNum(int r) : c_{Rational(r), 0, 0, 0} {}        // NOLINT
    CycloNum(Rational c0, Rational c1, Rational c2, Rational c3) : c_{c0, c1, c2, c3} {}

    static CycloNum w() { return {0, 1, 0, 0}; }
    static CycloNum i() { return {0, 0, 1, 0}; }

    [[nodiscard]] const Rational& operator[](int k) const { return c_[k]; }
    [[nodiscard]] const std::array<Rational, 4>& coeffs() const { return c_; }
    [[nodiscard]] bool is_zero() const {
        return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero();
    }
    [[nodiscard]] bool is_rational() const { return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }

    /// Multiplicative inverse; throws std::domain_error on zero.
    [[nodiscard]] CycloNum inv() const;
    /// "c0 + c1*w + c2*w^2 + c3*w^3" with zero terms elided; "0" for zero.
    [[nodiscard]] std::string str() const;

    CycloNum operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }
    CycloNum& operator+=(const CycloNum& o);
    CycloNum& operator-=(const CycloNum& o);
    CycloNum& operator*=(const CycloNum& o) { return *this = *this * o; }

    friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
    friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
    friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
    friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inv(); }
    friend bool operator==(const CycloNum& a, const CycloNum& b) = default;

    friend std::ostream& operator<<(std::ostream& os, const CycloNum& c);

private:
    std::array<Rational, 4> c_{};
};

/// e^{2 pi i r}.  Requires 8r to be an integer, else throws "phase outside Q(zeta_8)".
CycloNum phase(const Rational& r);

inline CycloNum cyc_add(const CycloNum& a, const CycloNum& b) { return a + b; }
inline CycloNum cyc_mul(const CycloNum& a, const CycloNum& b) { return a * b; }
inline CycloNum cyc_neg(const CycloNum& a) { return -a; }
inline CycloNum cyc_inv(const CycloNum& a) { return a.inv(); }

}  // namespace n3
