#pragma once

// Exact rational numbers with a 64-bit fast path.
//
// Values whose reduced numerator and denominator fit in int64 are stored
// inline; everything else is promoted to a shared, immutable GMP rational.
// The representation is canonical: a value that fits is never kept in the
// GMP form, so equality can compare the inline fields directly.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace n3 {

class Rational {
public:
    Rational() noexcept = default;
    Rational(long long n) noexcept : num_(n) {}  // NOLINT: implicit from integers is intended
    Rational(int n) noexcept : num_(n) {}        // NOLINT
    Rational(long long n, long long d);
    explicit Rational(const mpq_class& q);

    /// Parses "p", "-p", "p/q".  Throws std::invalid_argument on malformed input.
    static Rational parse(std::string_view text);

    [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] int sign() const;
    [[nodiscard]] bool is_small() const noexcept { return !big_; }

    [[nodiscard]] mpq_class to_mpq() const;
    [[nodiscard]] mpz_class numerator() const;
    [[nodiscard]] mpz_class denominator() const;
    [[nodiscard]] double to_double() const;
    /// Integer value; throws std::domain_error if not an integer or out of range.
    [[nodiscard]] long long to_int() const;

    [[nodiscard]] Rational floor() const;
    [[nodiscard]] Rational ceil() const;
    [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string str() const;
    /// Always "p/q" (integers render as "p/1").
    [[nodiscard]] std::string str_pq() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static Rational from_i128(__int128 n, __int128 d);
    static Rational from_mpq(mpq_class q);

    int64_t num_ = 0;
    int64_t den_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace n3
