#pragma once

// Truncated bivariate Laurent-Puiseux series in q and zeta = e^{2 pi i z}
// with coefficients in Q(zeta_8).
//
// A series carries a cutoff: every coefficient with q-exponent below the
// cutoff is exact, nothing at or above it is stored.  An absent cutoff means
// the series is exact in full (a finite sum).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "n3/cyclo.hpp"

namespace n3 {

/// Exclusive bound on trusted q-exponents; std::nullopt is +infinity.
using Cutoff = std::optional<Rational>;

Cutoff cut_min(const Cutoff& a, const Cutoff& b);
Cutoff cut_add(const Cutoff& a, const Cutoff& b);
bool cut_less(const Rational& x, const Cutoff& c);  // x < c
std::string cut_str(const Cutoff& c);               // "p/q" or "inf"

struct Term {
    Rational q;
    Rational z;
    CycloNum c;
};

struct Mismatch {
    Rational q;
    Rational z;
    CycloNum lhs;
    CycloNum rhs;
};

class Series {
public:
    /// The exact zero series.
    Series() = default;

    /// Builds a series from arbitrary terms: sorts, merges duplicates, drops
    /// zeros and anything at or above the cutoff.
    static Series from_terms(std::vector<Term> terms, Cutoff cutoff = std::nullopt);
    static Series zero(Cutoff cutoff = std::nullopt);
    static Series one();
    static Series monomial(const CycloNum& c, const Rational& q, const Rational& z = 0);

    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] const Cutoff& cutoff() const { return cutoff_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    /// Lowest stored q-exponent, or the cutoff when nothing is stored.
    [[nodiscard]] Cutoff ord() const;
    [[nodiscard]] CycloNum coeff(const Rational& q, const Rational& z) const;

    /// Drops terms with q-exponent >= order and lowers the cutoff to order.
    [[nodiscard]] Series truncate(const Rational& order) const;
    /// Same terms, cutoff replaced; terms beyond the new cutoff are dropped.
    [[nodiscard]] Series with_cutoff(const Cutoff& c) const;

    [[nodiscard]] bool is_zfree() const;
    /// Terms grouped by z-exponent, each group as a z-free series.
    [[nodiscard]] std::map<Rational, Series> zslices() const;
    /// Multiplies every exponent pair by (q^dq z^dz) and every coefficient by c.
    [[nodiscard]] Series shifted(const CycloNum& c, const Rational& dq, const Rational& dz = 0) const;

    /// "coeff * q^(p/r) * z^(s/t) + ..." in ascending order; "0" if empty.
    [[nodiscard]] std::string str() const;
    /// "1 + q*(z^1+z^-1) + ..." grouped by q-level, z descending.
    [[nodiscard]] std::string str_grouped() const;
    [[nodiscard]] nlohmann::json to_json() const;
    static Series from_json(const nlohmann::json& j);

    Series operator-() const;
    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(const CycloNum& c, const Series& a);
    friend Series operator/(const Series& a, const Series& b);
    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    /// Exact structural equality: same terms and same cutoff.
    friend bool operator==(const Series& a, const Series& b);

private:
    std::vector<Term> terms_;
    Cutoff cutoff_;
};

/// Multiplicative inverse; requires a single-monomial leading layer.  The
/// result cutoff is a.cutoff - 2 ord(a); when a is exact, max_order bounds it.
Series invert(const Series& a, const Cutoff& max_order = std::nullopt);

/// tau -> cq tau, z -> cz z.  cz = 0 gives the z = 0 slice.
Series scale(const Series& a, const Rational& cq, const Rational& cz);

Series power(const Series& a, long long e, const Cutoff& max_order = std::nullopt);

/// Compares a and b below order.  Throws "insufficient trusted order" if order
/// exceeds either cutoff.  Returns the smallest mismatching monomial, if any.
std::optional<Mismatch> first_mismatch(const Series& a, const Series& b, const Rational& order);
bool equal_up_to(const Series& a, const Series& b, const Rational& order);

// Spec-facing names.
inline Series s_add(const Series& a, const Series& b) { return a + b; }
inline Series s_mul(const Series& a, const Series& b) { return a * b; }
inline Series s_invert(const Series& a, const Cutoff& max_order = std::nullopt) { return invert(a, max_order); }
inline Series s_scale(const Series& a, const Rational& cq, const Rational& cz) { return scale(a, cq, cz); }
inline bool s_is_zfree(const Series& a) { return a.is_zfree(); }

}  // namespace n3
