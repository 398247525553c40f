#pragma once

// Decomposition of a series over a basis with z-free coefficients.
//
// Writing every series as sum_beta S[beta](q) zeta^beta turns
// target = sum_i c_i basis_i into one equation per zeta-exponent beta, linear
// in the unknown z-free series c_i.  The system is solved by Gauss-Jordan
// elimination with truncated Laurent series as scalars; the result is then
// certified by recomputing the residual from the original inputs.

#include <optional>
#include <string>
#include <vector>

#include "n3/series.hpp"

namespace n3 {

enum class SolveStatus { Exact, NotInSpan, UnderDetermined };

std::string to_string(SolveStatus s);

struct Decomposition {
    std::vector<Series> coefficients;
    Series residual;
    SolveStatus status = SolveStatus::Exact;
    /// Order below which the residual has been recomputed and checked.
    Rational certified_order;
    /// Smallest nonzero residual monomial below the certified order, if any.
    std::optional<Mismatch> witness;

    /// Every coefficient is known below this order.
    [[nodiscard]] Cutoff coefficient_order() const;
    [[nodiscard]] bool in_span() const { return status != SolveStatus::NotInSpan; }
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Throws "insufficient trusted order" if order exceeds any input cutoff.
Decomposition decompose(const Series& target, const std::vector<Series>& basis, const Rational& order);

struct Membership {
    bool member = false;
    Rational certified_order;
    std::optional<Mismatch> witness;
};

Membership membership(const Series& target, const std::vector<Series>& basis, const Rational& order);

struct SpanComparison {
    bool equal = false;
    Rational certified_order;
    /// Describes the first element found outside the other span.
    std::string detail;
};

SpanComparison span_equal(const std::vector<Series>& a, const std::vector<Series>& b, const Rational& order);

}  // namespace n3
