#pragma once

// Character numerators F^{[m,s]} of the N=3 modules, the theta-quotient
// bases U^{[m,s]}, the explicit characters for m = 1, 2, 4 and the derived
// denominator.
//
// Every builder returns a series whose cutoff equals the requested order.
// Intermediate quotients lose trusted precision, so builders work at a
// higher internal order and raise it until the result reaches the request.

#include <functional>
#include <string>
#include <vector>

#include "n3/series.hpp"

namespace n3 {

enum class Sector { Half, Integer };

std::string to_string(Sector s);
Sector parse_sector(const std::string& s);

struct ModuleLabel {
    int m = 1;
    int m2 = 0;
};

struct NumeratorKey {
    int m = 1;
    Rational s = Rational(1, 2);
};

/// Evaluates fn at increasing working orders until its cutoff reaches order,
/// then truncates to order.  Throws if the cutoff stops improving.
Series build_to_order(const Rational& order, const std::function<Series(const Rational&)>& fn,
                      const Rational& margin = 1);

/// theta_{k,m} - theta_{-k,m}
Series theta_diff(const Rational& k, const Rational& m, const Rational& order);

/// theta_{a,M} / theta_{-1/2,1} - theta_{-a,M} / theta_{1/2,1}
Series quotient_bracket(const Rational& a, const Rational& M, const Rational& order);

/// The double sum multiplying [theta_{k,m} - theta_{-k,m}] in the closed
/// expansion of the numerators, with shift pp = p + 1/4 (half sector) or
/// p - 1/4 (integer sector).  Exact below bound.
Series triple_sum_coefficient(int m, int k, const Rational& pp, const Rational& bound);

/// Closed expansion of F^{[m,1/2]} using shift parameter p >= 0.
Series numerator_half(int m, int p, const Rational& order);
/// Closed expansion of F^{[m,0]} for odd m using shift parameter p >= 0.
Series numerator_int(int m, int p, const Rational& order);

/// e^{-pi i s} q^{-(s - m/4)^2/m} [theta_{2s,m} - theta_{-2s,m}] = F^{[m,s]} - F^{[m,s+1]}.
Series ladder_step(int m, const Rational& s, const Rational& order);

/// F^{[m,s]} from the sector base by repeated ladder steps.
Series numerator(const NumeratorKey& key, const Rational& order);

std::vector<Series> u_basis(int m, Sector sector, const Rational& order);

/// The s-values spanning V^{[m,s]}: s in 1/2 + Z (half) or Z (integer), 0 < s <= (m+1)/2,
/// which together with the ladder reach every F^{[m,s]}.
std::vector<Rational> v_family_s(int m, Sector sector);
std::vector<Series> v_family(int m, Sector sector, const Rational& order);

bool character_supported(const ModuleLabel& label);
Series character(const ModuleLabel& label, const Rational& order);

/// R_0 = -eta(tau) F^{[1,1/2]} / theta_{0,1}.
Series derived_denominator(const Rational& order);

}  // namespace n3
