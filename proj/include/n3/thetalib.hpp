#pragma once

// Jacobi theta functions, their sign-twisted variants, Dedekind eta powers
// and the Mumford thetas, all expanded as truncated series.
//
//   theta_{j,m}(tau, z) = sum_{n in j/(2m) + Z} q^{m n^2} zeta^{m n}

#include <string>
#include <utility>
#include <vector>

#include "n3/series.hpp"

namespace n3 {

/// The argument substitution tau -> qscale*tau, z -> zcoeff*z + tshift*tau + cshift.
struct Affine {
    Rational qscale = 1;
    Rational zcoeff = 1;
    Rational tshift = 0;
    Rational cshift = 0;

    static Affine identity() { return {}; }
    static Affine scaled(Rational qs, Rational zs) { return {std::move(qs), std::move(zs), 0, 0}; }
};

struct ThetaSpec {
    Rational j;
    Rational m = 1;
    Affine arg;
};

/// theta_{j,m} at the transformed argument, every term with q-exponent below order.
Series theta(const ThetaSpec& spec, const Rational& order);
Series theta(const Rational& j, const Rational& m, const Rational& order);

/// sum_k sign^k q^{m (j/(2m) + k)^2}: the sign-twisted theta at z = 0.
/// Depends on the representative j, not only on its class mod 2m.
Series theta_pm(int sign, const Rational& j, const Rational& m, const Rational& order);

/// eta(c tau)^e = q^{c e/24} prod_{n>=1} (1 - q^{c n})^e.
Series eta(const Rational& c, long long e, const Rational& order);

/// prod_i eta(c_i tau)^{e_i}, expanded as one series.
Series eta_quotient(const std::vector<std::pair<Rational, long long>>& factors, const Rational& order);

/// Mumford theta with label "00", "01", "10" or "11".
Series mumford(const std::string& label, const Affine& arg, const Rational& order);
Series mumford(const std::string& label, const Rational& qscale, const Rational& zscale, const Rational& order);

}  // namespace n3
