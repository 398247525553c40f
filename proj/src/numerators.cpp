#include "n3/numerators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "n3/thetalib.hpp"

namespace n3 {

std::string to_string(Sector s) { return s == Sector::Half ? "half" : "integer"; }

Sector parse_sector(const std::string& s) {
    if (s == "half") return Sector::Half;
    if (s == "integer" || s == "int") return Sector::Integer;
    throw std::invalid_argument("unknown sector '" + s + "' (expected half or integer)");
}

namespace {

// (kind, m, parameter, order) -> series.  Builders are deterministic, so a
// racing duplicate insertion stores an identical value.
class Memo {
public:
    using Key = std::tuple<int, int, Rational, Rational>;

    Series get(const Key& key, const std::function<Series()>& build) {
        {
            std::shared_lock lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        Series value = build();
        std::unique_lock lock(mu_);
        return cache_.emplace(key, std::move(value)).first->second;
    }

private:
    std::shared_mutex mu_;
    std::map<Key, Series> cache_;
};

Memo& memo() {
    static Memo m;
    return m;
}

enum Kind { kHalf, kInt, kNumerator, kBracket, kDenominator };

Series qpow(const CycloNum& c, const Rational& e) { return Series::monomial(c, e, 0); }

Series half_closed(int m, int p, const Rational& w) {
    const Rational M = m + 1;
    const Rational pp = Rational(p) + Rational(1, 4);
    const int sign = (m % 2 == 1) ? 1 : -1;
    const Rational J = Rational(m) * (Rational(2 * p) + Rational(1, 2));
    Series denom = theta_pm(sign, J, M, w);
    if (denom.empty())
        throw std::domain_error("theta^(" + std::string(sign > 0 ? "+" : "-") + ")_{" + J.str() + "," + M.str() +
                                "}(tau,0) vanishes identically; the expansion for m=" + std::to_string(m) +
                                ", p=" + std::to_string(p) + " is undefined");
    const Series inv_denom = invert(denom);
    const CycloNum pref = (m * p) % 2 == 0 ? CycloNum(1) : CycloNum(-1);
    const CycloNum minus_i = -CycloNum::i();

    Series total = (minus_i * pref) * (eta(2, 3, w) * inv_denom * quotient_bracket(Rational(2 * p) + Rational(1, 2), M, w));

    Series inner = Series::zero();
    for (int k = 1; k <= m - 1; k += 2)
        inner += triple_sum_coefficient(m, k, pp, w) * theta_diff(k, m, w);
    if (m > 1) total += qpow(pref, -Rational(m) * pp * pp / M) * inv_denom * inner;

    for (int k = 1; k <= p * m; ++k) {
        Rational e = Rational(k) - Rational(1, 2) + Rational(m, 4);
        CycloNum c = minus_i * CycloNum(k % 2 == 0 ? 1 : -1);
        total += qpow(c, -e * e / Rational(m)) * theta_diff(2 * k - 1, m, w);
    }
    return total;
}

Series int_closed(int m, int p, const Rational& w) {
    const Rational M = m + 1;
    const Rational pp = Rational(p) - Rational(1, 4);
    const Rational J = Rational(m) * (Rational(2 * p) - Rational(1, 2));
    const Series inv_denom = invert(theta_pm(1, J, M, w));
    const CycloNum sgn = (m * p) % 2 == 0 ? CycloNum(1) : CycloNum(-1);
    const CycloNum pref = sgn * phase(Rational(-m, 4));
    const CycloNum minus_i = -CycloNum::i();

    Series total = (minus_i * pref) * (eta(2, 3, w) * inv_denom * quotient_bracket(Rational(2 * p) - Rational(1, 2) + M, M, w));

    Series inner = Series::zero();
    for (int k = 1; k <= m - 1; k += 2)
        inner += triple_sum_coefficient(m, k, pp, w) * theta_diff(k + m, m, w);
    if (m > 1) total += qpow(pref, -Rational(m) * pp * pp / M) * inv_denom * inner;

    for (int k = 1; k <= (m - 1) / 2; ++k) {
        Rational e = Rational(p) + Rational(1, 4) - Rational(k, m);
        CycloNum c = sgn * CycloNum(k % 2 == 0 ? 1 : -1);
        total += qpow(c, -Rational(m) * e * e) * theta_diff(2 * k, m, w);
    }
    for (int k = 1; k <= p * m; ++k) {
        Rational e = Rational(k) + Rational(m, 4);
        total += qpow(CycloNum(k % 2 == 0 ? 1 : -1), -e * e / Rational(m)) * theta_diff(2 * k, m, w);
    }
    return total;
}

}  // namespace

Series build_to_order(const Rational& order, const std::function<Series(const Rational&)>& fn, const Rational& margin) {
    Rational w = order + margin;
    Cutoff last;
    for (int attempt = 0; attempt < 16; ++attempt) {
        Series s = fn(w);
        if (!s.cutoff() || !(*s.cutoff() < order)) return s.truncate(order);
        if (last && !(*last < *s.cutoff()))
            throw std::runtime_error("working order stalled at trusted order " + cut_str(s.cutoff()) + " (requested " +
                                     order.str() + ")");
        last = s.cutoff();
        w += (order - *s.cutoff()) + Rational(1, 2);
    }
    throw std::runtime_error("working order did not reach requested order " + order.str());
}

Series theta_diff(const Rational& k, const Rational& m, const Rational& order) {
    return theta(k, m, order) - theta(-k, m, order);
}

Series quotient_bracket(const Rational& a, const Rational& M, const Rational& order) {
    Series left = theta(a, M, order) * invert(theta(Rational(-1, 2), 1, order));
    Series right = theta(-a, M, order) * invert(theta(Rational(1, 2), 1, order));
    return left - right;
}

// Terms are q^{j^2 - t^2/(4m) + (j +- pp) t} with 0 < t <= 2mj.  Since
// t^2/(4m) <= t j / 2, each exponent is at least j^2 + t (j/2 - |pp|), and
// so at least L(j) = j^2 - 2m|pp| j.  L increases for j >= m|pp|, so once
// L(j) >= bound past that point every later j is beyond the cutoff too.
Series triple_sum_coefficient(int m, int k, const Rational& pp, const Rational& bound) {
    const Rational abs_pp = pp.abs();
    const Rational mm = m;
    auto lower = [&](long long j) { return Rational(j * j) - mm * 2 * abs_pp * Rational(j); };
    const double lead = m * abs_pp.to_double();
    const double kk = std::max(0.0, bound.to_double());
    long long j_stop = static_cast<long long>(std::ceil(2 * lead + std::sqrt(kk + 4 * lead * lead))) + 1;
    while (!(lower(j_stop) >= bound) || Rational(j_stop) < mm * abs_pp) ++j_stop;

    std::vector<Term> out;
    auto push = [&](long long j, const Rational& t, const Rational& phase_plus, const Rational& phase_minus,
                    int sign) {
        const Rational base = Rational(j * j) - t * t / (mm * 4);
        const Rational e1 = base + (Rational(j) + pp) * t;
        const Rational e2 = base + (Rational(j) - pp) * t;
        const Rational floor_j = lower(j);
        if (e1 < floor_j || e2 < floor_j) throw std::logic_error("triple-sum exponent below its proven lower bound");
        CycloNum s = CycloNum(sign);
        if (e1 < bound) out.push_back({e1, 0, s * phase(phase_plus / Rational(4))});
        if (e2 < bound) out.push_back({e2, 0, s * phase(phase_minus / Rational(4))});
    };
    for (long long j = 1; j < j_stop; ++j) {
        const int sj = (j % 2 == 0) ? 1 : -1;
        for (long long r = 1; r <= j; ++r) {
            Rational t = Rational(2 * m * r - k);
            push(j, t, Rational(2 * m * r + k), Rational(2 * m * r - k), sj);
        }
        for (long long r = 0; r <= j - 1; ++r) {
            Rational t = Rational(2 * m * r + k);
            push(j, t, Rational(2 * m * r - k), Rational(2 * m * r + k), -sj);
        }
    }
    return Series::from_terms(std::move(out), bound);
}

Series numerator_half(int m, int p, const Rational& order) {
    if (m < 1) throw std::invalid_argument("numerator_half: m must be positive");
    if (p < 0) throw std::invalid_argument("numerator_half: p must be nonnegative");
    return memo().get({kHalf, m, Rational(p), order},
                      [&] { return build_to_order(order, [&](const Rational& w) { return half_closed(m, p, w); }, 2); });
}

Series numerator_int(int m, int p, const Rational& order) {
    if (m < 1) throw std::invalid_argument("numerator_int: m must be positive");
    if (m % 2 == 0) throw std::invalid_argument("integer-s numerator undefined for even m");
    if (p < 0) throw std::invalid_argument("numerator_int: p must be nonnegative");
    return memo().get({kInt, m, Rational(p), order},
                      [&] { return build_to_order(order, [&](const Rational& w) { return int_closed(m, p, w); }, 2); });
}

Series ladder_step(int m, const Rational& s, const Rational& order) {
    const Rational e = s - Rational(m, 4);
    const Rational shift = -e * e / Rational(m);
    // theta_diff is exact below its order, so ask for enough to cover the negative shift.
    Series d = theta_diff(s * 2, m, order - shift);
    return d.shifted(phase(-s / Rational(2)), shift, 0).truncate(order);
}

Series numerator(const NumeratorKey& key, const Rational& order) {
    const int m = key.m;
    const Rational& s = key.s;
    if (m < 1) throw std::invalid_argument("numerator: m must be positive");
    if (!(s * 2).is_integer()) throw std::invalid_argument("numerator: s must lie in (1/2)Z, got " + s.str());
    const bool integer = s.is_integer();
    if (integer && m % 2 == 0) throw std::invalid_argument("integer-s numerator undefined for even m");
    return memo().get({kNumerator, m, s, order}, [&] {
        Rational base = integer ? Rational(0) : Rational(1, 2);
        Series f = integer ? numerator_int(m, 0, order) : numerator_half(m, 0, order);
        for (Rational t = base; t < s; t += 1) f -= ladder_step(m, t, order);
        for (Rational t = base - 1; !(t < s); t -= 1) f += ladder_step(m, t, order);
        return f;
    });
}

std::vector<Series> u_basis(int m, Sector sector, const Rational& order) {
    if (m < 1) throw std::invalid_argument("u_basis: m must be positive");
    const Rational M = m + 1;
    const Rational a = sector == Sector::Half ? Rational(1, 2) : Rational(m) + Rational(1, 2);
    std::vector<Series> out;
    out.push_back(memo().get({kBracket, m, a, order}, [&] {
        return build_to_order(order, [&](const Rational& w) { return quotient_bracket(a, M, w); });
    }));
    for (int k = sector == Sector::Half ? 1 : 2; k <= m - 1; k += 2) out.push_back(theta_diff(k, m, order));
    return out;
}

std::vector<Rational> v_family_s(int m, Sector sector) {
    if (sector == Sector::Integer && m % 2 == 0) throw std::invalid_argument("integer-s numerator undefined for even m");
    std::vector<Rational> out;
    const Rational top = Rational(m + 1, 2);
    for (Rational s = sector == Sector::Half ? Rational(1, 2) : Rational(1); !(top < s); s += 1) out.push_back(s);
    return out;
}

std::vector<Series> v_family(int m, Sector sector, const Rational& order) {
    std::vector<Series> out;
    for (const auto& s : v_family_s(m, sector)) out.push_back(numerator({m, s}, order));
    return out;
}

bool character_supported(const ModuleLabel& l) {
    switch (l.m) {
        case 1: return l.m2 == 0 || l.m2 == 1;
        case 2: return l.m2 >= 0 && l.m2 <= 2;
        case 4: return l.m2 == 1 || l.m2 == 3;
        default: return false;
    }
}

Series character(const ModuleLabel& label, const Rational& order) {
    if (!character_supported(label))
        throw std::invalid_argument("character formula not in paper for (" + std::to_string(label.m) + "," +
                                    std::to_string(label.m2) + ")");
    const Rational half(1, 2);
    const CycloNum i = CycloNum::i();
    auto build = [&](const Rational& w) -> Series {
        auto eq = [&](std::vector<std::pair<Rational, long long>> f) { return eta_quotient(f, w); };
        auto th = [&](const char* lab) { return mumford(lab, 1, 1, w); };
        switch (label.m) {
            case 1:
                if (label.m2 == 0) return CycloNum(-1) * (theta(0, 1, w) * eq({{1, -1}}));
                return -i * (theta(1, 1, w) * eq({{1, -1}}));
            case 2: {
                if (label.m2 == 1) return i * (eq({{2, 1}, {half, -1}, {1, -1}}) * th("10"));
                Series a = eq({{half, 1}, {1, -1}, {2, -1}}) * th("01");
                Series b = eq({{half, -1}, {2, -1}}) * th("00");
                return CycloNum(Rational(-1, 2)) * (label.m2 == 0 ? a + b : a - b);
            }
            default: {
                Series t10 = th("10");
                Series a = th("01") * t10;
                Series b = eq({{2, 1}, {1, -2}}) * th("00") * t10;
                Series pre = eq({{half, -1}, {2, -1}});
                return (i * CycloNum(half)) * (pre * (label.m2 == 1 ? a + b : a - b));
            }
        }
    };
    return build_to_order(order, build);
}

Series derived_denominator(const Rational& order) {
    return memo().get({kDenominator, 1, 0, order}, [&] {
        return build_to_order(order, [&](const Rational& w) {
            Series f = numerator_half(1, 0, w);
            return CycloNum(-1) * (eta(1, 1, w) * f * invert(theta(0, 1, w)));
        });
    });
}

}  // namespace n3
