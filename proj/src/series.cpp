#include "n3/series.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace n3 {

Cutoff cut_min(const Cutoff& a, const Cutoff& b) {
    if (!a) return b;
    if (!b) return a;
    return min(*a, *b);
}

Cutoff cut_add(const Cutoff& a, const Cutoff& b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

bool cut_less(const Rational& x, const Cutoff& c) { return !c || x < *c; }

std::string cut_str(const Cutoff& c) { return c ? c->str_pq() : "inf"; }

namespace {

bool key_less(const Term& a, const Term& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.z < b.z;
}

bool same_key(const Term& a, const Term& b) { return a.q == b.q && a.z == b.z; }

// Sorts, merges equal keys and drops zeros.
void normalize(std::vector<Term>& t) {
    std::sort(t.begin(), t.end(), key_less);
    std::size_t out = 0;
    for (std::size_t i = 0; i < t.size();) {
        Term acc = std::move(t[i]);
        std::size_t j = i + 1;
        for (; j < t.size() && same_key(t[j], acc); ++j) acc.c += t[j].c;
        if (!acc.c.is_zero()) t[out++] = std::move(acc);
        i = j;
    }
    t.resize(out);
}

std::string exp_paren(const Rational& r) { return "(" + r.str_pq() + ")"; }

std::string coeff_text(const CycloNum& c) {
    int nonzero = 0;
    for (const auto& x : c.coeffs()) nonzero += !x.is_zero();
    std::string s = c.str();
    return nonzero > 1 ? "(" + s + ")" : s;
}

}  // namespace

Series Series::from_terms(std::vector<Term> terms, Cutoff cutoff) {
    Series s;
    s.cutoff_ = std::move(cutoff);
    if (s.cutoff_)
        std::erase_if(terms, [&](const Term& t) { return !(t.q < *s.cutoff_); });
    normalize(terms);
    s.terms_ = std::move(terms);
    return s;
}

Series Series::zero(Cutoff cutoff) {
    Series s;
    s.cutoff_ = std::move(cutoff);
    return s;
}

Series Series::one() { return monomial(1, 0, 0); }

Series Series::monomial(const CycloNum& c, const Rational& q, const Rational& z) {
    Series s;
    if (!c.is_zero()) s.terms_.push_back({q, z, c});
    return s;
}

Cutoff Series::ord() const {
    if (terms_.empty()) return cutoff_;
    return terms_.front().q;
}

CycloNum Series::coeff(const Rational& q, const Rational& z) const {
    Term key{q, z, {}};
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key, key_less);
    if (it != terms_.end() && same_key(*it, key)) return it->c;
    return {};
}

Series Series::truncate(const Rational& order) const { return with_cutoff(cut_min(cutoff_, order)); }

Series Series::with_cutoff(const Cutoff& c) const {
    Series s;
    s.cutoff_ = c;
    if (!c) {
        s.terms_ = terms_;
        return s;
    }
    for (const auto& t : terms_) {
        if (!(t.q < *c)) break;
        s.terms_.push_back(t);
    }
    return s;
}

bool Series::is_zfree() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.z.is_zero(); });
}

std::map<Rational, Series> Series::zslices() const {
    std::map<Rational, Series> out;
    for (const auto& t : terms_) {
        auto [it, fresh] = out.try_emplace(t.z, Series::zero(cutoff_));
        it->second.terms_.push_back({t.q, 0, t.c});
    }
    return out;
}

Series Series::shifted(const CycloNum& c, const Rational& dq, const Rational& dz) const {
    if (c.is_zero()) return zero(cut_add(cutoff_, dq));
    Series s;
    s.cutoff_ = cut_add(cutoff_, dq);
    s.terms_.reserve(terms_.size());
    for (const auto& t : terms_) s.terms_.push_back({t.q + dq, t.z + dz, t.c * c});
    return s;
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& t : s.terms_) t.c = -t.c;
    return s;
}

namespace {

Series merge_add(const Series& a, const Series& b, bool subtract) {
    Cutoff c = cut_min(a.cutoff(), b.cutoff());
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        const Term* next;
        Term tmp;
        if (j == y.size() || (i < x.size() && key_less(x[i], y[j]))) {
            next = &x[i++];
        } else if (i == x.size() || key_less(y[j], x[i])) {
            tmp = y[j++];
            if (subtract) tmp.c = -tmp.c;
            next = &tmp;
        } else {
            tmp = x[i++];
            if (subtract)
                tmp.c -= y[j++].c;
            else
                tmp.c += y[j++].c;
            next = &tmp;
        }
        if (!cut_less(next->q, c)) break;
        if (!next->c.is_zero()) out.push_back(*next);
    }
    return Series::from_terms(std::move(out), c);
}

}  // namespace

Series operator+(const Series& a, const Series& b) { return merge_add(a, b, false); }
Series operator-(const Series& a, const Series& b) { return merge_add(a, b, true); }

Series operator*(const Series& a, const Series& b) {
    Cutoff c = cut_min(cut_add(a.cutoff(), b.ord()), cut_add(b.cutoff(), a.ord()));
    std::vector<Term> acc;
    for (const auto& x : a.terms()) {
        if (!b.empty() && !cut_less(x.q + b.terms().front().q, c)) break;
        for (const auto& y : b.terms()) {
            Rational q = x.q + y.q;
            if (!cut_less(q, c)) break;
            acc.push_back({std::move(q), x.z + y.z, x.c * y.c});
        }
    }
    return Series::from_terms(std::move(acc), c);
}

Series operator*(const CycloNum& c, const Series& a) { return a.shifted(c, 0, 0); }

Series operator/(const Series& a, const Series& b) { return a * invert(b); }

bool operator==(const Series& a, const Series& b) {
    if (a.cutoff_ != b.cutoff_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (x.q != y.q || x.z != y.z || x.c != y.c) return false;
    }
    return true;
}

// Writes a = c q^alpha zeta^beta (1 - h) with h supported on positive
// q-exponents, then solves r = 1 + h r one q-level at a time.  Level gamma of
// r only needs levels gamma - delta for delta in the q-support of h, so the
// frontier of candidate levels is grown from nonzero levels only.
Series invert(const Series& a, const Cutoff& max_order) {
    if (a.empty()) throw std::domain_error("cannot invert a series with no trusted terms");
    const auto& t = a.terms();
    const Rational alpha = t.front().q;
    if (t.size() > 1 && t[1].q == alpha)
        throw std::domain_error("non-unit leading coefficient: leading q-layer has more than one monomial");
    const Rational beta = t.front().z;
    const CycloNum cinv = t.front().c.inv();

    Cutoff target = cut_min(a.cutoff() ? Cutoff(*a.cutoff() - alpha - alpha) : std::nullopt, max_order);
    if (!target) throw std::domain_error("inverting an exact series requires a maximum order");
    // In normalized units (after dividing out q^alpha) the trusted bound is target + alpha.
    const Rational bound = *target + alpha;

    using Poly = std::map<Rational, CycloNum>;
    std::map<Rational, Poly> h;
    for (std::size_t i = 1; i < t.size(); ++i) {
        Rational dq = t[i].q - alpha;
        if (!(dq < bound)) break;
        h[dq][t[i].z - beta] -= t[i].c * cinv;
    }

    std::map<Rational, Poly> r;
    std::set<Rational> frontier{Rational(0)};
    while (!frontier.empty()) {
        Rational g = *frontier.begin();
        frontier.erase(frontier.begin());
        Poly level;
        if (g.is_zero()) {
            level[0] = 1;
        } else {
            for (const auto& [d, hp] : h) {
                if (g < d) break;
                auto it = r.find(g - d);
                if (it == r.end()) continue;
                for (const auto& [zh, ch] : hp)
                    for (const auto& [zr, cr] : it->second) level[zh + zr] += ch * cr;
            }
            std::erase_if(level, [](const auto& kv) { return kv.second.is_zero(); });
        }
        if (level.empty()) continue;
        for (const auto& [d, hp] : h) {
            Rational n = g + d;
            if (!(n < bound)) break;
            frontier.insert(n);
        }
        r.emplace(g, std::move(level));
    }

    std::vector<Term> out;
    for (const auto& [g, poly] : r)
        for (const auto& [z, c] : poly) out.push_back({g - alpha, z - beta, c * cinv});
    return Series::from_terms(std::move(out), target);
}

Series scale(const Series& a, const Rational& cq, const Rational& cz) {
    if (cq.sign() <= 0) throw std::domain_error("scale: q-scale must be positive, got " + cq.str());
    std::vector<Term> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) out.push_back({t.q * cq, t.z * cz, t.c});
    Cutoff c = a.cutoff() ? Cutoff(*a.cutoff() * cq) : std::nullopt;
    return Series::from_terms(std::move(out), c);
}

Series power(const Series& a, long long e, const Cutoff& max_order) {
    if (e < 0) return power(invert(a, max_order), -e, max_order);
    Series result = Series::one();
    Series base = a;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    if (max_order) result = result.truncate(*max_order);
    return result;
}

std::optional<Mismatch> first_mismatch(const Series& a, const Series& b, const Rational& order) {
    if (a.cutoff() && *a.cutoff() < order)
        throw std::domain_error("insufficient trusted order: requested " + order.str() + ", lhs trusted below " +
                                cut_str(a.cutoff()));
    if (b.cutoff() && *b.cutoff() < order)
        throw std::domain_error("insufficient trusted order: requested " + order.str() + ", rhs trusted below " +
                                cut_str(b.cutoff()));
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && key_less(x[i], y[j]))) {
            if (!(x[i].q < order)) break;
            return Mismatch{x[i].q, x[i].z, x[i].c, {}};
        }
        if (i == x.size() || key_less(y[j], x[i])) {
            if (!(y[j].q < order)) break;
            return Mismatch{y[j].q, y[j].z, {}, y[j].c};
        }
        if (!(x[i].q < order)) break;
        if (x[i].c != y[j].c) return Mismatch{x[i].q, x[i].z, x[i].c, y[j].c};
        ++i;
        ++j;
    }
    return std::nullopt;
}

bool equal_up_to(const Series& a, const Series& b, const Rational& order) {
    return !first_mismatch(a, b, order).has_value();
}

std::string Series::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += " + ";
        out += coeff_text(t.c) + " * q^" + exp_paren(t.q) + " * z^" + exp_paren(t.z);
    }
    return out;
}

namespace {

std::string q_part(const Rational& q) {
    if (q.is_zero()) return "";
    if (q == Rational(1)) return "q";
    if (q.is_integer()) return "q^" + q.str();
    return "q^(" + q.str() + ")";
}

std::string z_part(const Rational& z) {
    if (z.is_integer()) return "z^" + z.str();
    return "z^(" + z.str() + ")";
}

// One monomial "c*z^b" with unit coefficients elided; sign kept in front.
std::string poly_term(const CycloNum& c, const Rational& z) {
    bool rational = c.is_rational();
    if (z.is_zero()) return rational ? c[0].str() : "(" + c.str() + ")";
    if (rational && c[0] == Rational(1)) return z_part(z);
    if (rational && c[0] == Rational(-1)) return "-" + z_part(z);
    return (rational ? c[0].str() : "(" + c.str() + ")") + "*" + z_part(z);
}

}  // namespace

std::string Series::str_grouped() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size();) {
        std::size_t j = i;
        while (j < terms_.size() && terms_[j].q == terms_[i].q) ++j;
        const Rational& q = terms_[i].q;
        std::string qs = q_part(q);
        std::string level;
        bool negative = false;
        if (j - i == 1 && terms_[i].z.is_zero()) {
            const CycloNum& c = terms_[i].c;
            if (c.is_rational()) {
                Rational v = c[0];
                if (!out.empty() && v.sign() < 0) {
                    negative = true;
                    v = -v;
                }
                if (qs.empty())
                    level = v.str();
                else if (v == Rational(1))
                    level = qs;
                else if (v == Rational(-1))
                    level = "-" + qs;
                else
                    level = v.str() + "*" + qs;
            } else {
                level = "(" + c.str() + ")" + (qs.empty() ? "" : "*" + qs);
            }
        } else {
            std::string poly;
            for (std::size_t k = j; k-- > i;) {
                std::string m = poly_term(terms_[k].c, terms_[k].z);
                if (!poly.empty() && m.front() != '-') poly += "+";
                poly += m;
            }
            level = qs.empty() ? poly : qs + "*(" + poly + ")";
        }
        if (!out.empty()) out += negative ? " - " : " + ";
        out += level;
        i = j;
    }
    return out;
}

nlohmann::json Series::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json c = nlohmann::json::array();
        for (const auto& x : t.c.coeffs()) c.push_back(x.str_pq());
        terms.push_back({t.q.str_pq(), t.z.str_pq(), c});
    }
    return {{"terms", terms}, {"cutoff", cut_str(cutoff_)}};
}

Series Series::from_json(const nlohmann::json& j) {
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
        const auto& c = t.at(2);
        terms.push_back({Rational::parse(t.at(0).get<std::string>()), Rational::parse(t.at(1).get<std::string>()),
                         CycloNum(Rational::parse(c.at(0).get<std::string>()),
                                  Rational::parse(c.at(1).get<std::string>()),
                                  Rational::parse(c.at(2).get<std::string>()),
                                  Rational::parse(c.at(3).get<std::string>()))});
    }
    std::string cut = j.at("cutoff").get<std::string>();
    return from_terms(std::move(terms), cut == "inf" ? Cutoff() : Cutoff(Rational::parse(cut)));
}

}  // namespace n3
