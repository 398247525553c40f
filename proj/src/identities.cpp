#include "n3/identities.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "n3/thetalib.hpp"

namespace n3 {

std::string to_string(CaseKind k) {
    switch (k) {
        case CaseKind::Equality: return "equality";
        case CaseKind::PIndependence: return "p-independence";
        case CaseKind::Membership: return "membership";
        case CaseKind::Span: return "span";
        case CaseKind::Zfree: return "zfree";
    }
    return "unknown";
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Error: return "error";
    }
    return "unknown";
}

nlohmann::json Report::to_json(bool timing) const {
    nlohmann::json j = {{"id", id},
                        {"kind", to_string(kind)},
                        {"status", to_string(status)},
                        {"certified_order", certified_order.str_pq()}};
    j["first_mismatch"] = first_mismatch
                              ? nlohmann::json::array({first_mismatch->first.str_pq(), first_mismatch->second.str_pq()})
                              : nlohmann::json(nullptr);
    j["wall_ms"] = timing ? nlohmann::json(wall_ms) : nlohmann::json(nullptr);
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

using Build = std::function<Series(const Rational&)>;
using R = Rational;
using Factors = std::vector<std::pair<Rational, long long>>;

const R kHalf(1, 2);

Family single(Build b) {
    return [b = std::move(b)](const R& w) { return std::vector<Series>{b(w)}; };
}

Family pair_of(Build a, Build b) {
    return [a = std::move(a), b = std::move(b)](const R& w) { return std::vector<Series>{a(w), b(w)}; };
}

Series th(const R& j, const R& m, const R& w) { return theta(j, m, w); }
// theta_{j,m}(tau, 0)
Series th0(const R& j, const R& m, const R& w) { return theta(ThetaSpec{j, m, Affine{1, 0, 0, 0}}, w); }
Series tha(const R& j, const R& m, const Affine& a, const R& w) { return theta(ThetaSpec{j, m, a}, w); }
Series mu(const char* label, const R& w) { return mumford(label, 1, 1, w); }
// Mumford theta at (2 tau, 2 z)
Series mu22(const char* label, const R& w) { return mumford(label, 2, 2, w); }
Series eq(const Factors& f, const R& w) { return eta_quotient(f, w); }
Series qb(const R& a, const R& M, const R& w) { return quotient_bracket(a, M, w); }
Series ch(int m, int m2, const R& w) { return character({m, m2}, w); }
CycloNum cr(const R& r) { return CycloNum(r); }

// q^{N^2/2} zeta^N over N in Z or 1/2 + Z, with the classical sign factors.
Series mumford_sum(const std::string& label, const R& w) {
    std::vector<Term> t;
    const bool half_lattice = label[0] == '1';
    const R shift = half_lattice ? kHalf : R(0);
    for (long long k = 0;; ++k) {
        bool any = false;
        for (long long s : {k, -k - 1}) {
            const R N = shift + R(s);
            const R e = N * N / R(2);
            if (!(e < w)) continue;
            any = true;
            CycloNum c = 1;
            if (label == "01" && s % 2 != 0) c = -1;
            if (label == "11") c = phase(N / R(2));
            t.push_back({e, N, c});
        }
        if (!any) break;
    }
    return Series::from_terms(std::move(t), w);
}

const Factors kA = {{1, 3}, {kHalf, -1}, {2, -1}};  // eta^3 / (eta(tau/2) eta(2tau))
const Factors kB = {{kHalf, 1}, {2, 1}, {1, -2}};   // eta(tau/2) eta(2tau) / eta^2
const Factors kC = {{1, 1}, {kHalf, -1}};           // eta / eta(tau/2)

// eta(2tau)^5/(eta^2 eta(4tau)^2) theta00(2tau,2z) +- 2 eta(4tau)^2/eta(2tau) theta10(2tau,2z)
Series doubled_combo(int sign, const R& w) {
    Series a = eq({{2, 5}, {1, -2}, {4, -2}}, w) * mu22("00", w);
    Series b = CycloNum(2 * sign) * (eq({{4, 2}, {2, -1}}, w) * mu22("10", w));
    return a + b;
}

Sector sector_of(const R& s) { return s.is_integer() ? Sector::Integer : Sector::Half; }
Sector sector_of_m2(int m2) { return m2 % 2 == 0 ? Sector::Half : Sector::Integer; }
std::string sec(Sector s) { return to_string(s); }

std::string label_str(const ModuleLabel& l) { return "K" + std::to_string(l.m) + "-" + std::to_string(l.m2); }

// ---------------------------------------------------------------------------
// Registry construction

class Builder {
public:
    void add(std::string id, CaseKind kind, int group, std::string statement, Family lhs, Family rhs = {}) {
        cases_.push_back({std::move(id), kind, group <= 3 ? R(6) : R(4), std::move(statement), std::move(lhs),
                          std::move(rhs)});
    }
    void eq(std::string id, int group, std::string statement, Build lhs, Build rhs) {
        add(std::move(id), CaseKind::Equality, group, std::move(statement), single(std::move(lhs)),
            single(std::move(rhs)));
    }
    std::vector<IdentityCase> take() { return std::move(cases_); }

private:
    std::vector<IdentityCase> cases_;
};

const std::vector<R> kJK = {R(0), kHalf, R(1), R(3, 2)};
const std::vector<int> kM3 = {1, 2, 3};
const std::vector<int> kP = {-1, 0, 1, 2};

void add_multiplication(Builder& b) {
    for (int n : kM3)
        for (int m : kM3)
            for (const R& j : kJK)
                for (const R& k : kJK) {
                    b.eq("S2.mult-lemma.n" + std::to_string(n) + "m" + std::to_string(m) + ".j" + j.str() + "k" +
                             k.str(),
                         2, "theta_{j,n} theta_{k,m} = sum_r theta_{2mnr+kn-jm, mn(m+n)}(tau,0) theta_{j+k+2mr, m+n}",
                         [=](const R& w) { return th(j, n, w) * th(k, m, w); },
                         [=](const R& w) {
                             Series s = Series::zero(w);
                             const R mm = m, nn = n;
                             for (int r = 0; r < m + n; ++r)
                                 s += th0(mm * nn * R(2 * r) + k * nn - j * mm, mm * nn * R(m + n), w) *
                                      th(j + k + mm * R(2 * r), R(m + n), w);
                             return s;
                         });
                }

    // Specializations with a degree 1 or 2 theta in front.
    struct Spec {
        const char* name;
        R j;
        R n;
        std::function<std::pair<R, R>(const R& k, const R& m, int r)> idx;  // (z-dependent index, constant index)
        std::function<R(const R& m)> cdeg;
    };
    const std::vector<Spec> specs = {
        {"theta01", 0, 1, [](const R& k, const R& m, int r) { return std::pair{k + R(2 * r), k - R(2 * r) * m}; },
         [](const R& m) { return m * (m + 1); }},
        {"theta11", 1, 1,
         [](const R& k, const R& m, int r) { return std::pair{k + R(2 * r + 1), k - R(2 * r + 1) * m}; },
         [](const R& m) { return m * (m + 1); }},
        {"theta02", 0, 2,
         [](const R& k, const R& m, int r) { return std::pair{k + R(4 * r), k * 2 - R(4 * r) * m}; },
         [](const R& m) { return m * 2 * (m + 2); }},
        {"theta22", 2, 2,
         [](const R& k, const R& m, int r) { return std::pair{k + R(2 + 4 * r), k * 2 - m * 2 - R(4 * r) * m}; },
         [](const R& m) { return m * 2 * (m + 2); }},
        {"theta12", 1, 2,
         [](const R& k, const R& m, int r) { return std::pair{k + R(1 + 4 * r), k * 2 - m - R(4 * r) * m}; },
         [](const R& m) { return m * 2 * (m + 2); }},
        {"theta-12", -1, 2,
         [](const R& k, const R& m, int r) { return std::pair{k - 1 + R(4 * r), k * 2 + m - R(4 * r) * m}; },
         [](const R& m) { return m * 2 * (m + 2); }},
    };
    for (const auto& sp : specs)
        for (int m : kM3)
            for (const R& k : kJK) {
                const R nn = sp.n;
                b.eq("S2.special." + std::string(sp.name) + ".m" + std::to_string(m) + ".k" + k.str(), 2,
                     "theta_{j,n} theta_{k,m} as a sum over r mod (m+n) with n = 1, 2", [=](const R& w) {
                         return th(sp.j, nn, w) * th(k, m, w);
                     },
                     [=](const R& w) {
                         Series s = Series::zero(w);
                         const R mm = m;
                         for (int r = 0; r < m + nn.to_int(); ++r) {
                             auto [a, c] = sp.idx(k, mm, r);
                             s += th(a, mm + nn, w) * th0(c, sp.cdeg(mm), w);
                         }
                         return s;
                     });
            }
    for (int m : kM3)
        for (const R& k : kJK)
            b.eq("S2.special.theta12+theta-12.m" + std::to_string(m) + ".k" + k.str(), 2,
                 "[theta_{1,2}+theta_{-1,2}] theta_{k,m} = sum_{r mod 2(m+2)} theta_{k-1+2r,m+2} "
                 "theta_{2k+m-2mr,2m(m+2)}(tau,0)",
                 [=](const R& w) { return (th(1, 2, w) + th(-1, 2, w)) * th(k, m, w); },
                 [=](const R& w) {
                     Series s = Series::zero(w);
                     const R mm = m;
                     for (int r = 0; r < 2 * (m + 2); ++r)
                         s += th(k - 1 + R(2 * r), mm + 2, w) * th0(k * 2 + mm - mm * R(2 * r), mm * 2 * (mm + 2), w);
                     return s;
                 });
}

void add_mumford(Builder& b) {
    for (const char* lab : {"00", "01", "10", "11"}) {
        std::string l = lab;
        b.eq("S2.mumford-def." + l, 2, "theta_" + l + " from degree 2 Jacobi thetas equals its classical sum",
             [l](const R& w) { return mu(l.c_str(), w); }, [l](const R& w) { return mumford_sum(l, w); });
    }
    b.eq("S2.mumford.item1", 2, "theta00^2 = eta(2tau)^5/(eta^2 eta(4tau)^2) theta00(2tau,2z) + 2 ... theta10(2tau,2z)",
         [](const R& w) { return mu("00", w) * mu("00", w); }, [](const R& w) { return doubled_combo(1, w); });
    b.eq("S2.mumford.item2", 2, "theta00 theta01 = eta(2tau) [eta/eta(2tau)]^2 theta01(2tau,2z)",
         [](const R& w) { return mu("00", w) * mu("01", w); },
         [](const R& w) { return eq({{1, 2}, {2, -1}}, w) * mu22("01", w); });
    b.eq("S2.mumford.item3", 2, "theta01^2 = eta(2tau)^5/(eta^2 eta(4tau)^2) theta00(2tau,2z) - 2 ... theta10(2tau,2z)",
         [](const R& w) { return mu("01", w) * mu("01", w); }, [](const R& w) { return doubled_combo(-1, w); });

    b.eq("S2.quotient.item1i", 2, "theta10/theta01 {E theta00(2tau,2z) - F theta10(2tau,2z)} = theta01 theta10",
         [](const R& w) { return mu("10", w) * invert(mu("01", w)) * doubled_combo(-1, w); },
         [](const R& w) { return mu("01", w) * mu("10", w); });
    b.eq("S2.quotient.item1ii", 2, "theta10/theta00 {E theta00(2tau,2z) + F theta10(2tau,2z)} = theta00 theta10",
         [](const R& w) { return mu("10", w) * invert(mu("00", w)) * doubled_combo(1, w); },
         [](const R& w) { return mu("00", w) * mu("10", w); });
    b.eq("S2.quotient.item2i", 2, "theta10/theta01 theta01(2tau,2z) = eta(2tau)/eta^2 theta00 theta10",
         [](const R& w) { return mu("10", w) * invert(mu("01", w)) * mu22("01", w); },
         [](const R& w) { return eq({{2, 1}, {1, -2}}, w) * mu("00", w) * mu("10", w); });
    b.eq("S2.quotient.item2ii", 2, "theta10/theta00 theta01(2tau,2z) = eta(2tau)/eta^2 theta01 theta10",
         [](const R& w) { return mu("10", w) * invert(mu("00", w)) * mu22("01", w); },
         [](const R& w) { return eq({{2, 1}, {1, -2}}, w) * mu("01", w) * mu("10", w); });

    auto square_rhs = [](int sign) {
        return [sign](const R& w) {
            Series a = eq({{1, 5}, {kHalf, -2}, {2, -2}}, w) * mu("00", w);
            Series c = eq({{1, -1}, {kHalf, 2}}, w) * mu("01", w);
            return cr(kHalf) * (sign > 0 ? a + c : a - c);
        };
    };
    b.eq("S2.squares.item1", 2, "theta_{0,1}^2 = (1/2) eta {[eta^2/(eta(tau/2)eta(2tau))]^2 theta00 + [...]^2 theta01}",
         [](const R& w) { return th(0, 1, w) * th(0, 1, w); }, square_rhs(1));
    b.eq("S2.squares.item2", 2, "theta_{1,1}^2 = (1/2) eta {[eta^2/(eta(tau/2)eta(2tau))]^2 theta00 - [...]^2 theta01}",
         [](const R& w) { return th(1, 1, w) * th(1, 1, w); }, square_rhs(-1));
    b.eq("S2.squares.item3", 2, "theta_{0,1} theta_{1,1} = eta(2tau)^2/eta theta10",
         [](const R& w) { return th(0, 1, w) * th(1, 1, w); },
         [](const R& w) { return eq({{2, 2}, {1, -1}}, w) * mu("10", w); });
}

void add_shifts(Builder& b) {
    for (int m : kM3)
        for (int p : kP) {
            const R mm = m, M = m + 1, pr = p;
            const std::string tag = ".m" + std::to_string(m) + ".p" + std::to_string(p);
            const int pm = m % 2 == 0 ? -1 : 1;
            for (int sg : {1, -1}) {
                // items 1(i) (sg = +1) and 1(ii) (sg = -1)
                const R pq = pr + R(sg, 4);
                const R J = mm * (pr * 2 + R(sg, 2));
                const R e = -mm * mm / M * pq * pq;
                const std::string item = sg > 0 ? "item1i" : "item1ii";
                Build lhs = [=](const R& w) { return tha(0, M, Affine{1, 0, mm * (pr * 4 + R(sg)) / (M * 2), -kHalf}, w); };
                b.eq("S2.shift." + item + ".z-half" + tag, 2,
                     "theta_{0,m+1}(tau, -1/2 + m(4p+-1)/(2(m+1)) tau) = q^{...} e^{pi i m(p+-1/4)} theta_{m(2p+-1/2),m+1}(tau,-1/2)",
                     lhs, [=](const R& w) {
                         return tha(J, M, Affine{1, 0, 0, -kHalf}, w - e).shifted(phase(mm * pq / R(2)), e);
                     });
                b.eq("S2.shift." + item + ".signed" + tag, 2,
                     "theta_{0,m+1}(tau, -1/2 + m(4p+-1)/(2(m+1)) tau) = q^{...} theta^(+-)_{m(2p+-1/2),m+1}(tau,0)", lhs,
                     [=](const R& w) { return theta_pm(pm, J, M, w - e).shifted(1, e); });
            }
            for (int sg : {1, -1}) {
                // items 2 (4p+1) and 3 (4p-1), each with +z and -z
                const R c = pr * 4 + R(sg);
                const R e = -c * c / (M * 16);
                const std::string n = sg > 0 ? "2" : "3";
                b.eq("S2.shift.item" + n + "i" + tag, 2,
                     "theta_{0,m+1}(tau, (4p+-1)/(2(m+1)) tau + z) = q^{...} e^{-pi i (4p+-1) z/2} theta_{2p+-1/2,m+1}",
                     [=](const R& w) { return tha(0, M, Affine{1, 1, c / (M * 2), 0}, w); },
                     [=](const R& w) { return th(pr * 2 + R(sg, 2), M, w - e).shifted(1, e, -c / R(4)); });
                b.eq("S2.shift.item" + n + "ii" + tag, 2,
                     "theta_{0,m+1}(tau, (4p+-1)/(2(m+1)) tau - z) = q^{...} e^{pi i (4p+-1) z/2} theta_{-2p-+1/2,m+1}",
                     [=](const R& w) { return tha(0, M, Affine{1, -1, c / (M * 2), 0}, w); },
                     [=](const R& w) { return th(-(pr * 2 + R(sg, 2)), M, w - e).shifted(1, e, c / R(4)); });
            }
            {
                const R c = pr * 4 - 1;
                const R up = pr - R(1, 4) + M / 2;
                const R down = pr - R(1, 4) - M / 2;
                b.eq("S2.shift.item4i" + tag, 2,
                     "theta_{0,m+1}(tau, (4p-1)/(2(m+1)) tau + z + tau) = q^{...} e^{-2 pi i (p-1/4+(m+1)/2) z} theta_{2p-1/2+m+1,m+1}",
                     [=](const R& w) { return tha(0, M, Affine{1, 1, c / (M * 2) + 1, 0}, w); },
                     [=](const R& w) {
                         const R e = -up * up / M;
                         return th(pr * 2 - kHalf + M, M, w - e).shifted(1, e, -up);
                     });
                b.eq("S2.shift.item4ii" + tag, 2,
                     "theta_{0,m+1}(tau, (4p-1)/(2(m+1)) tau - z - tau) = q^{...} e^{2 pi i (p-1/4-(m+1)/2) z} theta_{-(2p-1/2+m+1),m+1}",
                     [=](const R& w) { return tha(0, M, Affine{1, -1, c / (M * 2) - 1, 0}, w); },
                     [=](const R& w) {
                         const R e = -down * down / M;
                         return th(-(pr * 2 - kHalf + M), M, w - e).shifted(1, e, down);
                     });
            }
        }

    for (int p : kP) {
        const R pr = p;
        const std::string tag = ".p" + std::to_string(p);
        const R a = pr + R(1, 4), c3 = pr - R(3, 4);
        b.eq("S2.shift-theta10.item1" + tag, 2,
             "theta10(2tau, z + tau/2 + 2p tau) = q^{-(p+1/4)^2} e^{-2 pi i (p+1/4) z} theta_{-1/2,1}",
             [=](const R& w) { return mumford("10", Affine{2, 1, kHalf + pr * 2, 0}, w); },
             [=](const R& w) { return th(-kHalf, 1, w + a * a).shifted(1, -a * a, -a); });
        b.eq("S2.shift-theta10.item2" + tag, 2,
             "theta10(2tau, z - tau/2 - 2p tau) = q^{-(p+1/4)^2} e^{2 pi i (p+1/4) z} theta_{1/2,1}",
             [=](const R& w) { return mumford("10", Affine{2, 1, -kHalf - pr * 2, 0}, w); },
             [=](const R& w) { return th(kHalf, 1, w + a * a).shifted(1, -a * a, a); });
        b.eq("S2.shift-theta10.item3" + tag, 2,
             "theta10(2tau, z - tau/2 - 2p tau + 2tau) = q^{-(p-3/4)^2} e^{2 pi i (p-3/4) z} theta_{1/2,1}",
             [=](const R& w) { return mumford("10", Affine{2, 1, -kHalf - pr * 2 + 2, 0}, w); },
             [=](const R& w) { return th(kHalf, 1, w + c3 * c3).shifted(1, -c3 * c3, c3); });
    }

    for (int m : kM3)
        for (int p : kP) {
            const R mm = m, M = m + 1, pr = p;
            const std::string tag = ".m" + std::to_string(m) + ".p" + std::to_string(p);
            const R c1 = pr * 4 + 1, c0 = pr * 4 - 1;
            const R e1 = mm / M * (pr + R(1, 4)) * (pr + R(1, 4));
            const R e2 = mm / M * (pr - R(1, 4)) * (pr - R(1, 4)) - mm / 4;
            auto t10 = [](const R& shift, const R& w) { return mumford("10", Affine{2, 1, shift, 0}, w); };
            b.eq("S2.ratio.item1i" + tag, 2,
                 "theta_{0,m+1}(tau, (4p+1)/(2(m+1)) tau + z) / theta10(2tau, z + tau/2 + 2p tau) = q^{...} theta_{2p+1/2,m+1}/theta_{-1/2,1}",
                 [=](const R& w) {
                     return tha(0, M, Affine{1, 1, c1 / (M * 2), 0}, w) * invert(t10(kHalf + pr * 2, w));
                 },
                 [=](const R& w) { return (th(pr * 2 + kHalf, M, w) * invert(th(-kHalf, 1, w))).shifted(1, e1); });
            b.eq("S2.ratio.item1ii" + tag, 2,
                 "theta_{0,m+1}(tau, (4p+1)/(2(m+1)) tau - z) / theta10(2tau, z - tau/2 - 2p tau) = q^{...} theta_{-2p-1/2,m+1}/theta_{1/2,1}",
                 [=](const R& w) {
                     return tha(0, M, Affine{1, -1, c1 / (M * 2), 0}, w) * invert(t10(-kHalf - pr * 2, w));
                 },
                 [=](const R& w) { return (th(-pr * 2 - kHalf, M, w) * invert(th(kHalf, 1, w))).shifted(1, e1); });
            b.eq("S2.ratio.item2i" + tag, 2,
                 "theta_{0,m+1}(tau, (4p-1)/(2(m+1)) tau + z + tau) / theta10(2tau, z + tau/2 + 2p tau) = q^{...} e^{-pi i m z} theta_{2p-1/2+m+1,m+1}/theta_{-1/2,1}",
                 [=](const R& w) {
                     return tha(0, M, Affine{1, 1, c0 / (M * 2) + 1, 0}, w) * invert(t10(kHalf + pr * 2, w));
                 },
                 [=](const R& w) {
                     return (th(pr * 2 - kHalf + M, M, w) * invert(th(-kHalf, 1, w))).shifted(1, e2, -mm / 2);
                 });
            b.eq("S2.ratio.item2ii" + tag, 2,
                 "theta_{0,m+1}(tau, (4p-1)/(2(m+1)) tau - z - tau) / theta10(2tau, z - tau/2 - 2p tau + 2tau) = q^{...} e^{-pi i m z} theta_{-(2p-1/2+m+1),m+1}/theta_{1/2,1}",
                 [=](const R& w) {
                     return tha(0, M, Affine{1, -1, c0 / (M * 2) - 1, 0}, w) * invert(t10(-kHalf - pr * 2 + 2, w));
                 },
                 [=](const R& w) {
                     return (th(-(pr * 2 - kHalf + M), M, w) * invert(th(kHalf, 1, w))).shifted(1, e2, -mm / 2);
                 });
        }
}

// ---------------------------------------------------------------------------

void add_characters(Builder& b) {
    const CycloNum i = CycloNum::i();
    b.add("S3.coincide.theta00", CaseKind::Equality, 3, "theta00(2tau, z) = theta_{0,1}(tau, z)",
          single([](const R& w) { return mumford("00", 2, 1, w); }), single([](const R& w) { return th(0, 1, w); }));
    b.add("S3.coincide.theta10", CaseKind::Equality, 3, "theta10(2tau, z) = theta_{1,1}(tau, z)",
          single([](const R& w) { return mumford("10", 2, 1, w); }), single([](const R& w) { return th(1, 1, w); }));

    for (int m2 : {1, 3}) {
        const int sg = m2 == 1 ? 1 : -1;
        b.eq("S3.ch4-derivation.m2-" + std::to_string(m2), 3,
             "ch(4,m2) = (i/2)/(eta(tau/2)eta(2tau)) theta10/theta01 {E theta00(2tau,2z) - F theta10(2tau,2z) +- theta01(2tau,2z)}",
             [=](const R& w) {
                 Series braces = doubled_combo(-1, w) + CycloNum(sg) * mu22("01", w);
                 return (i * cr(kHalf)) * (eq({{kHalf, -1}, {2, -1}}, w) * mu("10", w) * invert(mu("01", w)) * braces);
             },
             [=](const R& w) { return ch(4, m2, w); });
    }

    b.eq("S3.inversion.item1i", 3, "theta00 = -eta(tau/2)eta(2tau) {ch(2,0) - ch(2,2)}", [](const R& w) { return mu("00", w); },
         [](const R& w) { return CycloNum(-1) * (eq({{kHalf, 1}, {2, 1}}, w) * (ch(2, 0, w) - ch(2, 2, w))); });
    b.eq("S3.inversion.item1ii", 3, "theta01 = -eta eta(2tau)/eta(tau/2) {ch(2,0) + ch(2,2)}",
         [](const R& w) { return mu("01", w); },
         [](const R& w) { return CycloNum(-1) * (eq({{1, 1}, {2, 1}, {kHalf, -1}}, w) * (ch(2, 0, w) + ch(2, 2, w))); });
    b.eq("S3.inversion.item2i", 3, "theta01 theta10 = -i eta(tau/2)eta(2tau) {ch(4,1) + ch(4,3)}",
         [](const R& w) { return mu("01", w) * mu("10", w); },
         [=](const R& w) { return -i * (eq({{kHalf, 1}, {2, 1}}, w) * (ch(4, 1, w) + ch(4, 3, w))); });
    b.eq("S3.inversion.item2ii", 3, "theta00 theta10 = -i eta(tau/2)eta^2 {ch(4,1) - ch(4,3)}",
         [](const R& w) { return mu("00", w) * mu("10", w); },
         [=](const R& w) { return -i * (eq({{kHalf, 1}, {1, 2}}, w) * (ch(4, 1, w) - ch(4, 3, w))); });

    // Product propositions, as identities between expansions.
    auto comb = [](const Factors& x, const Factors& y, int sx, int sy, const R& w) {
        return cr(R(sx, 2)) * eq(x, w) + cr(R(sy, 2)) * eq(y, w);
    };
    b.eq("S3.prod.K1xK1.case1", 3, "ch(1,0) ch(1,1) = eta(tau/2)eta(2tau)/eta^2 ch(2,1)",
         [](const R& w) { return ch(1, 0, w) * ch(1, 1, w); }, [](const R& w) { return eq(kB, w) * ch(2, 1, w); });
    b.eq("S3.prod.K1xK1.case2", 3, "ch(1,0)^2 = -(1/2){A + B} ch(2,0) + (1/2){A - B} ch(2,2)",
         [](const R& w) { return ch(1, 0, w) * ch(1, 0, w); },
         [=](const R& w) { return comb(kA, kB, -1, -1, w) * ch(2, 0, w) + comb(kA, kB, 1, -1, w) * ch(2, 2, w); });
    b.eq("S3.prod.K1xK1.case3", 3, "ch(1,1)^2 = (1/2){A - B} ch(2,0) - (1/2){A + B} ch(2,2)",
         [](const R& w) { return ch(1, 1, w) * ch(1, 1, w); },
         [=](const R& w) { return comb(kA, kB, 1, -1, w) * ch(2, 0, w) + comb(kA, kB, -1, -1, w) * ch(2, 2, w); });
    b.eq("S3.prod.K2xK2.case1", 3, "ch(2,1) ch(2,0) = -(1/2){C + B} ch(4,1) + (1/2){C - B} ch(4,3)",
         [](const R& w) { return ch(2, 1, w) * ch(2, 0, w); },
         [=](const R& w) { return comb(kC, kB, -1, -1, w) * ch(4, 1, w) + comb(kC, kB, 1, -1, w) * ch(4, 3, w); });
    b.eq("S3.prod.K2xK2.case2", 3, "ch(2,1) ch(2,2) = (1/2){C - B} ch(4,1) - (1/2){C + B} ch(4,3)",
         [](const R& w) { return ch(2, 1, w) * ch(2, 2, w); },
         [=](const R& w) { return comb(kC, kB, 1, -1, w) * ch(4, 1, w) + comb(kC, kB, -1, -1, w) * ch(4, 3, w); });

    // The same products recovered by the solver.
    const std::vector<std::pair<ModuleLabel, ModuleLabel>> pairs = {
        {{1, 0}, {1, 1}}, {{1, 0}, {1, 0}}, {{1, 1}, {1, 1}}, {{2, 1}, {2, 0}}, {{2, 1}, {2, 2}}};
    for (const auto& [l, r] : pairs) {
        b.add("S3.branch." + label_str(l) + "x" + label_str(r), CaseKind::Equality, 3,
              "branching coefficients of ch" + label_str(l) + " ch" + label_str(r) + " equal the eta-quotient closed forms",
              [l = l, r = r](const R& w) { return branch(l, r, w).decomposition.coefficients; },
              [l = l, r = r](const R& w) { return branching_closed_form(l, r, w); });
    }
}

// ---------------------------------------------------------------------------

void add_numerators(Builder& b) {
    for (int m = 1; m <= 5; ++m) {
        b.add("S4.pindep.m" + std::to_string(m) + ".half", CaseKind::PIndependence, 4,
              "closed expansion of F^{[m,1/2]} is the same for p = 0, 1, 2", [m](const R& w) {
                  std::vector<Series> out;
                  for (int p = 0; p <= 2; ++p) {
                      if (m == 2 && p == 2) continue;  // theta^(-)_{9,3}(tau,0) = 0
                      out.push_back(numerator_half(m, p, w));
                  }
                  return out;
              });
        if (m % 2 == 1)
            b.add("S4.pindep.m" + std::to_string(m) + ".integer", CaseKind::PIndependence, 4,
                  "closed expansion of F^{[m,0]} is the same for p = 0, 1, 2", [m](const R& w) {
                      std::vector<Series> out;
                      for (int p = 0; p <= 2; ++p) out.push_back(numerator_int(m, p, w));
                      return out;
                  });
    }
    // With theta^(-) zero, the expansion multiplied through by it must vanish.
    const R pp(9, 4);
    const R e = -R(2) * pp * pp / R(3);
    b.add("S4.degenerate.m2.p2.half", CaseKind::Equality, 4,
          "theta^(-)_{9,3}(tau,0) = 0 and -i eta(2tau)^3 [bracket] + q^{-2p'^2/3} sum_k A_k [theta_{k,2} - theta_{-k,2}] = 0",
          pair_of([](const R& w) { return theta_pm(-1, 9, 3, w); },
                  [=](const R& w) {
                      Series a = -CycloNum::i() * (eta(2, 3, w) * qb(R(9, 2), 3, w));
                      Series t = triple_sum_coefficient(2, 1, pp, w - e) * theta_diff(1, 2, w - e);
                      return a + t.shifted(1, e);
                  }),
          pair_of([](const R& w) { return Series::zero(w); }, [](const R& w) { return Series::zero(w); }));
}

void add_spaces(Builder& b) {
    // Ladder.
    for (int m : {2, 3})
        for (const R& s : {kHalf, R(1), R(3, 2)}) {
            if (s.is_integer() && m % 2 == 0) continue;  // F^{[m,s]} has no expansion for even m, integer s
            b.eq("S5.ladder.m" + std::to_string(m) + ".s" + s.str(), 5,
                 "F^{[m,s]} - F^{[m,s+1]} = e^{-pi i s} q^{-(s-m/4)^2/m} [theta_{2s,m} - theta_{-2s,m}]",
                 [=](const R& w) { return numerator({m, s}, w) - numerator({m, s + 1}, w); },
                 [=](const R& w) {
                     const R x = s - R(m, 4);
                     const R e = -x * x / R(m);
                     return (th(s * 2, m, w - e) - th(-s * 2, m, w - e)).shifted(phase(-s / R(2)), e).truncate(w);
                 });
        }
    b.eq("S5.ladder.m1.degenerate", 5, "F^{[1,1/2]} = F^{[1,3/2]}", [](const R& w) { return numerator({1, kHalf}, w); },
         [](const R& w) { return numerator({1, R(3, 2)}, w); });

    // Membership of the quotient brackets.
    for (int m : kM3)
        for (int p = -2; p <= 2; ++p) {
            const std::string tag = ".m" + std::to_string(m) + ".p" + std::to_string(p);
            b.add("S5.membership.half" + tag, CaseKind::Membership, 5,
                  "theta_{2p+1/2,m+1}/theta_{-1/2,1} - theta_{-(2p+1/2),m+1}/theta_{1/2,1} in U^{[m,1/2]}",
                  single([=](const R& w) { return qb(R(2 * p) + kHalf, m + 1, w); }),
                  [=](const R& w) { return u_basis(m, Sector::Half, w); });
            if (m % 2 == 1)
                b.add("S5.membership.integer" + tag, CaseKind::Membership, 5,
                      "theta_{2p+1/2+m,m+1}/theta_{-1/2,1} - theta_{-(2p+1/2+m),m+1}/theta_{1/2,1} in U^{[m,0]}",
                      single([=](const R& w) { return qb(R(2 * p + m) + kHalf, m + 1, w); }),
                      [=](const R& w) { return u_basis(m, Sector::Integer, w); });
            if (p < 0) {
                int a = 0;
                while (p + a * (m + 1) < 0) ++a;
                const int p2 = p + a * (m + 1);
                b.eq("S5.membership-reduction.half" + tag, 5,
                     "the bracket at 2p+1/2 equals the bracket at 2p'+1/2 with p' = p + a(m+1) >= 0",
                     [=](const R& w) { return qb(R(2 * p) + kHalf, m + 1, w); },
                     [=](const R& w) { return qb(R(2 * p2) + kHalf, m + 1, w); });
                if (m % 2 == 1)
                    b.eq("S5.membership-reduction.integer" + tag, 5,
                         "the bracket at 2p+1/2+m equals the bracket at 2p'+1/2+m with p' = p + a(m+1) >= 0",
                         [=](const R& w) { return qb(R(2 * p + m) + kHalf, m + 1, w); },
                         [=](const R& w) { return qb(R(2 * p2 + m) + kHalf, m + 1, w); });
            }
        }

    // The simpler characterization of U^{[m,0]} for odd m.
    for (int m : {1, 3}) {
        b.add("S5.simpler.item1.m" + std::to_string(m), CaseKind::Span, 5,
              "U^{[m,0]} = span{theta_{-1/2,m+1}/theta_{-1/2,1} - theta_{1/2,m+1}/theta_{1/2,1}, [theta_{k,m}-theta_{-k,m}] k even}",
              [m](const R& w) {
                  std::vector<Series> out{qb(-kHalf, m + 1, w)};
                  for (int k = 2; k <= m - 1; k += 2) out.push_back(theta_diff(k, m, w));
                  return out;
              },
              [m](const R& w) { return u_basis(m, Sector::Integer, w); });
        for (int p = -2; p <= 2; ++p)
            b.add("S5.simpler.item2.m" + std::to_string(m) + ".p" + std::to_string(p), CaseKind::Membership, 5,
                  "theta_{2p-1/2,m+1}/theta_{-1/2,1} - theta_{-(2p-1/2),m+1}/theta_{1/2,1} in U^{[m,0]}",
                  single([=](const R& w) { return qb(R(2 * p) - kHalf, m + 1, w); }),
                  [=](const R& w) { return u_basis(m, Sector::Integer, w); });
    }

    // U = V and the reduced spanning set of V.
    for (int m = 1; m <= 4; ++m)
        for (Sector s : {Sector::Half, Sector::Integer}) {
            if (s == Sector::Integer && m % 2 == 0) continue;
            const std::string tag = ".m" + std::to_string(m) + "." + sec(s);
            b.add("S5.UeqV" + tag, CaseKind::Span, 5, "V^{[m,s]} = U^{[m,s]}",
                  [=](const R& w) { return v_family(m, s, w); }, [=](const R& w) { return u_basis(m, s, w); });
            b.add("S5.Vspan" + tag, CaseKind::Span, 5,
                  "V^{[m,s]} = span{F^{[m,s]}, [theta_{k,m} - theta_{-k,m}] with k of the sector's parity}",
                  [=](const R& w) {
                      std::vector<Series> out{numerator({m, s == Sector::Half ? kHalf : R(0)}, w)};
                      for (int k = s == Sector::Half ? 1 : 2; k <= m - 1; k += 2) out.push_back(theta_diff(k, m, w));
                      return out;
                  },
                  [=](const R& w) { return v_family(m, s, w); });
        }

    // A degree 1 or 2 theta times a theta difference.
    for (int m : kM3)
        for (int k = 1; k <= m - 1; ++k)
            for (auto [n, j] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {2, 0}, {2, 2}}) {
                const R s = k % 2 == 1 ? kHalf : R(0);
                const Sector target = sector_of(s + R(j, 2));
                b.add("S5.theta-closure.n" + std::to_string(n) + "j" + std::to_string(j) + ".m" + std::to_string(m) +
                          ".k" + std::to_string(k),
                      CaseKind::Membership, 5, "theta_{j,n} [theta_{k,m} - theta_{-k,m}] in U^{[m+n, s+j/2]}",
                      single([=](const R& w) { return th(j, n, w) * theta_diff(k, m, w); }),
                      [=](const R& w) { return u_basis(m + n, target, w); });
            }

    // Products of thetas with the quotient brackets.
    struct Big {
        const char* item;
        int sign_in;  // bracket at +1/2 or -1/2
        std::function<Series(const R&)> mult;
        int period_mul;  // r runs mod period_mul (m + period_add)
        int period_add;
        std::function<R(const R& m, int r)> cidx;  // constant theta index
        std::function<R(const R& m)> cdeg;
        std::function<R(int r)> bidx;  // bracket index
        int level_add;
    };
    auto deg1 = [](const R& m) { return (m + 1) * (m + 2); };
    auto deg2 = [](const R& m) { return (m + 1) * (m + 3) * 2; };
    const std::vector<Big> bigs = {
        {"1i", 1, [](const R& w) { return th(0, 1, w); }, 1, 2, [](const R& m, int r) { return kHalf - R(2 * r) * (m + 1); },
         deg1, [](int r) { return kHalf + R(2 * r); }, 2},
        {"1ii", -1, [](const R& w) { return th(0, 1, w); }, 1, 2,
         [](const R& m, int r) { return kHalf + R(2 * r) * (m + 1); }, deg1, [](int r) { return -kHalf + R(2 * r); }, 2},
        {"2i", 1, [](const R& w) { return th(1, 1, w); }, 1, 2,
         [](const R& m, int r) { return kHalf - R(2 * r - 1) * (m + 1); }, deg1, [](int r) { return -kHalf + R(2 * r); },
         2},
        {"2ii", -1, [](const R& w) { return th(1, 1, w); }, 1, 2,
         [](const R& m, int r) { return kHalf + R(2 * r + 1) * (m + 1); }, deg1, [](int r) { return kHalf + R(2 * r); }, 2},
        {"3i", 1, [](const R& w) { return th(0, 2, w); }, 1, 3, [](const R& m, int r) { return 1 - R(4 * r) * (m + 1); },
         deg2, [](int r) { return kHalf + R(4 * r); }, 3},
        {"3ii", -1, [](const R& w) { return th(0, 2, w); }, 1, 3, [](const R& m, int r) { return 1 + R(4 * r) * (m + 1); },
         deg2, [](int r) { return -kHalf + R(4 * r); }, 3},
        {"4i", 1, [](const R& w) { return th(2, 2, w); }, 1, 3,
         [](const R& m, int r) { return 1 - R(2 * (2 * r + 1)) * (m + 1); }, deg2,
         [](int r) { return kHalf + R(2 * (2 * r + 1)); }, 3},
        {"4ii", -1, [](const R& w) { return th(2, 2, w); }, 1, 3,
         [](const R& m, int r) { return 1 + R(2 * (2 * r + 1)) * (m + 1); }, deg2,
         [](int r) { return -kHalf + R(2 * (2 * r + 1)); }, 3},
        {"5i", 1, [](const R& w) { return mu("10", w); }, 2, 3,
         [](const R& m, int r) { return 1 + R(1 - 2 * r) * (m + 1); }, deg2, [](int r) { return -kHalf + R(2 * r); }, 3},
        {"5ii", -1, [](const R& w) { return mu("10", w); }, 2, 3,
         [](const R& m, int r) { return 1 + R(1 + 2 * r) * (m + 1); }, deg2, [](int r) { return kHalf + R(2 * r); }, 3},
    };
    for (const auto& bg : bigs)
        for (int m : kM3) {
            b.eq("S5.big-mult.item" + std::string(bg.item) + ".m" + std::to_string(m), 5,
                 "theta times the bracket at level m+1 = sum_r theta_{...}(tau,0) brackets at the raised level, "
                 "first case theta_{1/2-2r(m+1),(m+1)(m+2)}(tau,0)",
                 [=](const R& w) { return bg.mult(w) * qb(R(bg.sign_in, 2), m + 1, w); },
                 [=](const R& w) {
                     const R mm = m;
                     Series s = Series::zero(w);
                     for (int r = 0; r < bg.period_mul * (m + bg.period_add); ++r)
                         s += th0(bg.cidx(mm, r), bg.cdeg(mm), w) * qb(bg.bidx(r), mm + bg.level_add, w);
                     return s;
                 });
        }

    // Closure of U under theta multiplication.
    struct Closure {
        std::string item;
        Build mult;
        int shift;
        Sector from;
        Sector to;
        bool odd_only;
        bool even_only;
    };
    std::vector<Closure> cl = {
        {"item1", [](const R& w) { return th(0, 1, w); }, 1, Sector::Half, Sector::Half, false, false},
        {"item2i", [](const R& w) { return th(1, 1, w); }, 1, Sector::Half, Sector::Integer, false, true},
        {"item2ii", [](const R& w) { return th(1, 1, w); }, 1, Sector::Integer, Sector::Half, true, false},
        {"item4i", [](const R& w) { return mu("10", w); }, 2, Sector::Half, Sector::Integer, true, false},
        {"item4ii", [](const R& w) { return mu("10", w); }, 2, Sector::Integer, Sector::Half, true, false},
    };
    for (int j : {0, 2}) {
        cl.push_back({"item3i.j" + std::to_string(j), [j](const R& w) { return th(j, 2, w); }, 2, Sector::Half,
                      Sector::Half, false, false});
        cl.push_back({"item3ii.j" + std::to_string(j), [j](const R& w) { return th(j, 2, w); }, 2, Sector::Integer,
                      Sector::Integer, true, false});
    }
    for (const char* lab : {"00", "01"}) {
        std::string l = lab;
        const std::string bb = l.substr(1);
        cl.push_back({"item5i.b" + bb, [l](const R& w) { return mu("10", w) * mu(l.c_str(), w); }, 4, Sector::Half,
                      Sector::Integer, true, false});
        cl.push_back({"item5ii.b" + bb, [l](const R& w) { return mu("10", w) * mu(l.c_str(), w); }, 4,
                      Sector::Integer, Sector::Half, true, false});
    }
    for (const auto& c : cl)
        for (int m : kM3) {
            if (c.odd_only && m % 2 == 0) continue;
            if (c.even_only && m % 2 == 1) continue;
            b.add("S5.closure." + c.item + ".m" + std::to_string(m), CaseKind::Membership, 5,
                  "theta factor times U^{[m," + sec(c.from) + "]} lies in U^{[m+" + std::to_string(c.shift) + "," +
                      sec(c.to) + "]}",
                  [=](const R& w) {
                      std::vector<Series> out;
                      const Series f = c.mult(w);
                      for (const auto& u : u_basis(m, c.from, w)) out.push_back(f * u);
                      return out;
                  },
                  [=](const R& w) { return u_basis(m + c.shift, c.to, w); });
        }

    // Characters acting on U, V and the character spaces.
    struct ChAct {
        std::string item;
        ModuleLabel label;
        int shift;
        bool flips;
        std::function<bool(int m, Sector s)> allowed;
    };
    const auto any_half = [](int, Sector s) { return s == Sector::Half; };
    const auto m_plus_2s_odd = [](int m, Sector s) { return (m + (s == Sector::Half ? 1 : 0)) % 2 == 1; };
    const auto two_case = [](int m, Sector s) { return s == Sector::Half || m % 2 == 1; };
    const auto odd_m = [](int m, Sector) { return m % 2 == 1; };
    const std::vector<ChAct> acts = {
        {"item1i", {1, 0}, 1, false, any_half},       {"item1ii", {1, 1}, 1, true, m_plus_2s_odd},
        {"item2i", {2, 0}, 2, false, two_case},       {"item2ii", {2, 2}, 2, false, two_case},
        {"item2iii", {2, 1}, 2, true, odd_m},         {"item3i", {4, 1}, 4, true, odd_m},
        {"item3ii", {4, 3}, 4, true, odd_m},
    };
    auto flip = [](Sector s) { return s == Sector::Half ? Sector::Integer : Sector::Half; };
    for (const auto& a : acts)
        for (int m : kM3)
            for (Sector s : {Sector::Half, Sector::Integer}) {
                if (!a.allowed(m, s)) continue;
                const Sector to = a.flips ? flip(s) : s;
                const ModuleLabel L = a.label;
                const std::string tag = "." + a.item + ".m" + std::to_string(m) + "." + sec(s);
                b.add("S5.char-closure-U" + tag, CaseKind::Membership, 5,
                      "ch" + label_str(L) + " U^{[m," + sec(s) + "]} lies in U^{[m+" + std::to_string(a.shift) + "," +
                          sec(to) + "]}",
                      [=](const R& w) {
                          std::vector<Series> out;
                          const Series c = ch(L.m, L.m2, w);
                          for (const auto& u : u_basis(m, s, w)) out.push_back(c * u);
                          return out;
                      },
                      [=](const R& w) { return u_basis(m + a.shift, to, w); });
                b.add("S5.char-closure-V" + tag, CaseKind::Membership, 5,
                      "ch" + label_str(L) + " V^{[m," + sec(s) + "]} lies in V^{[m+" + std::to_string(a.shift) + "," +
                          sec(to) + "]}",
                      [=](const R& w) {
                          std::vector<Series> out;
                          const Series c = ch(L.m, L.m2, w);
                          for (const auto& v : v_family(m, s, w)) out.push_back(c * v);
                          return out;
                      },
                      [=](const R& w) { return v_family(m + a.shift, to, w); });
            }

    // Character spaces: f = ch(m', m2') itself; membership is tested after
    // multiplying through by the derived denominator R_0.
    const std::vector<ModuleLabel> inputs = {{1, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}, {4, 1}, {4, 3}};
    for (const auto& a : acts)
        for (const auto& f : inputs) {
            const Sector s = sector_of_m2(f.m2);
            if (!a.allowed(f.m, s)) continue;
            const int level = f.m + a.shift;
            const Sector to = sector_of_m2(a.label.m2 + f.m2);
            const ModuleLabel L = a.label;
            b.add("S5.char-closure-CH." + a.item + "." + label_str(f), CaseKind::Membership, 5,
                  "R_0 ch" + label_str(L) + " ch" + label_str(f) + " lies in V^{[" + std::to_string(level) + "," +
                      sec(to) + "]}",
                  single([=](const R& w) { return derived_denominator(w) * ch(L.m, L.m2, w) * ch(f.m, f.m2, w); }),
                  [=](const R& w) { return v_family(level, to, w); });
        }

    b.add("S5.R0.span.m2.half", CaseKind::Span, 5, "span{R_0 ch(2,0), R_0 ch(2,2)} = span{F^{[2,1/2]}, F^{[2,3/2]}}",
          pair_of([](const R& w) { return derived_denominator(w) * ch(2, 0, w); },
                  [](const R& w) { return derived_denominator(w) * ch(2, 2, w); }),
          [](const R& w) { return v_family(2, Sector::Half, w); });
    b.add("S5.R0.span.m1.integer", CaseKind::Span, 5, "span{R_0 ch(1,1)} = span{F^{[1,1]}}",
          single([](const R& w) { return derived_denominator(w) * ch(1, 1, w); }),
          [](const R& w) { return v_family(1, Sector::Integer, w); });

    // Products of characters that the final statement covers.
    struct Final {
        int no;
        ModuleLabel a;
        ModuleLabel b;
    };
    const std::vector<Final> finals = {
        {1, {1, 0}, {1, 0}}, {1, {1, 0}, {2, 0}}, {1, {1, 0}, {2, 2}}, {2, {1, 1}, {1, 1}}, {2, {1, 1}, {2, 0}},
        {2, {1, 1}, {2, 2}}, {3, {2, 0}, {1, 0}}, {3, {2, 2}, {1, 0}}, {3, {2, 0}, {2, 0}}, {3, {2, 0}, {2, 2}},
        {3, {2, 2}, {2, 2}}, {4, {2, 0}, {1, 1}}, {4, {2, 2}, {1, 1}}, {5, {2, 1}, {1, 0}}, {5, {2, 1}, {1, 1}},
        {6, {4, 1}, {1, 0}}, {6, {4, 1}, {1, 1}}, {6, {4, 3}, {1, 0}}, {6, {4, 3}, {1, 1}}, {7, {1, 0}, {1, 0}},
        {7, {1, 0}, {1, 1}}, {7, {1, 1}, {1, 1}}, {8, {2, 1}, {2, 0}}, {8, {2, 1}, {2, 2}},
    };
    for (const auto& f : finals) {
        const std::string id =
            "S5.final.case" + std::to_string(f.no) + "." + label_str(f.a) + "x" + label_str(f.b);
        const int level = f.a.m + f.b.m;
        const int parity = (f.a.m2 + f.b.m2) % 2;
        const ModuleLabel A = f.a, B = f.b;
        std::vector<ModuleLabel> basis;
        for (int m2 = parity; m2 <= level; m2 += 2)
            if (character_supported({level, m2})) basis.push_back({level, m2});
        const bool direct = (level == 2) || (level == 4 && parity == 1);
        if (direct) {
            b.add(id, CaseKind::Membership, 5,
                  "ch" + label_str(A) + " ch" + label_str(B) + " lies in the span of the level " +
                      std::to_string(level) + " characters",
                  single([=](const R& w) { return ch(A.m, A.m2, w) * ch(B.m, B.m2, w); }), [=](const R& w) {
                      std::vector<Series> out;
                      for (const auto& l : basis) out.push_back(ch(l.m, l.m2, w));
                      return out;
                  });
        } else {
            const Sector to = sector_of_m2(parity);
            b.add(id, CaseKind::Membership, 5,
                  "R_0 ch" + label_str(A) + " ch" + label_str(B) + " lies in V^{[" + std::to_string(level) + "," +
                      sec(to) + "]}",
                  single([=](const R& w) { return derived_denominator(w) * ch(A.m, A.m2, w) * ch(B.m, B.m2, w); }),
                  [=](const R& w) { return v_family(level, to, w); });
        }
    }
}

std::vector<IdentityCase> build_registry() {
    Builder b;
    add_multiplication(b);
    add_mumford(b);
    add_shifts(b);
    add_characters(b);
    add_numerators(b);
    add_spaces(b);
    auto cases = b.take();
    std::sort(cases.begin(), cases.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    for (std::size_t i = 1; i < cases.size(); ++i)
        if (cases[i].id == cases[i - 1].id) throw std::logic_error("duplicate identity id " + cases[i].id);
    return cases;
}

// ---------------------------------------------------------------------------
// Runner

struct Outcome {
    Rational reached;
    std::optional<Mismatch> mismatch;
    std::string detail;
};

bool mismatch_less(const Mismatch& a, const Mismatch& b) { return a.q < b.q || (a.q == b.q && a.z < b.z); }

void keep_smallest(std::optional<Mismatch>& cur, const std::optional<Mismatch>& m) {
    if (m && (!cur || mismatch_less(*m, *cur))) cur = m;
}

Rational trusted(const std::vector<Series>& xs, Rational t) {
    for (const auto& s : xs)
        if (s.cutoff()) t = min(t, *s.cutoff());
    return t;
}

void check_membership(const std::vector<Series>& targets, const std::vector<Series>& basis, const Rational& t,
                      Outcome& out, const char* side) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Membership mb = membership(targets[i], basis, t);
        out.reached = min(out.reached, mb.certified_order);
        if (!mb.member && !out.mismatch) {
            out.mismatch = Mismatch{mb.witness->q, mb.witness->z, {}, {}};
            out.detail = std::string(side) + "[" + std::to_string(i) + "] not in span";
        }
    }
}

Outcome evaluate(const IdentityCase& c, const Rational& order, const Rational& w) {
    Outcome out;
    const std::vector<Series> lhs = c.lhs(w);
    const std::vector<Series> rhs = c.rhs ? c.rhs(w) : std::vector<Series>{};
    Rational t = trusted(rhs, trusted(lhs, order));
    out.reached = t;
    switch (c.kind) {
        case CaseKind::Equality:
            if (lhs.size() != rhs.size())
                throw std::logic_error("equality sides differ in length: " + std::to_string(lhs.size()) + " vs " +
                                       std::to_string(rhs.size()));
            for (std::size_t i = 0; i < lhs.size(); ++i) keep_smallest(out.mismatch, first_mismatch(lhs[i], rhs[i], t));
            break;
        case CaseKind::PIndependence:
            for (std::size_t i = 1; i < lhs.size(); ++i) keep_smallest(out.mismatch, first_mismatch(lhs[0], lhs[i], t));
            break;
        case CaseKind::Zfree:
            for (const auto& s : lhs)
                for (const auto& term : s.truncate(t).terms())
                    if (!term.z.is_zero()) {
                        keep_smallest(out.mismatch, Mismatch{term.q, term.z, term.c, {}});
                        break;
                    }
            break;
        case CaseKind::Membership:
            check_membership(lhs, rhs, t, out, "lhs");
            break;
        case CaseKind::Span:
            check_membership(lhs, rhs, t, out, "lhs");
            check_membership(rhs, lhs, t, out, "rhs");
            break;
    }
    return out;
}

bool is_order_shortfall(const std::exception& e) {
    return std::string(e.what()).find("insufficient trusted order") != std::string::npos;
}

}  // namespace

const std::vector<IdentityCase>& registry() {
    static const std::vector<IdentityCase> cases = build_registry();
    return cases;
}

std::vector<IdentityInfo> list_identities() {
    std::vector<IdentityInfo> out;
    for (const auto& c : registry()) out.push_back({c.id, c.kind, c.default_order, c.statement});
    return out;
}

const IdentityCase& find_identity(const std::string& id) {
    const auto& cases = registry();
    auto it = std::lower_bound(cases.begin(), cases.end(), id, [](const auto& c, const std::string& k) { return c.id < k; });
    if (it == cases.end() || it->id != id) throw std::out_of_range("unknown identity id: " + id);
    return *it;
}

Report run_case(const IdentityCase& c, const Rational& order) {
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.id = c.id;
    rep.kind = c.kind;
    rep.certified_order = 0;
    auto finish = [&]() {
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return rep;
    };
    if (order.sign() <= 0) {
        rep.detail = "order must be positive, got " + order.str();
        return finish();
    }

    // Membership failures are confirmed at a higher working order: a pivot
    // that looks zero at low precision can hide a genuine solution.
    constexpr int kAttempts = 12;
    constexpr int kConfirmations = 2;
    Rational w = order + 1;
    std::optional<Rational> best;
    int confirmations = 0;
    try {
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            Outcome out;
            try {
                out = evaluate(c, order, w);
            } catch (const std::domain_error& e) {
                if (!is_order_shortfall(e)) throw;
                w += 1;
                continue;
            }
            if (!best || *best < out.reached) best = out.reached;
            if (out.mismatch) {
                const bool solver = c.kind == CaseKind::Membership || c.kind == CaseKind::Span;
                if (solver && confirmations < kConfirmations) {
                    ++confirmations;
                    w += 2;
                    continue;
                }
                rep.status = Status::Fail;
                rep.certified_order = out.reached;
                rep.first_mismatch = std::pair{out.mismatch->q, out.mismatch->z};
                rep.detail = out.detail;
                return finish();
            }
            if (!(out.reached < order)) {
                rep.status = Status::Pass;
                rep.certified_order = order;
                return finish();
            }
            w += (order - out.reached) + kHalf;
        }
        rep.status = Status::Error;
        rep.certified_order = best.value_or(Rational(0));
        rep.detail = "infeasible order " + order.str() + "; maximal certifiable order " + rep.certified_order.str();
    } catch (const std::exception& e) {
        rep.status = Status::Error;
        rep.certified_order = best.value_or(Rational(0));
        rep.detail = e.what();
    }
    return finish();
}

Report run_identity(const std::string& id, const Rational& order) { return run_case(find_identity(id), order); }

std::vector<Report> run_all(const RunOptions& opt) {
    const auto& cases = registry();
    std::vector<Report> reports(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            const auto& c = cases[i];
            Rational order = opt.order.value_or(c.default_order);
            if (auto it = opt.overrides.find(c.id); it != opt.overrides.end()) order = it->second;
            reports[i] = run_case(c, order);
        }
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) { return a.id < b.id; });
    return reports;
}

Summary summarize(const std::vector<Report>& reports) {
    Summary s;
    for (const auto& r : reports) {
        switch (r.status) {
            case Status::Pass: ++s.pass; break;
            case Status::Fail: ++s.fail; break;
            case Status::Error: ++s.error; break;
        }
    }
    return s;
}

nlohmann::json reports_to_json(const std::vector<Report>& reports, bool timing) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(r.to_json(timing));
    const Summary s = summarize(reports);
    return {{"reports", arr},
            {"summary", {{"total", reports.size()}, {"pass", s.pass}, {"fail", s.fail}, {"error", s.error}}}};
}

// ---------------------------------------------------------------------------
// Branching

std::vector<ModuleLabel> branching_targets(const ModuleLabel& left, const ModuleLabel& right) {
    for (const auto& l : {left, right})
        if (!character_supported(l))
            throw std::invalid_argument("basis not available in paper: no character formula for " + label_str(l));
    const int level = left.m + right.m;
    const int parity = (left.m2 + right.m2) % 2;
    const bool ok = (left.m == 1 && right.m == 1) || (left.m == 2 && right.m == 2 && parity == 1);
    if (!ok)
        throw std::invalid_argument("basis not available in paper: level " + std::to_string(level) +
                                    " characters with m2 parity " + std::to_string(parity) + " are not given");
    std::vector<ModuleLabel> out;
    for (int m2 = parity; m2 <= level; m2 += 2)
        if (character_supported({level, m2})) out.push_back({level, m2});
    return out;
}

Branching branch(const ModuleLabel& left, const ModuleLabel& right, const Rational& order) {
    Branching out{branching_targets(left, right), {}};
    Rational w = order + 1;
    for (int attempt = 0; attempt < 12; ++attempt) {
        try {
            const Series target = character(left, w) * character(right, w);
            std::vector<Series> basis;
            for (const auto& l : out.targets) basis.push_back(character(l, w));
            Decomposition d = decompose(target, basis, order);
            const Cutoff co = d.coefficient_order();
            const Rational reached = co ? min(*co, d.certified_order) : d.certified_order;
            if (!(reached < order)) {
                for (auto& c : d.coefficients) c = c.truncate(order);
                out.decomposition = std::move(d);
                return out;
            }
            w += (order - reached) + kHalf;
        } catch (const std::domain_error& e) {
            if (!is_order_shortfall(e)) throw;
            w += 1;
        }
    }
    throw std::runtime_error("branching coefficients did not reach order " + order.str());
}

std::vector<Series> branching_closed_form(const ModuleLabel& left, const ModuleLabel& right, const Rational& order) {
    branching_targets(left, right);
    ModuleLabel a = left, b = right;
    if (a.m2 > b.m2) std::swap(a, b);
    auto comb = [&](const Factors& x, const Factors& y, int sx, int sy) {
        return cr(R(sx, 2)) * eq(x, order) + cr(R(sy, 2)) * eq(y, order);
    };
    if (a.m == 1) {
        if (a.m2 == 0 && b.m2 == 1) return {eq(kB, order)};
        if (a.m2 == 0) return {comb(kA, kB, -1, -1), comb(kA, kB, 1, -1)};
        return {comb(kA, kB, 1, -1), comb(kA, kB, -1, -1)};
    }
    // (2,0) x (2,1) or (2,1) x (2,2)
    if (a.m2 == 0) return {comb(kC, kB, -1, -1), comb(kC, kB, 1, -1)};
    return {comb(kC, kB, 1, -1), comb(kC, kB, -1, -1)};
}

}  // namespace n3
