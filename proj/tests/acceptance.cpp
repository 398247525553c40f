// Acceptance checks.  Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only

#include <CLI11.hpp>
#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "n3/cli.hpp"
#include "n3/identities.hpp"
#include "n3/thetalib.hpp"
#include "oracles.hpp"

using n3::CycloNum;
using n3::Rational;
using n3::Series;
using n3::Status;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail.clear();
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
};

struct Batch {
    std::size_t total = 0;
    std::vector<std::string> failed;
    Rational min_certified = Rational(1000000);
};

Batch run_prefix(const std::string& prefix, const Rational& order) {
    Batch b;
    for (const auto& c : n3::registry()) {
        if (c.id.rfind(prefix, 0) != 0) continue;
        ++b.total;
        auto r = n3::run_case(c, order);
        if (r.status != Status::Pass) b.failed.push_back(c.id + " (" + n3::to_string(r.status) + ")");
        else if (r.certified_order < b.min_certified) b.min_certified = r.certified_order;
    }
    return b;
}

void absorb(Outcome& o, const Batch& b, const std::string& what) {
    if (b.total == 0) o.fail("no " + what + " cases registered");
    for (const auto& f : b.failed) o.fail(f);
}

std::string ms_since(std::chrono::steady_clock::time_point t0) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return std::to_string(ms) + " ms";
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
    std::vector<std::string> a{"n3q"};
    a.insert(a.end(), args.begin(), args.end());
    std::ostringstream os, es;
    int code = n3::run_cli(a, os, es);
    out = os.str();
    return code;
}

Outcome c1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    Batch b = run_prefix("S2.", 6);
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    absorb(o, b, "S2");
    if (secs >= 300) o.fail("runtime " + std::to_string(secs) + " s");
    if (o.pass) o.detail = std::to_string(b.total) + " cases at order 6 in " + ms_since(t0);
    return o;
}

Outcome c2() {
    Outcome o;
    Batch b = run_prefix("S3.coincide.", 8);
    absorb(o, b, "coincidence");
    if (o.pass) o.detail = "theta00(2tau,z) = theta_{0,1}, theta10(2tau,z) = theta_{1,1} at order 8";
    return o;
}

Outcome c3() {
    Outcome o;
    const Rational order = 6;
    const Rational w = 8;
    const Series A = oracle::eta_product({{1, 3}, {Rational(1, 2), -1}, {2, -1}}, w);
    const Series B = oracle::eta_product({{Rational(1, 2), 1}, {2, 1}, {1, -2}}, w);
    const Series C = oracle::eta_product({{1, 1}, {Rational(1, 2), -1}}, w);
    const CycloNum h(Rational(1, 2));
    const Series mAB = CycloNum(-1) * h * (A + B), dAB = h * (A - B);
    const Series mCB = CycloNum(-1) * h * (C + B), dCB = h * (C - B);
    struct Row {
        std::string l, r;
        std::vector<Series> expected;
    };
    const std::vector<Row> rows{{"1:0", "1:1", {B}},        {"1:0", "1:0", {mAB, dAB}}, {"1:1", "1:1", {dAB, mAB}},
                                {"2:1", "2:0", {mCB, dCB}}, {"2:1", "2:2", {dCB, mCB}}};
    for (const auto& row : rows) {
        std::string out;
        const std::string tag = "(" + row.l + ")x(" + row.r + ")";
        int code = run_cli({"--format", "json", "branch", "--left", row.l, "--right", row.r, "--order", "6"}, out);
        if (code != n3::kExitOk) {
            o.fail(tag + " exit " + std::to_string(code));
            continue;
        }
        auto doc = nlohmann::json::parse(out);
        const auto& coeffs = doc["decomposition"]["coefficients"];
        if (coeffs.size() != row.expected.size()) {
            o.fail(tag + " wrong number of coefficients");
            continue;
        }
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            Series got = Series::from_json(coeffs[i]);
            if (!(got.cutoff() && !(*got.cutoff() < order))) o.fail(tag + " coefficient not trusted to order 6");
            if (auto mm = n3::first_mismatch(got, row.expected[i], order))
                o.fail(tag + " b" + std::to_string(i) + " differs at q^" + mm->q.str());
        }
        if (row.l == "1:0" && row.r == "1:1") {
            Series got = Series::from_json(coeffs[0]);
            if (got.empty() || got.terms().front().q != Rational(1, 48)) o.fail(tag + " leading exponent is not 1/48");
        }
    }
    if (o.pass) o.detail = "5 products match eta-quotient oracles term-for-term to order 6";
    return o;
}

Outcome c4() {
    Outcome o;
    const Rational order = 4;
    auto check = [&](const std::string& name, int m, const std::function<Series(int)>& f) {
        std::optional<Series> ref;
        for (int p = 0; p <= 2; ++p) {
            const std::string tag = name + "(m=" + std::to_string(m) + ",p=" + std::to_string(p) + ")";
            try {
                Series s = f(p);
                if (!(s.cutoff() && !(*s.cutoff() < order))) o.fail(tag + " not certified to order 4");
                if (!ref) ref = s;
                else if (auto mm = n3::first_mismatch(s, *ref, order)) o.fail(tag + " differs at q^" + mm->q.str());
            } catch (const std::exception& e) {
                o.fail(tag + ": " + e.what());
            }
        }
    };
    for (int m = 1; m <= 5; ++m) check("numerator_half", m, [&](int p) { return n3::numerator_half(m, p, order); });
    for (int m : {1, 3, 5}) check("numerator_int", m, [&](int p) { return n3::numerator_int(m, p, order); });
    if (o.pass) o.detail = "p in {0,1,2} agree at order 4";
    return o;
}

Outcome c5() {
    Outcome o;
    const Rational order = 4;
    for (int m : {2, 3})
        for (Rational s : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
            const std::string id = "S5.ladder.m" + std::to_string(m) + ".s" + s.str();
            try {
                auto r = n3::run_identity(id, order);
                if (r.status != Status::Pass) o.fail(id + " " + n3::to_string(r.status) + " " + r.detail);
            } catch (const std::out_of_range&) {
                try {
                    n3::numerator({m, s}, order);
                    n3::numerator({m, s + 1}, order);
                    o.fail(id + " not registered");
                } catch (const std::exception& e) {
                    o.fail("m=" + std::to_string(m) + ",s=" + s.str() + ": " + e.what());
                }
            }
        }
    auto d = n3::run_identity("S5.ladder.m1.degenerate", order);
    if (d.status != Status::Pass) o.fail("F^{[1,1/2]} != F^{[1,3/2]}");
    if (o.pass) o.detail = "ladder steps and the degenerate case hold exactly";
    return o;
}

Outcome c6() {
    Outcome o;
    Batch b = run_prefix("S5.UeqV.", 4);
    absorb(o, b, "U = V");
    if (b.total != 6) o.fail("expected 6 U = V cases, found " + std::to_string(b.total));
    if (o.pass) o.detail = "6 span equalities certified to order " + b.min_certified.str();
    return o;
}

Outcome c7() {
    Outcome o;
    const Series r0 = n3::derived_denominator(4);
    if (!r0.is_zfree()) {
        for (const auto& t : r0.terms())
            if (!t.z.is_zero()) {
                o.fail("R0 is not z-free: coefficient at q^" + t.q.str() + " z^" + t.z.str());
                break;
            }
    }
    auto s = n3::run_identity("S5.R0.span.m2.half", 4);
    if (s.status != Status::Pass) o.fail("span{R0 ch(2,0), R0 ch(2,2)} != span{F^{[2,1/2]}, F^{[2,3/2]}}: " + s.detail);
    else if (!o.pass) o.detail += "; span equality holds";
    if (o.pass) o.detail = "R0 z-free and span equality holds";
    return o;
}

Outcome c8() {
    Outcome o;
    Batch a = run_prefix("S5.closure.", 4);
    Batch u = run_prefix("S5.char-closure-U.", 4);
    Batch v = run_prefix("S5.char-closure-V.", 4);
    absorb(o, a, "theta-closure");
    absorb(o, u, "character-closure (U)");
    absorb(o, v, "character-closure (V)");
    for (const char* k : {"K1-0", "K1-1", "K2-0", "K2-1", "K2-2", "K4-1", "K4-3"}) {
        bool seen = false;
        for (const auto& c : n3::registry())
            if (c.id.rfind("S5.char-closure-U.", 0) == 0 && c.statement.find(std::string("ch") + k + " ") != std::string::npos)
                seen = true;
        if (!seen) o.fail(std::string("no character-closure case for ") + k);
    }
    if (o.pass)
        o.detail = std::to_string(a.total) + " theta-closure and " + std::to_string(u.total + v.total) +
                   " character-closure memberships at order 4";
    return o;
}

Outcome c9() {
    Outcome o;
    const Rational order = 24;
    if (auto mm = n3::first_mismatch(n3::eta(1, 1, order), oracle::eta_pentagonal(1, order), order))
        o.fail("eta differs from the pentagonal series at q^" + mm->q.str());
    if (auto mm = n3::first_mismatch(n3::eta(1, 3, order), oracle::eta_cubed_jacobi(order), order))
        o.fail("eta^3 differs from the Jacobi series at q^" + mm->q.str());
    if (o.pass) o.detail = "eta and eta^3 agree with independent sums to order 24";
    return o;
}

Outcome c10() {
    Outcome o;
    std::string a, b, c;
    int ca = run_cli({"--format", "json", "--jobs", "1", "verify", "--all"}, a);
    int cb = run_cli({"--format", "json", "--jobs", "1", "verify", "--all"}, b);
    int cc = run_cli({"--format", "json", "--jobs", "4", "verify", "--all"}, c);
    if (ca != n3::kExitOk || cb != n3::kExitOk || cc != n3::kExitOk) o.fail("verify --all did not exit 0");
    if (a != b) o.fail("two runs with --jobs 1 differ");
    if (a != c) o.fail("--jobs 1 and --jobs 4 differ");
    if (o.pass) o.detail = "verify --all JSON byte-identical (" + std::to_string(a.size()) + " bytes)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
        {"section 2 suite", c1},        {"coincidences", c2},       {"branching reproduction", c3},
        {"numerator p-independence", c4}, {"ladder consistency", c5}, {"span equalities U = V", c6},
        {"derived denominator", c7},    {"closure suite", c8},      {"eta oracle cross-checks", c9},
        {"determinism", c10}};

    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        Outcome r;
        try {
            r = all[i].second();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        ok = ok && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << (i + 1) << "  " << all[i].first << ": " << r.detail
                  << std::endl;
    }
    return ok ? 0 : 1;
}
