#include "n3/linsolve.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace n3 {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Exact: return "exact";
        case SolveStatus::NotInSpan: return "not-in-span";
        case SolveStatus::UnderDetermined: return "under-determined";
    }
    return "unknown";
}

Cutoff Decomposition::coefficient_order() const {
    Cutoff c;
    for (const auto& s : coefficients) c = cut_min(c, s.cutoff());
    return c;
}

nlohmann::json Decomposition::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : coefficients) coeffs.push_back(c.to_json());
    nlohmann::json w = nullptr;
    if (witness) w = nlohmann::json::array({witness->q.str_pq(), witness->z.str_pq()});
    return {{"status", to_string(status)},
            {"certified_order", certified_order.str_pq()},
            {"coefficients", coeffs},
            {"residual", residual.to_json()},
            {"witness", w}};
}

namespace {

struct Row {
    Rational beta;
    std::vector<Series> a;
    Series rhs;
};

void check_order(const Series& s, const Rational& order, const char* what) {
    if (s.cutoff() && *s.cutoff() < order)
        throw std::domain_error(std::string("insufficient trusted order: ") + what + " trusted below " +
                                cut_str(s.cutoff()) + ", requested " + order.str());
}

}  // namespace

Decomposition decompose(const Series& target, const std::vector<Series>& basis, const Rational& order) {
    if (basis.empty()) throw std::invalid_argument("decompose: empty basis");
    check_order(target, order, "target");
    for (const auto& b : basis) check_order(b, order, "basis element");

    const std::size_t n = basis.size();
    std::vector<std::map<Rational, Series>> slices;
    std::set<Rational> betas;
    for (const auto& b : basis) {
        slices.push_back(b.zslices());
        for (const auto& [beta, s] : slices.back()) betas.insert(beta);
    }
    auto tslices = target.zslices();
    for (const auto& [beta, s] : tslices) betas.insert(beta);

    std::vector<Row> rows;
    for (const auto& beta : betas) {
        Row r{beta, {}, {}};
        for (std::size_t i = 0; i < n; ++i) {
            auto it = slices[i].find(beta);
            r.a.push_back(it != slices[i].end() ? it->second : Series::zero(basis[i].cutoff()));
        }
        auto it = tslices.find(beta);
        r.rhs = it != tslices.end() ? it->second : Series::zero(target.cutoff());
        rows.push_back(std::move(r));
    }

    std::vector<int> pivot_row_of(n, -1);
    std::vector<bool> row_used(rows.size(), false);
    for (;;) {
        // Smallest leading exponent first, then smallest beta, then column.
        int pr = -1, pc = -1;
        Rational best_ord;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (row_used[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (pivot_row_of[c] >= 0 || rows[r].a[c].empty()) continue;
                const Rational o = rows[r].a[c].terms().front().q;
                if (pr < 0 || o < best_ord) {
                    pr = static_cast<int>(r);
                    pc = static_cast<int>(c);
                    best_ord = o;
                }
            }
        }
        if (pr < 0) break;
        row_used[pr] = true;
        pivot_row_of[pc] = pr;

        Row& p = rows[pr];
        const Series inv = invert(p.a[pc]);
        for (std::size_t c = 0; c < n; ++c)
            if (pivot_row_of[c] < 0) p.a[c] = p.a[c] * inv;
        p.rhs = p.rhs * inv;
        p.a[pc] = Series::one();

        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == pr) continue;
            Row& x = rows[r];
            if (x.a[pc].empty()) continue;
            const Series f = x.a[pc];
            for (std::size_t c = 0; c < n; ++c)
                if (pivot_row_of[c] < 0) x.a[c] = x.a[c] - f * p.a[c];
            x.rhs = x.rhs - f * p.rhs;
            x.a[pc] = Series::zero();
        }
    }

    Decomposition d;
    bool free_column = false;
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot_row_of[c] < 0) {
            free_column = true;
            d.coefficients.push_back(Series::zero());
        } else {
            d.coefficients.push_back(rows[pivot_row_of[c]].rhs);
        }
    }

    // Independent check: rebuild sum c_i basis_i - target from the inputs.
    Series residual = CycloNum(-1) * target;
    for (std::size_t i = 0; i < n; ++i) residual += d.coefficients[i] * basis[i];
    d.certified_order = residual.cutoff() ? min(order, *residual.cutoff()) : order;
    d.residual = residual.truncate(d.certified_order);
    if (!d.residual.empty()) {
        const Term& t = d.residual.terms().front();
        d.witness = Mismatch{t.q, t.z, t.c, {}};
        d.status = SolveStatus::NotInSpan;
    } else {
        d.status = free_column ? SolveStatus::UnderDetermined : SolveStatus::Exact;
    }
    return d;
}

Membership membership(const Series& target, const std::vector<Series>& basis, const Rational& order) {
    Decomposition d = decompose(target, basis, order);
    return {d.in_span(), d.certified_order, d.witness};
}

SpanComparison span_equal(const std::vector<Series>& a, const std::vector<Series>& b, const Rational& order) {
    SpanComparison out{true, order, {}};
    auto one_way = [&](const std::vector<Series>& xs, const std::vector<Series>& basis, const char* label) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            Membership m = membership(xs[i], basis, order);
            out.certified_order = min(out.certified_order, m.certified_order);
            if (!m.member && out.equal) {
                out.equal = false;
                out.detail = std::string(label) + "[" + std::to_string(i) + "] not in span, residual at q^" +
                             m.witness->q.str() + " z^" + m.witness->z.str();
            }
        }
    };
    one_way(a, b, "A");
    one_way(b, a, "B");
    return out;
}

}  // namespace n3
