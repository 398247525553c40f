#pragma once

// Registry of executable identity checks and the runner that certifies them.
//
// Every case holds two families of series builders parameterized by a working
// order.  The runner evaluates them, raises the working order until every
// quantity it compares is trusted up to the requested order, and reports the
// smallest mismatching monomial when the comparison fails.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "n3/linsolve.hpp"
#include "n3/numerators.hpp"
#include "n3/series.hpp"

namespace n3 {

enum class CaseKind { Equality, PIndependence, Membership, Span, Zfree };

std::string to_string(CaseKind k);

using Family = std::function<std::vector<Series>(const Rational& w)>;

/// equality:       lhs[i] == rhs[i] for every i
/// p-independence: every element of lhs is equal
/// membership:     every element of lhs lies in the span of rhs
/// span:           span(lhs) == span(rhs)
/// zfree:          every element of lhs is free of zeta
struct IdentityCase {
    std::string id;
    CaseKind kind = CaseKind::Equality;
    Rational default_order;
    std::string statement;
    Family lhs;
    Family rhs;
};

enum class Status { Pass, Fail, Error };

std::string to_string(Status s);

struct Report {
    std::string id;
    CaseKind kind = CaseKind::Equality;
    Status status = Status::Error;
    Rational certified_order;
    /// (q, z) exponents of the smallest mismatching monomial.
    std::optional<std::pair<Rational, Rational>> first_mismatch;
    double wall_ms = 0;
    std::string detail;

    /// wall_ms is emitted only when timing is requested, so that reports are reproducible.
    [[nodiscard]] nlohmann::json to_json(bool timing = false) const;
};

struct IdentityInfo {
    std::string id;
    CaseKind kind;
    Rational default_order;
    std::string statement;
};

/// All cases, sorted by id.  Built once; immutable afterwards.
const std::vector<IdentityCase>& registry();
std::vector<IdentityInfo> list_identities();
/// Throws std::out_of_range for an unknown id.
const IdentityCase& find_identity(const std::string& id);

Report run_case(const IdentityCase& c, const Rational& order);
Report run_identity(const std::string& id, const Rational& order);

struct RunOptions {
    /// Overrides every default order when set.
    std::optional<Rational> order;
    /// Per-id overrides, applied after order.
    std::map<std::string, Rational> overrides;
    unsigned jobs = 1;
};

/// Runs every registered case; reports come back sorted by id.
std::vector<Report> run_all(const RunOptions& opt);

struct Summary {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t error = 0;
};

Summary summarize(const std::vector<Report>& reports);
nlohmann::json reports_to_json(const std::vector<Report>& reports, bool timing = false);

/// Decomposition of ch(left) * ch(right) over the characters of the summed
/// level with matching m2 parity.
struct Branching {
    std::vector<ModuleLabel> targets;
    Decomposition decomposition;
};

/// Target characters for a product, or throws "basis not available in paper".
std::vector<ModuleLabel> branching_targets(const ModuleLabel& left, const ModuleLabel& right);
Branching branch(const ModuleLabel& left, const ModuleLabel& right, const Rational& order);
/// Closed-form eta-quotient coefficients of a supported product, ordered like branching_targets.
std::vector<Series> branching_closed_form(const ModuleLabel& left, const ModuleLabel& right, const Rational& order);

}  // namespace n3
