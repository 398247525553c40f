#include "n3/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "n3/identities.hpp"
#include "n3/numerators.hpp"
#include "n3/thetalib.hpp"

namespace n3 {

namespace {

enum class Format { Text, Json, Markdown };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "json") return Format::Json;
    if (s == "markdown") return Format::Markdown;
    throw UsageError("unknown format '" + s + "' (expected text, json or markdown)");
}

Rational parse_rational(const std::string& what, const std::string& s) {
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw UsageError("invalid " + what + " '" + s + "' (expected an integer or p/q)");
    }
}

Rational parse_order(const std::string& s) {
    Rational r = parse_rational("order", s);
    if (r.sign() <= 0) throw UsageError("order must be positive, got " + s);
    return r;
}

ModuleLabel parse_label(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("module label '" + s + "' must have the form m:m2");
    try {
        std::size_t a = 0, b = 0;
        const int m = std::stoi(s.substr(0, colon), &a);
        const int m2 = std::stoi(s.substr(colon + 1), &b);
        if (a != colon || b != s.size() - colon - 1) throw std::invalid_argument(s);
        return {m, m2};
    } catch (const std::exception&) {
        throw UsageError("module label '" + s + "' must have the form m:m2");
    }
}

// Settings from the JSON config file; command-line flags take precedence.
struct Config {
    std::optional<Rational> default_order;
    Format format = Format::Text;
    unsigned parallelism = 1;
    std::map<std::string, Rational> overrides;
};

Config load_config(const std::string& path) {
    Config c;
    if (path.empty()) return c;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "default_order") {
            if (!v.is_string() && !v.is_number_integer()) throw UsageError("config: default_order must be a string or integer");
            c.default_order = parse_order(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()));
        } else if (key == "output_format") {
            if (!v.is_string()) throw UsageError("config: output_format must be a string");
            c.format = parse_format(v.get<std::string>());
        } else if (key == "parallelism") {
            if (!v.is_number_integer() || v.get<long long>() < 1)
                throw UsageError("config: parallelism must be a positive integer");
            c.parallelism = static_cast<unsigned>(v.get<long long>());
        } else if (key == "order_overrides") {
            if (!v.is_object()) throw UsageError("config: order_overrides must map ids to orders");
            for (const auto& [id, o] : v.items()) {
                if (!o.is_string() && !o.is_number_integer()) throw UsageError("config: override for " + id + " must be an order");
                c.overrides[id] = parse_order(o.is_string() ? o.get<std::string>() : std::to_string(o.get<long long>()));
            }
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
    return c;
}

void print_series(std::ostream& out, Format f, const nlohmann::json& meta, const std::vector<Series>& series) {
    switch (f) {
        case Format::Json: {
            nlohmann::json j = meta;
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& s : series) arr.push_back(s.to_json());
            j["series"] = arr;
            out << j.dump(2) << "\n";
            break;
        }
        case Format::Text:
            for (const auto& s : series) out << s.str_grouped() << "\n";
            break;
        case Format::Markdown:
            out << "**" << meta["kind"].get<std::string>() << "** (trusted below q^" << meta["order"].get<std::string>()
                << ")\n\n";
            for (const auto& s : series) out << "```\n" << s.str_grouped() << "\n```\n";
            break;
    }
}

std::string mismatch_str(const Report& r) {
    if (!r.first_mismatch) return "-";
    return "q^" + r.first_mismatch->first.str() + " z^" + r.first_mismatch->second.str();
}

void print_reports(std::ostream& out, Format f, const std::vector<Report>& reps, bool timing) {
    const Summary s = summarize(reps);
    switch (f) {
        case Format::Json:
            out << reports_to_json(reps, timing).dump(2) << "\n";
            return;
        case Format::Text:
            for (const auto& r : reps) {
                out << to_string(r.status) << "  " << r.id << "  certified_order=" << r.certified_order.str();
                if (r.first_mismatch) out << "  first_mismatch=" << mismatch_str(r);
                if (timing) out << "  wall_ms=" << r.wall_ms;
                if (!r.detail.empty()) out << "  (" << r.detail << ")";
                out << "\n";
            }
            break;
        case Format::Markdown:
            out << "| id | kind | status | certified order | first mismatch |\n|---|---|---|---|---|\n";
            for (const auto& r : reps)
                out << "| " << r.id << " | " << to_string(r.kind) << " | " << to_string(r.status) << " | "
                    << r.certified_order.str() << " | " << mismatch_str(r) << " |\n";
            out << "\n";
            break;
    }
    out << reps.size() << " cases: " << s.pass << " pass, " << s.fail << " fail, " << s.error << " error\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact q-series expansions and identity checks for N=3 characters", "n3q"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string order_s, format_s, config_path;
    unsigned jobs = 0;
    bool timing = false;
    app.add_option("--order", order_s, "Exclusive q-exponent bound (integer or p/q)");
    app.add_option("--format", format_s, "Output format: text, json or markdown");
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--jobs", jobs, "Worker threads for verify")->check(CLI::PositiveNumber);
    app.add_flag("--timing", timing, "Include wall-clock times in verify reports");

    // expand
    auto* expand = app.add_subcommand("expand", "Expand a series");
    std::string kind;
    std::string j_s = "0", m_s = "1", s_s = "1/2", sector_s = "half", label = "00", scale_s = "1", zscale_s = "1";
    long long power = 1, m2 = 0;
    std::optional<int> p_opt;
    expand->add_option("kind", kind, "theta, eta, mumford, numerator, character, ubasis or denominator")
        ->required()
        ->check(CLI::IsMember({"theta", "eta", "mumford", "numerator", "character", "ubasis", "denominator"}));
    expand->add_option("--j", j_s, "theta index j");
    expand->add_option("--m", m_s, "theta degree or module level m");
    expand->add_option("--s", s_s, "numerator parameter s in (1/2)Z");
    expand->add_option("--p", p_opt, "use the closed expansion with this shift p >= 0");
    expand->add_option("--m2", m2, "character label m2");
    expand->add_option("--sector", sector_s, "half or integer");
    expand->add_option("--label", label, "Mumford label 00, 01, 10 or 11");
    expand->add_option("--scale", scale_s, "tau -> scale * tau");
    expand->add_option("--zscale", zscale_s, "z -> zscale * z (mumford)");
    expand->add_option("--power", power, "eta exponent");

    // verify
    auto* verify = app.add_subcommand("verify", "Check registered identities");
    std::vector<std::string> ids;
    bool all = false;
    verify->add_option("--id", ids, "Identity id (repeatable)");
    verify->add_flag("--all", all, "Run every registered identity");

    // branch
    auto* branch_cmd = app.add_subcommand("branch", "Decompose a product of two characters");
    std::string left_s, right_s;
    branch_cmd->add_option("--left", left_s, "m:m2")->required();
    branch_cmd->add_option("--right", right_s, "m:m2")->required();

    auto* list = app.add_subcommand("list", "List registered identities");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        const Config cfg = load_config(config_path);
        const Format fmt = format_s.empty() ? cfg.format : parse_format(format_s);
        std::optional<Rational> order = cfg.default_order;
        if (!order_s.empty()) order = parse_order(order_s);
        const Rational series_order = order.value_or(Rational(6));

        if (*expand) {
            nlohmann::json meta = {{"kind", kind}, {"order", series_order.str_pq()}};
            std::vector<Series> result;
            try {
                if (kind == "theta") {
                    meta["j"] = parse_rational("j", j_s).str_pq();
                    meta["m"] = parse_rational("m", m_s).str_pq();
                    result.push_back(theta(parse_rational("j", j_s), parse_rational("m", m_s), series_order));
                } else if (kind == "eta") {
                    meta["scale"] = parse_rational("scale", scale_s).str_pq();
                    meta["power"] = power;
                    result.push_back(eta(parse_rational("scale", scale_s), power, series_order));
                } else if (kind == "mumford") {
                    meta["label"] = label;
                    result.push_back(mumford(label, parse_rational("scale", scale_s), parse_rational("zscale", zscale_s),
                                             series_order));
                } else if (kind == "numerator") {
                    const int m = parse_rational("m", m_s).to_int();
                    const Rational s = parse_rational("s", s_s);
                    meta["m"] = m;
                    meta["s"] = s.str_pq();
                    if (p_opt) {
                        meta["p"] = *p_opt;
                        if (s == Rational(1, 2)) result.push_back(numerator_half(m, *p_opt, series_order));
                        else if (s.is_zero()) result.push_back(numerator_int(m, *p_opt, series_order));
                        else throw UsageError("--p applies only to s = 1/2 or s = 0");
                    } else {
                        result.push_back(numerator({m, s}, series_order));
                    }
                } else if (kind == "character") {
                    const int m = parse_rational("m", m_s).to_int();
                    meta["m"] = m;
                    meta["m2"] = m2;
                    result.push_back(character({m, static_cast<int>(m2)}, series_order));
                } else if (kind == "ubasis") {
                    const int m = parse_rational("m", m_s).to_int();
                    meta["m"] = m;
                    meta["sector"] = to_string(parse_sector(sector_s));
                    result = u_basis(m, parse_sector(sector_s), series_order);
                } else {
                    result.push_back(derived_denominator(series_order));
                }
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
            print_series(out, fmt, meta, result);
            return kExitOk;
        }

        if (*verify) {
            if (all == !ids.empty()) throw UsageError("verify needs exactly one of --id or --all");
            std::vector<Report> reps;
            if (all) {
                RunOptions opt;
                opt.order = order;
                opt.overrides = cfg.overrides;
                opt.jobs = jobs ? jobs : cfg.parallelism;
                reps = run_all(opt);
            } else {
                for (const auto& id : ids) {
                    const IdentityCase* c = nullptr;
                    try {
                        c = &find_identity(id);
                    } catch (const std::out_of_range& e) {
                        throw UsageError(e.what());
                    }
                    Rational o = order.value_or(c->default_order);
                    if (auto it = cfg.overrides.find(id); it != cfg.overrides.end() && order_s.empty()) o = it->second;
                    reps.push_back(run_case(*c, o));
                }
            }
            print_reports(out, fmt, reps, timing);
            const Summary s = summarize(reps);
            return s.fail == 0 && s.error == 0 ? kExitOk : kExitFail;
        }

        if (*branch_cmd) {
            const ModuleLabel l = parse_label(left_s), r = parse_label(right_s);
            Branching b;
            try {
                b = branch(l, r, series_order);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (fmt == Format::Json) {
                nlohmann::json targets = nlohmann::json::array();
                for (const auto& t : b.targets) targets.push_back(std::to_string(t.m) + ":" + std::to_string(t.m2));
                nlohmann::json j = {{"left", left_s},
                                    {"right", right_s},
                                    {"order", series_order.str_pq()},
                                    {"targets", targets},
                                    {"decomposition", b.decomposition.to_json()}};
                out << j.dump(2) << "\n";
            } else {
                const bool md = fmt == Format::Markdown;
                out << (md ? "**ch(" : "ch(") << l.m << "," << l.m2 << ") ch(" << r.m << "," << r.m2 << ")"
                    << (md ? "**" : "") << "  status=" << to_string(b.decomposition.status)
                    << "  certified_order=" << b.decomposition.certified_order.str() << "\n";
                for (std::size_t i = 0; i < b.targets.size(); ++i) {
                    out << (md ? "- " : "  ") << "b[" << b.targets[i].m << "," << b.targets[i].m2 << "] = "
                        << (md ? "`" : "") << b.decomposition.coefficients[i].str_grouped() << (md ? "`" : "") << "\n";
                }
            }
            return b.decomposition.status == SolveStatus::NotInSpan ? kExitFail : kExitOk;
        }

        if (*list) {
            const auto infos = list_identities();
            if (fmt == Format::Json) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& i : infos)
                    arr.push_back({{"id", i.id},
                                   {"kind", to_string(i.kind)},
                                   {"default_order", i.default_order.str_pq()},
                                   {"statement", i.statement}});
                out << arr.dump(2) << "\n";
            } else if (fmt == Format::Markdown) {
                out << "| id | kind | default order | statement |\n|---|---|---|---|\n";
                for (const auto& i : infos)
                    out << "| " << i.id << " | " << to_string(i.kind) << " | " << i.default_order.str() << " | "
                        << i.statement << " |\n";
            } else {
                for (const auto& i : infos)
                    out << i.id << "  " << to_string(i.kind) << "  " << i.default_order.str() << "  " << i.statement
                        << "\n";
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace n3
