#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "n3/cli.hpp"
#include "n3/series.hpp"
#include "n3/thetalib.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "n3q");
    std::ostringstream out, err;
    int code = n3::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
    std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("expand") {
    auto r = cli({"expand", "theta", "--j", "0", "--m", "1", "--order", "5"});
    CHECK(r.code == n3::kExitOk);
    CHECK(r.out == "1 + q*(z^1+z^-1) + q^4*(z^2+z^-2)\n");

    auto j = cli({"--format", "json", "expand", "eta", "--order", "3"});
    REQUIRE(j.code == n3::kExitOk);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["kind"] == "eta");
    auto s = n3::Series::from_json(doc["series"][0]);
    CHECK(n3::equal_up_to(s, n3::eta(1, 1, 3), 3));

    auto m = cli({"--format", "markdown", "expand", "ubasis", "--m", "3", "--sector", "integer", "--order", "2"});
    CHECK(m.code == n3::kExitOk);
    CHECK(m.out.find("**ubasis**") == 0);

    CHECK(cli({"expand", "numerator", "--m", "2", "--s", "1/2", "--p", "2"}).code == n3::kExitUsage);
    CHECK(cli({"expand", "character", "--m", "3", "--m2", "0"}).code == n3::kExitUsage);
    CHECK(cli({"expand", "nonsense"}).code == n3::kExitUsage);
    CHECK(cli({"--order", "abc", "expand", "eta"}).code == n3::kExitUsage);
}

TEST_CASE("verify") {
    auto r = cli({"--format", "json", "verify", "--id", "S2.mumford.item2", "--id", "S2.squares.item1"});
    CHECK(r.code == n3::kExitOk);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["summary"]["total"] == 2);
    CHECK(doc["summary"]["pass"] == 2);
    CHECK(doc["reports"][0]["wall_ms"].is_null());

    auto t = cli({"--format", "json", "--timing", "verify", "--id", "S2.mumford.item2"});
    CHECK(nlohmann::json::parse(t.out)["reports"][0]["wall_ms"].is_number());

    CHECK(cli({"verify", "--id", "nonsense"}).code == n3::kExitUsage);
    CHECK(cli({"verify"}).code == n3::kExitUsage);
    CHECK(cli({"verify", "--all", "--id", "S2.mumford.item2"}).code == n3::kExitUsage);
    CHECK(cli({"--order", "0", "verify", "--id", "S2.mumford.item2"}).code == n3::kExitUsage);
}

TEST_CASE("config file") {
    auto good = temp_file("n3q_cfg_good.json",
                          R"({"default_order": 3, "output_format": "json", "parallelism": 2,
                              "order_overrides": {"S2.mumford.item2": "5"}})");
    auto r = cli({"--config", good, "verify", "--id", "S2.mumford.item2"});
    CHECK(r.code == n3::kExitOk);
    CHECK(nlohmann::json::parse(r.out)["reports"][0]["certified_order"] == "5/1");

    auto bad = temp_file("n3q_cfg_bad.json", R"({"default_order": 3, "colour": "red"})");
    auto b = cli({"--config", bad, "list"});
    CHECK(b.code == n3::kExitUsage);
    CHECK(b.err.find("colour") != std::string::npos);
    CHECK(cli({"--config", "/nonexistent/cfg.json", "list"}).code == n3::kExitUsage);
    std::remove(good.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("branch and list") {
    auto b = cli({"--format", "json", "branch", "--left", "1:0", "--right", "1:1", "--order", "4"});
    CHECK(b.code == n3::kExitOk);
    auto doc = nlohmann::json::parse(b.out);
    CHECK(doc["targets"][0] == "2:1");
    CHECK(doc["decomposition"]["status"] == "exact");
    auto c = n3::Series::from_json(doc["decomposition"]["coefficients"][0]);
    CHECK(c.terms().front().q == n3::Rational(1, 48));

    auto t = cli({"branch", "--left", "1:0", "--right", "1:0", "--order", "3"});
    CHECK(t.out.find("b[2,0] = ") != std::string::npos);
    CHECK(cli({"branch", "--left", "2:0", "--right", "2:2"}).code == n3::kExitUsage);
    CHECK(cli({"branch", "--left", "x", "--right", "1:0"}).code == n3::kExitUsage);

    auto l = cli({"list"});
    CHECK(l.code == n3::kExitOk);
    CHECK(l.out.find("S5.UeqV.m3.integer") != std::string::npos);
    CHECK(cli({"--format", "json", "list"}).out == cli({"--format", "json", "list"}).out);
}
