#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "cusp_ledger/cli.hpp"

using namespace cusp;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), {"--catalog", CUSP_LEDGER_DEFAULT_CATALOG});
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args)
{
    args.insert(args.begin(), "--json");
    auto o = run(std::move(args));
    REQUIRE(o.code == 0);
    return json::parse(o.out);
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("profile")
    {
        auto j = run_json({"profile", "20"});
        CHECK(j["kind"] == "profile");
        CHECK(j["cusp_count"] == "6");
        CHECK(j["genus"] == "1");
        auto o = run({"profile", "11"});
        CHECK(o.code == 0);
        CHECK(contains(o.out, "cusps 2"));
        CHECK(run({"profile", "0"}).code == 2);
        CHECK(run({"profile", "abc"}).code == 2);
    }

    TEST_CASE("classify by level and by family")
    {
        CHECK(run_json({"classify", "--level", "7"})["difficulty_class"] == "Classical families");
        CHECK(run_json({"classify", "--level", "14"})["difficulty_class"] == "Localization");
        CHECK(run_json({"classify", "--level", "20"})["difficulty_class"] == "No systematic methods");
        auto fam = run_json({"classify", "--family", "pD5"});
        CHECK(fam["difficulty_class"] == "Localization");
        CHECK(run({"classify", "--family", "nope"}).code == 2);
        CHECK(run({"classify", "--level", "10", "--prime", "3"}).code == 2);
    }

    TEST_CASE("expand")
    {
        auto o = run({"expand", "--eta", "1:-1", "--terms", "10"});
        CHECK(o.code == 0);
        CHECK(contains(o.out, "q^(-1/24) + q^(23/24) + 2*q^(47/24)"));
        auto z = run_json({"expand", "--eta", "1:-6,5:6", "--at-cusp", "zero", "--level", "5", "--terms", "5"});
        CHECK(z["kind"] == "expansion");
        auto fam = run({"expand", "--family", "p5", "--terms", "6"});
        CHECK(fam.code == 0);
        CHECK(contains(fam.out, "5*q^4"));
        CHECK(run({"expand", "--eta", "1:x"}).code == 2);
    }

    TEST_CASE("verify exit codes")
    {
        auto ok = run({"verify", "--family", "p5", "--alpha", "1", "--nmax", "500"});
        CHECK(ok.code == 0);
        CHECK(contains(ok.out, "PASS"));
        auto bad = run({"verify", "--family", "p5", "--alpha", "1", "--nmax", "500", "--beta", "2"});
        CHECK(bad.code == 1);
        CHECK(contains(bad.out, "counterexample: a(4) = 5"));
        auto empty = run_json({"verify", "--family", "p5", "--alpha", "1", "--nmax", "3"});
        CHECK(empty["qualifying"] == "0");
        CHECK(empty["passed"] == true);
        CHECK(run({"verify", "--family", "p5", "--alpha", "9"}).code == 2);
    }

    TEST_CASE("reduce")
    {
        auto poly = run_json({"reduce", "--target", "poly:-7,2,0,1", "--basis", "X0(5)"});
        auto coeffs = poly["representation"]["coeffs"];
        CHECK(coeffs.size() == 3);

        auto gap = run({"reduce", "--target", "laurent:-1/1,0/2", "--basis", "X0(14)"});
        CHECK(gap.code == 1);
        CHECK(contains(gap.err, "Weierstrass gap hit"));

        auto fam = run({"reduce", "--target", "family:p5:1", "--basis", "X0(5)"});
        CHECK(fam.code == 0);
        CHECK(contains(fam.out, "(5)*x^1"));

        auto loc = run_json({"reduce", "--target", "eta:1:9,2:-7,5:-5,10:3", "--basis", "X0(10)", "--localize"});
        CHECK(loc["representation"]["localizer_exponent"] == "1");

        CHECK(run({"reduce", "--target", "poly:1", "--basis", "X0(5)", "--terms", "3"}).code == 2);
        CHECK(run({"reduce", "--target", "family:p5:1", "--basis", "X0(7)"}).code == 2);
        CHECK(run({"reduce", "--target", "what:1", "--basis", "X0(5)"}).code == 2);
    }

    TEST_CASE("find-eta")
    {
        auto j = run_json({"find-eta", "--level", "5", "--constraints", "1:=-1,5:=1", "--bound", "12"});
        CHECK(j["total"] == "1");
        CHECK(j["results"][0]["eta"]["r"]["5"] == 6);
        auto none = run({"find-eta", "--level", "5", "--constraints", "1:=-1,5:=1", "--bound", "2"});
        CHECK(none.code == 0);
        CHECK(contains(none.out, "none found"));
    }

    TEST_CASE("catalog selection")
    {
        std::ostringstream out, err;
        CHECK(cli::run({"--catalog", "/nonexistent/catalog.json", "verify", "--family", "p5", "--alpha", "1"}, out, err) ==
              2);
        ::setenv("CUSP_LEDGER_CATALOG", "/nonexistent/catalog.json", 1);
        CHECK(run({"verify", "--family", "p5", "--alpha", "1", "--nmax", "50"}).code == 0); // flag wins
        std::ostringstream out2, err2;
        CHECK(cli::run({"verify", "--family", "p5", "--alpha", "1"}, out2, err2) == 2);
        ::unsetenv("CUSP_LEDGER_CATALOG");
    }

    TEST_CASE("usage errors")
    {
        CHECK(run({}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"--help"}).code == 0);
    }
}
