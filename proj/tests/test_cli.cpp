#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sofic/report.hpp"
#include "support/data.hpp"

using namespace sofic::cli;
using sofic::testing::data_path;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <class F>
Run capture(F&& f)
{
    std::ostringstream out, err;
    const int code = f(out, err);
    return {code, out.str(), err.str()};
}

Run analyze(const std::string& name, bool as_json = true)
{
    AnalyzeOptions o;
    o.json = as_json;
    return capture([&](auto& out, auto& err) { return cmd_analyze(data_path(name), o, out, err); });
}

Run fe(const std::string& a, const std::string& b, FeMode mode)
{
    FeOptions o;
    o.json = true;
    o.mode = mode;
    return capture(
        [&](auto& out, auto& err) { return cmd_fe(data_path(a), data_path(b), o, out, err); });
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::string("sofic_cli_") + name;
    std::ofstream(path) << text;
    return path;
}

int run_binary(const std::string& args)
{
    const std::string cmd = std::string(SOFIC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("analyze B, C and the even shift")
    {
        const auto b = analyze("B.shift");
        REQUIRE(b.code == exit_ok);
        const auto jb = json::parse(b.out);
        CHECK(jb["schema"] == schema_version);
        CHECK(jb["classification"]["aft"] == true);
        CHECK(jb["classification"]["pet"] == false);
        CHECK(jb["classification"]["pet_witness"] == "[1 2 3] -b-> [2 3]");

        const auto jc = json::parse(analyze("C.shift").out);
        CHECK(jc["input"]["edges"] == 13);
        CHECK(jc["classification"]["pet"] == true);
        CHECK(jc["classification"]["near_markov"] == false);
        CHECK(jc["classification"]["multicard"] == json::array({2, 3}));
        CHECK(jc["classification"]["multicard_interpretation"] == "exact");
        REQUIRE(jc["skew"].size() == 2);

        const auto je = json::parse(analyze("even.shift").out);
        CHECK(je["classification"]["near_markov"] == true);
        CHECK(je["invariant_triple"]["group"] == "0");
        CHECK(je["invariant_triple"]["det"] == "-1");
        CHECK(je["invariant_triple"]["mugraph"]["canonical"] == json::parse("[[2]]"));
        CHECK(je["cover"]["bowen_franks"]["det_sign"] == -1);
    }

    TEST_CASE("text report mentions the classification")
    {
        const auto r = analyze("C.shift", false);
        CHECK(r.code == exit_ok);
        CHECK(r.out.find("PET") != std::string::npos);
        CHECK(r.out.find("[2 3 4]") != std::string::npos);
    }

    TEST_CASE("flow equivalence of SFTs")
    {
        const auto same = fe("two.sft", "twobytwo.sft", FeMode::sft);
        CHECK(same.code == exit_ok);
        CHECK(json::parse(same.out)["flow_equivalent"] == true);

        const auto diff = fe("full2.sft", "full3.sft", FeMode::sft);
        CHECK(diff.code == exit_false);
        const auto jd = json::parse(diff.out);
        CHECK(jd["flow_equivalent"] == false);
        CHECK(jd["invariants"][1]["group"] == "Z/2");
    }

    TEST_CASE("near-Markov flow equivalence and its precondition")
    {
        const auto r = fe("even.shift", "even_reversed.shift", FeMode::near_markov);
        CHECK(r.code == exit_ok);
        CHECK(json::parse(r.out)["flow_equivalent"] == true);

        const auto bad = fe("even.shift", "C.shift", FeMode::near_markov);
        CHECK(bad.code == exit_invalid);
        CHECK(bad.err.find("not near Markov") != std::string::npos);
    }

    TEST_CASE("expand and reverse")
    {
        const auto x = capture([](auto& out, auto& err) {
            return cmd_expand(data_path("even.shift"), "0", out, err);
        });
        REQUIRE(x.code == exit_ok);
        const auto path = write_temp("even_x.shift", x.out);
        AnalyzeOptions o;
        o.json = true;
        const auto ax = capture([&](auto& out, auto& err) { return cmd_analyze(path, o, out, err); });
        const auto jx = json::parse(ax.out);
        const auto je = json::parse(analyze("even.shift").out);
        CHECK(jx["classification"]["near_markov"] == je["classification"]["near_markov"]);
        CHECK(jx["classification"]["multicard"] == je["classification"]["multicard"]);
        CHECK(jx["cover"]["bowen_franks"]["group"] == je["cover"]["bowen_franks"]["group"]);
        std::remove(path.c_str());

        const auto bad = capture([](auto& out, auto& err) {
            return cmd_expand(data_path("B.shift"), "z", out, err);
        });
        CHECK(bad.code == exit_invalid);
        CHECK(bad.out.empty());

        const auto once = capture([](auto& out, auto& err) {
            return cmd_reverse(data_path("C.shift"), out, err);
        });
        REQUIRE(once.code == exit_ok);
        const auto rpath = write_temp("c_rev.shift", once.out);
        const auto twice = capture([&](auto& out, auto& err) { return cmd_reverse(rpath, out, err); });
        const auto direct = capture([](auto& out, auto& err) {
            return cmd_reverse(data_path("C.shift"), out, err);
        });
        std::remove(rpath.c_str());
        CHECK(once.out == direct.out);
        const auto back_path = write_temp("c_back.shift", twice.out);
        const auto third = capture([&](auto& out, auto& err) { return cmd_reverse(back_path, out, err); });
        std::remove(back_path.c_str());
        CHECK(third.out == once.out);
    }

    TEST_CASE("oracle on the worked examples")
    {
        OracleOptions o;
        o.json = true;
        o.period_bound = 1;
        const auto c = capture([&](auto& out, auto& err) {
            return cmd_oracle(data_path("C.shift"), o, out, err);
        });
        CHECK(c.code == exit_ok);
        const auto jc = json::parse(c.out);
        CHECK(jc["oracle"]["consistent"] == true);
        bool saw_a = false;
        for (const auto& row : jc["oracle"]["census"])
            if (row["word"] == "a") {
                saw_a = true;
                CHECK(row["preimages"] == 3);
                CHECK(row["orbit_lengths"] == json::array({1, 1, 1}));
            }
        CHECK(saw_a);

        o.period_bound = 4;
        const auto b = capture([&](auto& out, auto& err) {
            return cmd_oracle(data_path("B.shift"), o, out, err);
        });
        CHECK(b.code == exit_ok);
        for (const auto& check : json::parse(b.out)["oracle"]["checks"])
            if (check["name"] == "PET by fiber product vs tuple graph")
                CHECK(check["status"] == "agree");
    }

    TEST_CASE("oracle flags a cover where the tuple graph over-reports PET")
    {
        OracleOptions o;
        o.json = true;
        o.period_bound = 3;
        const auto r = capture([&](auto& out, auto& err) {
            return cmd_oracle(data_path("gaps/merge_hidden.shift"), o, out, err);
        });
        CHECK(r.code == exit_inconsistent);
        CHECK(json::parse(r.out)["oracle"]["consistent"] == false);
    }

    TEST_CASE("reports are deterministic")
    {
        CHECK(analyze("C.shift").out == analyze("C.shift").out);
        CHECK(analyze("B.shift", false).out == analyze("B.shift", false).out);
    }

    TEST_CASE("invalid input exits 2")
    {
        const auto path = write_temp("broken.shift", "states: 1 2\nmatrix:\na | \n");
        AnalyzeOptions o;
        const auto r = capture([&](auto& out, auto& err) { return cmd_analyze(path, o, out, err); });
        std::remove(path.c_str());
        CHECK(r.code == exit_invalid);
        CHECK_FALSE(r.err.empty());

        const auto missing = analyze("no_such_file.shift");
        CHECK(missing.code == exit_invalid);
    }

    TEST_CASE("binary exit codes")
    {
        const std::string d = SOFIC_DATA_DIR;
        CHECK(run_binary("analyze " + d + "/C.shift") == 0);
        CHECK(run_binary("fe " + d + "/full2.sft " + d + "/full3.sft") == 1);
        CHECK(run_binary("fe --mode near-markov " + d + "/even.shift " + d + "/C.shift") == 2);
        CHECK(run_binary("expand " + d + "/B.shift z") == 2);
        CHECK(run_binary("analyze") == 2);
        CHECK(run_binary("oracle --period 3 " + d + "/gaps/merge_hidden.shift") == 3);
    }
}
