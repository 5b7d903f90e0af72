// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sofic/fischer.hpp"
#include "sofic/invariants.hpp"
#include "sofic/oracle.hpp"
#include "sofic/report.hpp"
#include "sofic/skew.hpp"
#include "support/data.hpp"
#include "support/random_shifts.hpp"
#include "support/snf_check.hpp"

using namespace sofic;
using nlohmann::json;
using sofic::testing::data_path;
using sofic::testing::load;

namespace {

constexpr std::uint64_t property_seed = 0xACCE55;
constexpr int property_covers = 10000;
constexpr std::size_t census_period = 6;
constexpr std::uint64_t algebra_seed = 0x5AF3;
constexpr int algebra_matrices = 1000;

struct Outcome {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what)
    {
        if (!ok)
            failures.push_back(what);
    }
};

json analyze_json(const std::string& name)
{
    cli::AnalyzeOptions o;
    o.json = true;
    std::ostringstream out, err;
    const int code = cli::cmd_analyze(data_path(name), o, out, err);
    if (code != cli::exit_ok)
        throw std::runtime_error(name + ": analyze exited " + std::to_string(code) + ": " + err.str());
    return json::parse(out.str());
}

bool run(int id, const std::string& title, double limit_seconds,
         const std::function<void(Outcome&)>& body)
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= limit_seconds)
        o.failures.push_back("took " + std::to_string(secs) + " s, limit " +
                             std::to_string(limit_seconds) + " s");
    const bool pass = o.failures.empty();
    std::printf("%s %d %s (%.3f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), secs,
                limit_seconds);
    for (const auto& n : o.notes)
        std::printf("    %s\n", n.c_str());
    for (const auto& f : o.failures)
        std::printf("    failed: %s\n", f.c_str());
    std::fflush(stdout);
    return pass;
}

bool has_edge(const json& tuple_graph, const std::string& edge)
{
    for (const auto& e : tuple_graph["edges"])
        if (e == edge)
            return true;
    return false;
}

void example_b(Outcome& o)
{
    const auto r = analyze_json("B.shift");
    o.expect(r["classification"]["aft"] == true, "AFT should be true");
    o.expect(r["classification"]["pet"] == false, "PET should be false");
    o.expect(has_edge(r["tuple_graph"], "[1 2 3] -b-> [2 3]"), "missing edge [1 2 3] -b-> [2 3]");
}

void example_c(Outcome& o)
{
    const auto r = analyze_json("C.shift");
    o.expect(r["classification"]["pet"] == true, "PET should be true");
    o.expect(r["tuple_graph"]["multiplicity_vertices"] == json::array({"[2 3 4]", "[1 2]"}),
             "trimmed multiplicity vertices " + r["tuple_graph"]["multiplicity_vertices"].dump());
    for (const auto& e : r["tuple_graph"]["edges"]) {
        const auto s = e.get<std::string>();
        o.expect(s.starts_with("[2 3 4]") == s.ends_with("[2 3 4]"), "edge between components: " + s);
    }
    o.expect(r["classification"]["multicard"] == json::array({2, 3}), "multicard should be {2,3}");
    std::map<int, std::string> bk;
    for (const auto& s : r["skew"])
        if (s["B"].size() == 1 && s["B"][0].size() == 1)
            bk[s["k"].get<int>()] = s["B"][0][0].get<std::string>();
    o.expect(bk[3] == "id + (1 2 3) + (1 3 2)", "B3 = " + bk[3]);
    o.expect(bk[2] == "id", "B2 = " + bk[2]);

    const auto census = periodic_preimage_census(load("C.shift"), 1);
    bool fixed_three = false;
    for (const auto& row : census)
        if (row.period == 1 && row.preimages == 3 &&
            row.orbit_lengths == std::vector<std::size_t>{1, 1, 1})
            fixed_three = true;
    o.expect(fixed_three, "no period-1 point with three fixed preimages");
}

void bowen_franks_examples(Outcome& o)
{
    const auto f3 = bowen_franks(IntMatrix{{3}});
    o.expect(f3.group.to_string() == "Z/2", "[3]: group " + f3.group.to_string());
    o.expect(f3.det == -2, "[3]: det " + f3.det.str());
    const auto f2 = bowen_franks(IntMatrix{{2}});
    const auto f22 = bowen_franks(IntMatrix{{1, 1}, {1, 1}});
    o.expect(f2.group.is_trivial() && f2.det == -1, "[2] should give 0 and -1");
    o.expect(f22.group.is_trivial() && f22.det == -1, "[[1,1],[1,1]] should give 0 and -1");

    cli::FeOptions fo;
    fo.json = true;
    std::ostringstream out, err;
    const int code = cli::cmd_fe(data_path("two.sft"), data_path("twobytwo.sft"), fo, out, err);
    o.expect(code == cli::exit_ok, "fe --mode sft exit " + std::to_string(code));
    o.expect(json::parse(out.str())["flow_equivalent"] == true, "fe should say flow equivalent");
}

void near_markov_example(Outcome& o)
{
    const auto r = analyze_json("even.shift");
    o.expect(r["classification"]["near_markov"] == true, "even shift should be near Markov");
    const auto& t = r["invariant_triple"];
    o.expect(t["group"] == "0", "group " + t["group"].dump());
    o.expect(t["det"] == "-1", "det " + t["det"].dump());
    o.expect(t["mugraph"]["canonical"] == json::parse("[[2]]"),
             "multiplicity graph " + t["mugraph"]["canonical"].dump());

    const auto even = load("even.shift");
    const auto reversed = fischer_cover(reverse(even)).presentation;
    o.expect(near_markov_fe(even, reversed).equivalent, "even shift vs its reversal");
}

void property_suite(Outcome& o)
{
    std::mt19937_64 rng(property_seed);
    int expansion_bad = 0, fiber_bad = 0, augmentation_bad = 0, census_bad = 0, pet = 0;
    int census_bad_both_pet = 0;
    std::vector<std::string> examples;
    auto note = [&](const std::string& what, const Presentation& p, const std::string& detail) {
        if (examples.size() < 6)
            examples.push_back(what + " on\n" + render(p) + "      " + detail);
    };
    for (int it = 0; it < property_covers; ++it) {
        const auto p = sofic::testing::random_cover(rng);
        const auto g = trim_tuple_graph(build_tuple_graph(p));
        const auto cls = classify(g);
        pet += cls.is_pet;

        const auto sym = p.alphabet()[rng() % p.alphabet().size()];
        const auto x = fischer_cover(symbol_expand(p, sym)).presentation;
        const auto xcls = classify(trim_tuple_graph(build_tuple_graph(x)));
        const auto bf = bowen_franks(adjacency_matrix(p)), xbf = bowen_franks(adjacency_matrix(x));
        if (cls.is_aft != xcls.is_aft || cls.is_pet != xcls.is_pet ||
            cls.multicard != xcls.multicard || !(bf.group == xbf.group) ||
            bf.det_sign() != xbf.det_sign()) {
            ++expansion_bad;
            note("(a) expansion at " + sym, p, "");
        }

        const auto fiber = pet_by_fiber(p);
        if (fiber.is_pet != cls.is_pet) {
            ++fiber_bad;
            note("(b) fiber product", p,
                 "tuple graph PET=" + std::to_string(cls.is_pet) + ", fiber: " + fiber.reason);
        }

        for (std::size_t k : cls.multicard)
            if (!(augmentation(build_Bk(p, g, k)) == g.adjacency(k))) {
                ++augmentation_bad;
                note("(c) augmentation k=" + std::to_string(k), p, "");
            }

        const auto problems =
            census_disagreements(p, g, periodic_preimage_census(p, census_period), cls.is_pet);
        if (!problems.empty()) {
            ++census_bad;
            census_bad_both_pet += cls.is_pet && fiber.is_pet;
            note("(d) census", p, problems.front());
        }
    }
    o.notes.push_back(std::to_string(property_covers) + " covers, seed " +
                      std::to_string(property_seed) + ", " + std::to_string(pet) +
                      " classified PET by the tuple graph");
    o.notes.push_back("(a) expansion mismatches: " + std::to_string(expansion_bad));
    o.notes.push_back("(b) fiber product vs tuple graph PET: " + std::to_string(fiber_bad));
    o.notes.push_back("(c) augmentation mismatches: " + std::to_string(augmentation_bad));
    o.notes.push_back("(d) census disagreements: " + std::to_string(census_bad) + ", " +
                      std::to_string(census_bad_both_pet) +
                      " of them on covers both deciders call PET");
    for (const auto& e : examples) {
        std::string indented;
        for (char c : e) {
            indented += c;
            if (c == '\n')
                indented += "      ";
        }
        o.notes.push_back(indented);
    }
    o.expect(expansion_bad == 0, "(a) symbol expansion");
    o.expect(fiber_bad == 0, "(b) pet_by_fiber vs tuple graph");
    o.expect(augmentation_bad == 0, "(c) augmentation");
    o.expect(census_bad == 0, "(d) periodic census");
}

void algebra_suite(Outcome& o)
{
    std::mt19937_64 rng(algebra_seed);
    int bad = 0, det_bad = 0, nonsingular = 0;
    for (int it = 0; it < algebra_matrices; ++it) {
        const std::size_t n = 1 + rng() % 8, m = 1 + rng() % 8;
        const auto A = sofic::testing::random_matrix(rng, n, m, -9, 9);
        const auto s = smith_normal_form(A);
        const auto why = sofic::testing::snf_violation(A, s);
        if (!why.empty()) {
            if (bad++ < 3)
                o.notes.push_back("SNF: " + why);
        }
        if (n != m)
            continue;
        const auto I_minus_A = IntMatrix::identity(n) - A;
        const auto det = determinant(I_minus_A);
        if (det == 0)
            continue;
        ++nonsingular;
        BigInt product = 1;
        for (const auto& f : cokernel(I_minus_A).invariant_factors)
            product *= f;
        if (product != abs(det))
            ++det_bad;
    }
    o.notes.push_back(std::to_string(algebra_matrices) + " matrices, " + std::to_string(nonsingular) +
                      " square with det(I - A) != 0");
    o.expect(bad == 0, std::to_string(bad) + " SNF postcondition failures");
    o.expect(det_bad == 0, std::to_string(det_bad) + " |det| vs invariant factor mismatches");
}

} // namespace

int main()
{
    bool all = true;
    all &= run(1, "example B: AFT, not PET, edge [1 2 3] -b-> [2 3]", 1, example_b);
    all &= run(2, "example C: PET, components [2 3 4] and [1 2], B3 and B2", 1, example_c);
    all &= run(3, "Bowen-Franks groups of full shifts and SFT flow equivalence", 1,
               bowen_franks_examples);
    all &= run(4, "even shift near Markov, flow equivalent to its reversal", 1, near_markov_example);
    all &= run(5, "property suite on random covers", 60, property_suite);
    all &= run(6, "Smith normal form and determinant suite", 30, algebra_suite);
    return all ? 0 : 1;
}
