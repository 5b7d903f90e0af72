#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "sofic/skew.hpp"
#include "support/data.hpp"
#include "support/random_shifts.hpp"

using namespace sofic;
using sofic::testing::load;

namespace {

struct Analysis {
    Presentation cover;
    TupleGraph trimmed;
    ShiftClassReport cls;
};

Analysis analyze(Presentation p)
{
    Analysis a{std::move(p), {}, {}};
    a.trimmed = trim_tuple_graph(build_tuple_graph(a.cover));
    a.cls = classify(a.trimmed);
    return a;
}

// Every permutation sigma with an a-edge from[t] -> to[sigma(t)] for all t.
std::vector<Permutation> matching_permutations(const Presentation& p, const TupleVertex& from,
                                               const TupleVertex& to, SymbolIndex a)
{
    const std::size_t k = from.size();
    std::vector<std::size_t> images(k);
    std::iota(images.begin(), images.end(), 1);
    std::vector<Permutation> out;
    do {
        bool ok = true;
        for (std::size_t t = 0; t < k && ok; ++t) {
            ok = false;
            for (const Edge& e : p.edges())
                ok = ok || (e.symbol == a && e.source == from.entries[t] &&
                            e.target == to.entries[images[t] - 1]);
        }
        if (ok)
            out.push_back(Permutation::from_one_line(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

Presentation permute_states(const Presentation& p, const std::vector<StateIndex>& perm)
{
    std::vector<std::string> names(p.num_states());
    for (StateIndex s = 0; s < p.num_states(); ++s)
        names[perm[s]] = p.state_name(s);
    std::vector<LabeledEdge> edges;
    for (const auto& e : p.labeled_edges())
        edges.push_back({perm[e.source], perm[e.target], e.label});
    return Presentation(names, edges);
}

// Cycle types of the weights of closed walks labeled by words of length <=
// max_len, keyed by (start tuple as a state set, word).
std::map<std::pair<std::set<std::string>, std::vector<SymbolIndex>>, std::vector<std::size_t>>
closed_walk_types(const Analysis& a, std::size_t max_len)
{
    std::map<std::pair<std::set<std::string>, std::vector<SymbolIndex>>, std::vector<std::size_t>> out;
    const auto& g = a.trimmed;
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        const std::size_t k = g.vertices()[v].size();
        if (k < 2)
            continue;
        std::set<std::string> names;
        for (auto s : g.vertices()[v].entries)
            names.insert(a.cover.state_name(s));
        std::vector<SymbolIndex> word;
        std::vector<Permutation> weights;
        std::function<void(std::size_t)> go = [&](std::size_t at) {
            if (!word.empty() && at == v)
                out[{names, word}] = cycle_weight(weights).cycle_type();
            if (word.size() == max_len)
                return;
            for (SymbolIndex s = 0; s < g.alphabet().size(); ++s) {
                auto e = g.edge_from(at, s);
                if (!e || g.vertices()[g.edges()[*e].target].size() != k)
                    continue;
                const auto to = g.edges()[*e].target;
                word.push_back(s);
                weights.push_back(skew_permutation(a.cover, g.vertices()[at], g.vertices()[to], s));
                go(to);
                word.pop_back();
                weights.pop_back();
            }
        };
        go(v);
    }
    return out;
}

} // namespace

TEST_SUITE("skew")
{
    TEST_CASE("skewing permutations of the loops in C and the even shift")
    {
        const auto c = load("C.shift");
        TupleVertex t234{{1, 2, 3}};
        CHECK(skew_permutation(c, t234, t234, *c.find_symbol("a")).is_identity());
        CHECK(skew_permutation(c, t234, t234, *c.find_symbol("b")).to_cycle_string() == "(1 2 3)");
        CHECK(skew_permutation(c, t234, t234, *c.find_symbol("c")).to_cycle_string() == "(1 3 2)");

        const auto even = load("even.shift");
        TupleVertex t12{{0, 1}};
        CHECK(skew_permutation(even, t12, t12, *even.find_symbol("0")).to_cycle_string() == "(1 2)");
    }

    TEST_CASE("skewing permutation fails off the tuple graph")
    {
        const auto c = load("C.shift");
        TupleVertex t234{{1, 2, 3}};
        CHECK_THROWS(skew_permutation(c, t234, t234, *c.find_symbol("e")));
    }

    TEST_CASE("group ring matrices of C and the even shift")
    {
        const auto ac = analyze(load("C.shift"));
        const auto b3 = build_Bk(ac.cover, ac.trimmed, 3);
        REQUIRE(b3.dim() == 1);
        CHECK(b3.cell_string(0, 0) == "id + (1 2 3) + (1 3 2)");
        CHECK(augmentation(b3) == IntMatrix{{3}});
        const auto b2 = build_Bk(ac.cover, ac.trimmed, 2);
        CHECK(b2.cell_string(0, 0) == "id");
        CHECK_THROWS(build_Bk(ac.cover, ac.trimmed, 4));

        const auto ae = analyze(load("even.shift"));
        const auto be = build_Bk(ae.cover, ae.trimmed, 2);
        CHECK(be.cell_string(0, 0) == "(1 2)");
        CHECK(opp(be) == be);
    }

    TEST_CASE("opp inverts every entry")
    {
        GroupRingMatrix m(3, 1);
        m.add(0, 0, Permutation::from_one_line({2, 3, 1}));
        CHECK(m.cell_string(0, 0) == "(1 2 3)");
        CHECK(opp(m).cell_string(0, 0) == "(1 3 2)");
        CHECK(opp(opp(m)) == m);
        CHECK(augmentation(opp(m)) == augmentation(m));
        CHECK(augmentation(GroupRingMatrix(2, 0)).rows() == 0);
    }

    TEST_CASE("cycle weight composes the earliest edge first")
    {
        const auto swap = Permutation::from_one_line({2, 1, 3});
        const auto rot = Permutation::from_one_line({2, 3, 1});
        const std::vector<Permutation> path{swap, rot};
        CHECK(cycle_weight(path).to_cycle_string() == "(1 3)");
        CHECK(cycle_weight(path) == compose(rot, swap));
        const std::vector<Permutation> ids(4, Permutation::identity(3));
        CHECK(cycle_weight(ids).is_identity());
        CHECK(lifted_orbit_lengths(4, Permutation::identity(3)) == std::vector<std::size_t>{4, 4, 4});
        CHECK(lifted_orbit_lengths(1, Permutation::from_one_line({2, 1})) ==
              std::vector<std::size_t>{2});
        CHECK(lifted_orbit_lengths(1, rot) == std::vector<std::size_t>{3});
    }

    TEST_CASE("sections follow the skew around the even-shift loop")
    {
        const TupleVertex t{{0, 1}};
        const std::vector<TupleVertex> path{t, t, t};
        const auto swap = Permutation::from_one_line({2, 1});
        const std::vector<Permutation> weights{swap, swap};
        CHECK(section_states(path, weights, 0) == std::vector<StateIndex>{0, 1, 0});
        CHECK(section_states(path, weights, 1) == std::vector<StateIndex>{1, 0, 1});
    }

    TEST_CASE("permutation basics")
    {
        const auto p = Permutation::from_one_line({3, 1, 2});
        CHECK(compose(p, p.inverse()).is_identity());
        CHECK(p.one_line() == std::vector<std::size_t>{3, 1, 2});
        CHECK(p.cycle_type() == std::vector<std::size_t>{3});
        CHECK(Permutation::identity(2).to_cycle_string() == "id");
        CHECK_THROWS(Permutation::from_one_line({1, 1}));
    }

    TEST_CASE("random: brute-force skew, augmentation, relabeling covariance")
    {
        std::mt19937_64 rng(0x5EED5);
        int with_components = 0;
        for (int it = 0; it < 250; ++it) {
            const auto a = analyze(sofic::testing::random_cover(rng));
            for (const auto& e : a.trimmed.edges()) {
                const auto& from = a.trimmed.vertices()[e.source];
                const auto& to = a.trimmed.vertices()[e.target];
                if (from.size() != to.size() || from.size() < 2)
                    continue;
                const auto all = matching_permutations(a.cover, from, to, e.symbol);
                REQUIRE(all.size() == 1);
                CHECK(skew_permutation(a.cover, from, to, e.symbol) == all.front());
            }
            for (std::size_t k : a.cls.multicard) {
                ++with_components;
                const auto B = build_Bk(a.cover, a.trimmed, k);
                CHECK(augmentation(B) == a.trimmed.adjacency(k));
                CHECK(opp(opp(B)) == B);
                CHECK(augmentation(opp(B)) == augmentation(B));
            }

            std::vector<StateIndex> perm(a.cover.num_states());
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            const auto b = analyze(permute_states(a.cover, perm));
            CHECK(b.cls.multicard == a.cls.multicard);
            CHECK(closed_walk_types(a, 4) == closed_walk_types(b, 4));
        }
        CHECK(with_components > 20);
    }
}
