#include <doctest.h>

#include <functional>
#include <random>

#include "sofic/fischer.hpp"
#include "sofic/invariants.hpp"
#include "sofic/oracle.hpp"
#include "sofic/skew.hpp"
#include "support/random_shifts.hpp"
#include "support/reference.hpp"

using namespace sofic;

namespace {

std::vector<std::vector<SymbolIndex>> all_words(std::size_t symbols, std::size_t max_len,
                                                bool nonempty)
{
    std::vector<std::vector<SymbolIndex>> out;
    std::vector<SymbolIndex> w;
    std::function<void()> go = [&] {
        if (!w.empty() || !nonempty)
            out.push_back(w);
        if (w.size() == max_len)
            return;
        for (SymbolIndex a = 0; a < symbols; ++a) {
            w.push_back(a);
            go();
            w.pop_back();
        }
    };
    go();
    return out;
}

} // namespace

TEST_SUITE("properties")
{
    TEST_CASE("random: symbol expansion keeps flags, multicard and cover invariants")
    {
        std::mt19937_64 rng(0xE9A7);
        for (int it = 0; it < 150; ++it) {
            const auto p = sofic::testing::random_cover(rng);
            const auto sym = p.alphabet()[rng() % p.alphabet().size()];
            const auto x = fischer_cover(symbol_expand(p, sym)).presentation;
            const auto a = classify(trim_tuple_graph(build_tuple_graph(p)));
            const auto b = classify(trim_tuple_graph(build_tuple_graph(x)));
            CHECK(a.is_aft == b.is_aft);
            CHECK(a.is_pet == b.is_pet);
            CHECK(a.is_near_markov == b.is_near_markov);
            CHECK(a.multicard == b.multicard);
            const auto bf_a = bowen_franks(adjacency_matrix(p));
            const auto bf_b = bowen_franks(adjacency_matrix(x));
            CHECK(bf_a.group == bf_b.group);
            CHECK(bf_a.det_sign() == bf_b.det_sign());
        }
    }

    TEST_CASE("random: when the fiber product says PET, multiple points keep their count in the limit")
    {
        std::mt19937_64 rng(0x10CA1);
        const auto tails = all_words(3, 3, true);
        const auto middles = all_words(3, 2, false);
        int pet_covers = 0;
        for (int it = 0; it < 80; ++it) {
            const auto p = sofic::testing::random_cover(rng, 5, 3);
            if (!pet_by_fiber(p).is_pet)
                continue;
            ++pet_covers;
            const std::size_t m = p.alphabet().size();
            for (const auto& u : tails) {
                if (std::any_of(u.begin(), u.end(), [&](auto a) { return a >= m; }))
                    continue;
                const auto nu = reference::periodic_preimages(p, u);
                if (!nu)
                    continue;
                for (const auto& r : tails) {
                    if (std::any_of(r.begin(), r.end(), [&](auto a) { return a >= m; }))
                        continue;
                    const auto nr = reference::periodic_preimages(p, r);
                    for (const auto& mid : middles) {
                        if (std::any_of(mid.begin(), mid.end(), [&](auto a) { return a >= m; }))
                            continue;
                        const auto n = reference::junction_preimages(p, u, mid, r);
                        // one preimage is allowed next to limits with more
                        if (n < 2)
                            continue;
                        CHECK(n == nu);
                        CHECK(n == nr);
                    }
                }
            }
        }
        CHECK(pet_covers > 20);
    }

    TEST_CASE("random: census never contradicts tuple membership")
    {
        std::mt19937_64 rng(0xCE1);
        for (int it = 0; it < 200; ++it) {
            const auto p = sofic::testing::random_cover(rng);
            const auto g = trim_tuple_graph(build_tuple_graph(p));
            const auto problems = census_disagreements(p, g, periodic_preimage_census(p, 5), false);
            CHECK_MESSAGE(problems.empty(), render(p));
        }
    }
}
