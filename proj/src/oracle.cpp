#include "sofic/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>

#include "sofic/skew.hpp"

namespace sofic {

namespace {

using Symbols = std::vector<SymbolIndex>;

Word spell(const Presentation& p, const Symbols& s)
{
    Word w;
    for (auto a : s)
        w.push_back(p.alphabet()[a]);
    return w;
}

std::vector<StateIndex> step(const Presentation& p, const std::vector<StateIndex>& from,
                             SymbolIndex a)
{
    std::vector<StateIndex> out;
    for (const Edge& e : p.edges())
        if (e.symbol == a && std::binary_search(from.begin(), from.end(), e.source))
            out.push_back(e.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Every word of length <= max_length readable from some state of `start`.
std::set<Symbols> readable_words(const Presentation& p, std::vector<StateIndex> start,
                                 std::size_t max_length)
{
    std::set<Symbols> out;
    Symbols word;
    std::function<void(const std::vector<StateIndex>&)> walk = [&](const std::vector<StateIndex>& at) {
        out.insert(word);
        if (word.size() == max_length)
            return;
        for (SymbolIndex a = 0; a < p.alphabet().size(); ++a) {
            auto next = step(p, at, a);
            if (next.empty())
                continue;
            word.push_back(a);
            walk(next);
            word.pop_back();
        }
    };
    if (!start.empty())
        walk(start);
    return out;
}

// Primitive and strictly smaller than each of its other rotations.
bool is_lyndon(const Symbols& w)
{
    for (std::size_t r = 1; r < w.size(); ++r) {
        Symbols rot(w.begin() + r, w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + r);
        if (!(w < rot))
            return false;
    }
    return true;
}

// States lying on a cycle of the partial map f.
std::vector<StateIndex> cyclic_points(const std::vector<std::size_t>& f)
{
    std::vector<StateIndex> out;
    for (std::size_t s = 0; s < f.size(); ++s) {
        std::size_t t = f[s];
        for (std::size_t i = 0; i < f.size() && t != npos && t != s; ++i)
            t = f[t];
        if (t == s)
            out.push_back(static_cast<StateIndex>(s));
    }
    return out;
}

} // namespace

LanguageSample language(const Presentation& p, std::size_t max_length)
{
    LanguageSample sample;
    sample.by_length.resize(max_length + 1);
    std::vector<StateIndex> all(p.num_states());
    for (std::size_t s = 0; s < all.size(); ++s)
        all[s] = static_cast<StateIndex>(s);
    for (const auto& w : readable_words(p, all, max_length))
        sample.by_length[w.size()].insert(spell(p, w));
    if (p.empty())
        sample.by_length[0].insert(Word{});
    return sample;
}

std::vector<CensusRow> periodic_preimage_census(const Presentation& cover, std::size_t max_period)
{
    const auto table = cover.transition_table();
    const std::size_t n = cover.num_states();
    std::vector<CensusRow> rows;
    Symbols word;

    std::function<void(const std::vector<std::size_t>&)> grow = [&](const std::vector<std::size_t>& f) {
        if (!word.empty() && is_lyndon(word)) {
            auto cyc = cyclic_points(f);
            if (!cyc.empty()) {
                CensusRow row;
                row.symbols = word;
                row.word = spell(cover, word);
                row.period = word.size();
                row.preimages = cyc.size();
                row.fiber_states = cyc;
                std::vector<bool> seen(n, false);
                for (StateIndex s : cyc) {
                    if (seen[s])
                        continue;
                    std::size_t len = 0;
                    for (std::size_t t = s; !seen[t]; t = f[t]) {
                        seen[t] = true;
                        ++len;
                    }
                    row.orbit_lengths.push_back(len * word.size());
                }
                std::sort(row.orbit_lengths.begin(), row.orbit_lengths.end());
                rows.push_back(std::move(row));
            }
        }
        if (word.size() == max_period)
            return;
        for (SymbolIndex a = 0; a < cover.alphabet().size(); ++a) {
            std::vector<std::size_t> g(n, npos);
            bool any = false;
            for (std::size_t s = 0; s < n; ++s)
                if (f[s] != npos && table[f[s]][a] != npos) {
                    g[s] = table[f[s]][a];
                    any = true;
                }
            if (!any)
                continue;
            word.push_back(a);
            grow(g);
            word.pop_back();
        }
    };
    std::vector<std::size_t> id(n);
    for (std::size_t s = 0; s < n; ++s)
        id[s] = s;
    grow(id);
    std::sort(rows.begin(), rows.end(), [](const CensusRow& a, const CensusRow& b) {
        return a.period != b.period ? a.period < b.period : a.symbols < b.symbols;
    });
    return rows;
}

std::vector<std::string> census_disagreements(const Presentation& cover, const TupleGraph& g,
                                              const std::vector<CensusRow>& census,
                                              bool exact_multiplicity)
{
    std::vector<std::string> out;
    auto word_string = [](const Word& w) {
        std::string s;
        for (const auto& a : w)
            s += a.size() == 1 ? a : "(" + a + ")";
        return s;
    };
    // the closed walk labeled by `symbols` starting at vertex v, if any
    auto closed_walk = [&](std::size_t v, const Symbols& symbols)
        -> std::optional<std::pair<std::vector<TupleVertex>, std::vector<Permutation>>> {
        std::vector<TupleVertex> path{g.vertices()[v]};
        std::vector<Permutation> weights;
        std::size_t at = v;
        for (SymbolIndex a : symbols) {
            auto e = g.edge_from(at, a);
            if (!e)
                return std::nullopt;
            const TupleEdge& te = g.edges()[*e];
            if (g.vertices()[te.target].size() != g.vertices()[at].size())
                return std::nullopt;
            weights.push_back(skew_permutation(cover, g.vertices()[at], g.vertices()[te.target], a));
            at = te.target;
            path.push_back(g.vertices()[at]);
        }
        if (at != v)
            return std::nullopt;
        return std::pair{path, weights};
    };

    // a closed walk labeled by some power of `symbols` through v
    auto closes_after_repeats = [&](std::size_t v, const Symbols& symbols) {
        const std::size_t k = g.vertices()[v].size();
        std::size_t at = v;
        for (std::size_t rep = 0; rep < g.vertices().size(); ++rep) {
            for (SymbolIndex a : symbols) {
                auto e = g.edge_from(at, a);
                if (!e || g.vertices()[g.edges()[*e].target].size() != k)
                    return false;
                at = g.edges()[*e].target;
            }
            if (at == v)
                return true;
        }
        return false;
    };

    for (const auto& row : census) {
        const std::string name = word_string(row.word) + "^inf";
        if (row.preimages >= 2) {
            TupleVertex fiber{row.fiber_states};
            auto v = g.find(fiber);
            if (!v) {
                out.push_back(name + ": fiber " + to_string(fiber) + " is not a tuple vertex");
                continue;
            }
            auto walk = closed_walk(*v, row.symbols);
            if (!walk) {
                out.push_back(name + ": no closed walk at " + to_string(fiber));
                continue;
            }
            auto predicted = lifted_orbit_lengths(row.period, cycle_weight(walk->second));
            if (predicted != row.orbit_lengths)
                out.push_back(name + ": cycle weight predicts other orbit lengths than observed");
        }
        for (std::size_t v = 0; v < g.vertices().size(); ++v) {
            const std::size_t k = g.vertices()[v].size();
            if (k < 2 || !closes_after_repeats(v, row.symbols))
                continue;
            if (row.preimages == 1)
                out.push_back(name + ": one preimage, yet a closed walk at " +
                              to_string(g.vertices()[v]));
            else if (exact_multiplicity && row.preimages != k)
                out.push_back(name + ": " + std::to_string(row.preimages) +
                              " preimages, yet a closed walk at " + to_string(g.vertices()[v]));
        }
    }
    return out;
}

std::vector<std::size_t> follower_partition_by_words(const Presentation& p, std::size_t max_length)
{
    std::map<std::set<Symbols>, std::size_t> ids;
    std::vector<std::size_t> out;
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        auto words = readable_words(p, {s}, max_length);
        auto [it, fresh] = ids.try_emplace(std::move(words), ids.size());
        out.push_back(it->second);
    }
    return out;
}

StablePartition stable_follower_partition(const Presentation& p)
{
    const std::size_t n = p.num_states();
    const std::size_t cap = n < 6 ? (std::size_t{1} << n) : 2 * n;
    StablePartition r{follower_partition_by_words(p, 0), 0};
    for (std::size_t L = 1; L <= cap; ++L) {
        auto next = follower_partition_by_words(p, L);
        if (next == r.classes)
            return r;
        r = {std::move(next), L};
    }
    return r;
}

FiberProduct fiber_product(const Presentation& cover)
{
    const std::size_t n = cover.num_states();
    FiberProduct fp;
    for (StateIndex s = 0; s < n; ++s)
        for (StateIndex t = 0; t < n; ++t)
            fp.pairs.emplace_back(s, t);
    const auto& E = cover.edges();
    for (std::size_t e = 0; e < E.size(); ++e)
        for (std::size_t f = 0; f < E.size(); ++f)
            if (E[e].symbol == E[f].symbol)
                fp.edges.push_back({E[e].source * n + E[f].source, E[e].target * n + E[f].target, e, f});

    const std::size_t m = fp.pairs.size();
    fp.essential.assign(m, true);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::size_t> in(m, 0), out(m, 0);
        for (const auto& e : fp.edges)
            if (fp.essential[e.source] && fp.essential[e.target]) {
                ++out[e.source];
                ++in[e.target];
            }
        for (std::size_t q = 0; q < m; ++q)
            if (fp.essential[q] && (in[q] == 0 || out[q] == 0)) {
                fp.essential[q] = false;
                changed = true;
            }
    }

    auto off_diagonal = [&](std::size_t q) {
        return fp.essential[q] && fp.pairs[q].first != fp.pairs[q].second;
    };
    std::vector<std::vector<std::size_t>> adjacent(m);
    for (const auto& e : fp.edges)
        if (off_diagonal(e.source) && off_diagonal(e.target)) {
            adjacent[e.source].push_back(e.target);
            adjacent[e.target].push_back(e.source);
        }
    fp.component.assign(m, npos);
    for (std::size_t q = 0; q < m; ++q) {
        if (!off_diagonal(q) || fp.component[q] != npos)
            continue;
        std::vector<std::size_t> stack{q};
        fp.component[q] = fp.num_components;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adjacent[v])
                if (fp.component[w] == npos) {
                    fp.component[w] = fp.num_components;
                    stack.push_back(w);
                }
        }
        ++fp.num_components;
    }
    return fp;
}

FiberVerdict pet_by_fiber(const Presentation& cover, const FiberOptions& options)
{
    (void)cover.transition_table(); // right-resolving or throw
    const std::size_t n = cover.num_states();
    if (n > 8)
        throw Error("fiber product check is limited to covers with at most 8 states");
    const FiberProduct fp = fiber_product(cover);
    const auto& E = cover.edges();
    FiberVerdict verdict;
    verdict.partner_counts.resize(fp.num_components);

    auto pair_name = [&](std::size_t q) {
        return "(" + cover.state_name(fp.pairs[q].first) + "," +
               cover.state_name(fp.pairs[q].second) + ")";
    };
    for (const auto& e : fp.edges) {
        const auto [s, t] = fp.pairs[e.target];
        if (fp.component[e.source] != npos && fp.essential[e.target] && s == t) {
            verdict.reason = "distinct equal-label paths merge through " + pair_name(e.source) +
                             " -> " + pair_name(e.target) + ": not left-closing";
            return verdict;
        }
    }

    // successor of an off-diagonal pair along a symbol
    const std::size_t m = fp.pairs.size();
    const std::size_t num_symbols = cover.alphabet().size();
    std::vector<std::vector<std::size_t>> succ(m, std::vector<std::size_t>(num_symbols, npos));
    for (const auto& e : fp.edges)
        if (fp.component[e.source] != npos && fp.component[e.target] != npos)
            succ[e.source][E[e.first_edge].symbol] = e.target;
    std::vector<std::size_t> live;
    for (std::size_t q = 0; q < m; ++q)
        if (fp.component[q] != npos)
            live.push_back(q);

    // Seeds: for every word u with |u| <= cycle_bound, the pairs with a
    // left-infinite u^∞ history (cyclic under u) and those with a
    // right-infinite u^∞ future.
    using Mask = std::uint64_t;
    std::set<Mask> left, right;
    std::vector<std::size_t> g(m, npos);
    for (std::size_t q : live)
        g[q] = q;
    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
        if (depth > 0) {
            Mask l = 0, r = 0;
            for (std::size_t q : live) {
                std::size_t cur = g[q];
                for (std::size_t i = 0; i < live.size() && cur != npos && cur != q; ++i)
                    cur = g[cur];
                if (cur == q)
                    l |= Mask{1} << q;
                cur = q;
                for (std::size_t i = 0; i <= live.size() && cur != npos; ++i)
                    cur = g[cur];
                if (cur != npos)
                    r |= Mask{1} << q;
            }
            if (l)
                left.insert(l);
            if (r)
                right.insert(r);
        }
        if (depth == options.cycle_bound)
            return;
        for (SymbolIndex a = 0; a < num_symbols; ++a) {
            std::vector<std::size_t> saved = g;
            bool any = false;
            for (std::size_t q : live) {
                if (g[q] != npos)
                    g[q] = succ[g[q]][a];
                any = any || g[q] != npos;
            }
            if (any)
                walk(depth + 1);
            g = std::move(saved);
        }
    };
    walk(0);

    // Close the left sets under reading a symbol and the right sets under
    // prepending one: tails u^∞ m and m r^∞.
    auto close = [&](std::set<Mask>& fam, bool forward) {
        std::vector<Mask> work(fam.begin(), fam.end());
        while (!work.empty()) {
            const Mask x = work.back();
            work.pop_back();
            for (SymbolIndex a = 0; a < num_symbols; ++a) {
                Mask y = 0;
                for (std::size_t q : live) {
                    const std::size_t t = succ[q][a];
                    if (forward && (x >> q & 1) && t != npos)
                        y |= Mask{1} << t;
                    if (!forward && t != npos && (x >> t & 1))
                        y |= Mask{1} << q;
                }
                if (y && fam.insert(y).second)
                    work.push_back(y);
            }
        }
    };
    close(left, true);
    close(right, false);

    // Points u^∞ m r^∞: a preimage x is fixed by its state at the junction;
    // its partners in component i are the pairs (x, w) alive on both sides.
    std::vector<Mask> component_mask(fp.num_components, 0), first_mask(n, 0);
    for (std::size_t q : live) {
        component_mask[fp.component[q]] |= Mask{1} << q;
        first_mask[fp.pairs[q].first] |= Mask{1} << q;
    }
    const std::size_t c = fp.num_components;
    std::vector<std::vector<bool>> overlap(c, std::vector<bool>(c, false)), split = overlap;
    std::vector<std::size_t> hit(c);
    for (Mask l : left)
        for (Mask r : right) {
            const Mask both = l & r;
            if (!both)
                continue;
            for (StateIndex s = 0; s < n; ++s) {
                const Mask mine = both & first_mask[s];
                if (!mine)
                    continue;
                ++verdict.points_sampled;
                for (std::size_t i = 0; i < c; ++i) {
                    hit[i] = static_cast<std::size_t>(std::popcount(mine & component_mask[i]));
                    if (hit[i])
                        verdict.partner_counts[i].insert(hit[i]);
                }
                for (std::size_t i = 0; i < c; ++i)
                    for (std::size_t j = 0; j < c; ++j) {
                        if (hit[i] && hit[j])
                            overlap[i][j] = true;
                        else if ((hit[i] != 0) != (hit[j] != 0))
                            split[i][j] = true;
                    }
            }
        }

    for (std::size_t i = 0; i < c; ++i)
        if (verdict.partner_counts[i].size() > 1) {
            verdict.reason = "projection is not constant-to-one on fiber component " + std::to_string(i);
            return verdict;
        }
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = i + 1; j < c; ++j)
            if (overlap[i][j] && split[i][j]) {
                verdict.reason = "fiber components " + std::to_string(i) + " and " +
                                 std::to_string(j) + " have overlapping but different images";
                return verdict;
            }
    verdict.is_pet = true;
    verdict.reason = "constant-to-one on every fiber component";
    return verdict;
}

} // namespace sofic
