#include "sofic/fischer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "detail/subset_automaton.hpp"

namespace sofic {

namespace {

std::size_t bound_for(const Presentation& p, const FischerOptions& options)
{
    return options.magic_bound.value_or(detail::default_subset_bound(p.num_states()));
}

detail::StateSet all_states(const Presentation& p)
{
    detail::StateSet all(p.num_states());
    std::iota(all.begin(), all.end(), StateIndex{0});
    return all;
}

Word spell(const Presentation& p, const std::vector<SymbolIndex>& word)
{
    Word out;
    for (SymbolIndex a : word)
        out.push_back(p.alphabet()[a]);
    return out;
}

} // namespace

FischerCover fischer_cover(const Presentation& p, const FischerOptions& options)
{
    const ValidationReport report = validate(p);
    if (!report.is_essential || !report.is_irreducible)
        throw PreconditionError("Fischer cover needs an essential irreducible presentation",
                                report);

    const std::size_t m = p.alphabet().size();
    const auto sa = detail::determinize(p, {all_states(p)}, bound_for(p, options));
    const std::size_t count = sa.size();

    // trim: drop subsets without predecessors (the root, typically)
    std::vector<bool> alive(count, true);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::size_t> indeg(count, 0), outdeg(count, 0);
        for (std::size_t x = 0; x < count; ++x) {
            if (!alive[x])
                continue;
            for (std::size_t a = 0; a < m; ++a) {
                const std::size_t y = sa.next[x][a];
                if (y != npos && alive[y]) {
                    ++outdeg[x];
                    ++indeg[y];
                }
            }
        }
        for (std::size_t x = 0; x < count; ++x) {
            if (alive[x] && (indeg[x] == 0 || outdeg[x] == 0)) {
                alive[x] = false;
                changed = true;
            }
        }
    }

    std::vector<std::size_t> kept;
    std::vector<std::size_t> where(count, npos);
    for (std::size_t x = 0; x < count; ++x) {
        if (alive[x]) {
            where[x] = kept.size();
            kept.push_back(x);
        }
    }
    if (kept.empty())
        throw Error("subset construction has no recurrent part");

    std::vector<std::vector<std::size_t>> next(kept.size(), std::vector<std::size_t>(m, npos));
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t a = 0; a < m; ++a)
            if (const std::size_t y = sa.next[kept[i]][a]; y != npos && alive[y])
                next[i][a] = where[y];
    const auto cls = detail::refine(next, m);

    // least-cardinality subset, earliest in BFS order
    std::size_t seed = 0;
    for (std::size_t i = 1; i < kept.size(); ++i)
        if (sa.sets[kept[i]].size() < sa.sets[kept[seed]].size())
            seed = i;

    const std::size_t num_classes = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<std::vector<std::size_t>> class_next(num_classes,
                                                     std::vector<std::size_t>(m, npos));
    std::vector<std::size_t> witness(num_classes, npos); // kept index with least subset
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::size_t c = cls[i];
        for (std::size_t a = 0; a < m; ++a)
            if (next[i][a] != npos)
                class_next[c][a] = cls[next[i][a]];
        auto better = [&](std::size_t cand, std::size_t cur) {
            const auto& s = sa.sets[kept[cand]];
            const auto& t = sa.sets[kept[cur]];
            return s.size() != t.size() ? s.size() < t.size() : s < t;
        };
        if (witness[c] == npos || better(i, witness[c]))
            witness[c] = i;
    }

    // classes reachable from the seed, with BFS words
    std::vector<std::size_t> parent(num_classes, npos);
    std::vector<SymbolIndex> via(num_classes, 0);
    std::vector<bool> seen(num_classes, false);
    std::vector<std::size_t> order;
    std::deque<std::size_t> queue{cls[seed]};
    seen[cls[seed]] = true;
    while (!queue.empty()) {
        const std::size_t c = queue.front();
        queue.pop_front();
        order.push_back(c);
        for (SymbolIndex a = 0; a < m; ++a) {
            const std::size_t d = class_next[c][a];
            if (d != npos && !seen[d]) {
                seen[d] = true;
                parent[d] = c;
                via[d] = a;
                queue.push_back(d);
            }
        }
    }

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sa.sets[kept[witness[a]]] < sa.sets[kept[witness[b]]];
    });
    std::vector<std::size_t> position(num_classes, npos);
    for (std::size_t i = 0; i < order.size(); ++i)
        position[order[i]] = i;

    FischerCover cover;
    std::vector<std::string> names;
    const std::vector<SymbolIndex> seed_word = sa.word_to(kept[seed]);
    for (std::size_t c : order) {
        const auto& subset = sa.sets[kept[witness[c]]];
        cover.provenance.push_back(subset);
        std::string name;
        if (subset.size() == 1) {
            name = p.state_name(subset.front());
        } else {
            name = "{";
            for (std::size_t i = 0; i < subset.size(); ++i)
                name += (i ? "," : "") + p.state_name(subset[i]);
            name += "}";
        }
        while (std::find(names.begin(), names.end(), name) != names.end())
            name += '\'';
        names.push_back(std::move(name));

        std::vector<SymbolIndex> suffix;
        for (std::size_t d = c; parent[d] != npos; d = parent[d])
            suffix.push_back(via[d]);
        std::reverse(suffix.begin(), suffix.end());
        std::vector<SymbolIndex> word = seed_word;
        word.insert(word.end(), suffix.begin(), suffix.end());
        cover.magic_words.push_back(spell(p, word));
    }

    std::vector<LabeledEdge> edges;
    for (std::size_t c : order)
        for (SymbolIndex a = 0; a < m; ++a)
            if (const std::size_t d = class_next[c][a]; d != npos)
                edges.push_back({static_cast<StateIndex>(position[c]),
                                 static_cast<StateIndex>(position[d]), p.alphabet()[a]});
    cover.presentation = Presentation(std::move(names), std::move(edges));
    return cover;
}

FischerVerification verify_fischer(const Presentation& p, const FischerOptions& options)
{
    FischerVerification out;
    out.report = validate(p);
    if (p.empty())
        return out;
    try {
        const auto sa = detail::determinize(p, {all_states(p)}, bound_for(p, options));
        std::size_t best_len = npos;
        for (std::size_t x = 0; x < sa.size(); ++x) {
            for (SymbolIndex a = 0; a < p.alphabet().size(); ++a) {
                const std::size_t y = sa.next[x][a];
                if (y == npos || sa.sets[y].size() != 1)
                    continue;
                auto word = sa.word_to(x);
                word.push_back(a);
                if (word.size() < best_len) {
                    best_len = word.size();
                    out.certificate = MagicWordCertificate{spell(p, word), sa.sets[y].front()};
                }
            }
        }
    } catch (const detail::SearchBoundExceeded&) {
        out.certificate.reset();
    }
    return out;
}

// ---------------------------------------------------------------------------
// isomorphism

namespace {

using Code = std::vector<std::size_t>;

// BFS relabeling from `start`; empty when some state is unreachable.
Code bfs_code(const std::vector<std::vector<std::size_t>>& next, std::size_t start)
{
    const std::size_t n = next.size();
    std::vector<std::size_t> label(n, npos);
    std::vector<std::size_t> order{start};
    label[start] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t t : next[order[i]])
            if (t != npos && label[t] == npos) {
                label[t] = order.size();
                order.push_back(t);
            }
    if (order.size() != n)
        return {};
    Code code;
    for (std::size_t s : order)
        for (std::size_t t : next[s])
            code.push_back(t == npos ? npos : label[t]);
    return code;
}

std::optional<Code> rr_canonical(const Presentation& p)
{
    if (!validate(p).is_right_resolving)
        return std::nullopt;
    const auto next = p.transition_table();
    Code best;
    for (std::size_t s = 0; s < p.num_states(); ++s) {
        Code c = bfs_code(next, s);
        if (c.empty())
            return std::nullopt;
        if (best.empty() || c < best)
            best = std::move(c);
    }
    return best;
}

// count[s][t][a]
using Counts = std::vector<std::vector<std::map<SymbolIndex, std::size_t>>>;

Counts edge_counts(const Presentation& p)
{
    Counts c(p.num_states(), std::vector<std::map<SymbolIndex, std::size_t>>(p.num_states()));
    for (const Edge& e : p.edges())
        ++c[e.source][e.target][e.symbol];
    return c;
}

bool extend(const Counts& ca, const Counts& cb, std::vector<std::size_t>& map,
            std::vector<bool>& used, std::size_t next_state)
{
    const std::size_t n = ca.size();
    if (next_state == n)
        return true;
    for (std::size_t cand = 0; cand < n; ++cand) {
        if (used[cand])
            continue;
        bool ok = ca[next_state][next_state] == cb[cand][cand];
        for (std::size_t s = 0; ok && s < next_state; ++s)
            ok = ca[s][next_state] == cb[map[s]][cand] && ca[next_state][s] == cb[cand][map[s]];
        if (!ok)
            continue;
        map[next_state] = cand;
        used[cand] = true;
        if (extend(ca, cb, map, used, next_state + 1))
            return true;
        used[cand] = false;
    }
    return false;
}

} // namespace

bool isomorphic(const Presentation& a, const Presentation& b)
{
    if (a.num_states() != b.num_states() || a.num_edges() != b.num_edges() ||
        a.alphabet() != b.alphabet())
        return false;
    const auto ka = rr_canonical(a);
    const auto kb = rr_canonical(b);
    if (ka && kb)
        return *ka == *kb;
    if (ka.has_value() != kb.has_value() && validate(a).is_right_resolving !=
                                                validate(b).is_right_resolving)
        return false;
    const Counts ca = edge_counts(a), cb = edge_counts(b);
    std::vector<std::size_t> map(a.num_states(), npos);
    std::vector<bool> used(a.num_states(), false);
    return extend(ca, cb, map, used, 0);
}

} // namespace sofic
