#include "detail/subset_automaton.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace sofic::detail {

std::vector<SymbolIndex> SubsetAutomaton::word_to(std::size_t node) const
{
    std::vector<SymbolIndex> word;
    while (parent[node] != npos) {
        word.push_back(parent_symbol[node]);
        node = parent[node];
    }
    std::reverse(word.begin(), word.end());
    return word;
}

StateSet image(const Presentation& p, const StateSet& from, SymbolIndex a)
{
    StateSet out;
    for (const Edge& e : p.edges()) {
        if (e.symbol == a && std::binary_search(from.begin(), from.end(), e.source))
            out.push_back(e.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SubsetAutomaton determinize(const Presentation& p, const std::vector<StateSet>& roots,
                            std::size_t bound)
{
    const std::size_t m = p.alphabet().size();
    // successor lists per (state, symbol) so images are cheap
    std::vector<std::vector<StateSet>> step(p.num_states(), std::vector<StateSet>(m));
    for (const Edge& e : p.edges())
        step[e.source][e.symbol].push_back(e.target);

    SubsetAutomaton out;
    std::map<StateSet, std::size_t> index;
    std::deque<std::size_t> queue;

    auto intern = [&](StateSet s, std::size_t parent, SymbolIndex sym) {
        auto [it, inserted] = index.try_emplace(s, out.sets.size());
        if (inserted) {
            if (out.sets.size() >= bound)
                throw SearchBoundExceeded("subset search exceeded bound of " +
                                          std::to_string(bound) + " states");
            out.sets.push_back(std::move(s));
            out.next.emplace_back(m, npos);
            out.parent.push_back(parent);
            out.parent_symbol.push_back(sym);
            queue.push_back(it->second);
        }
        return it->second;
    };

    for (const StateSet& r : roots)
        if (!r.empty())
            intern(r, npos, 0);

    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (SymbolIndex a = 0; a < m; ++a) {
            StateSet img;
            for (StateIndex s : out.sets[cur])
                img.insert(img.end(), step[s][a].begin(), step[s][a].end());
            if (img.empty())
                continue;
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            const std::size_t target = intern(std::move(img), cur, a);
            out.next[cur][a] = target;
        }
    }
    return out;
}

std::vector<std::size_t> refine(const std::vector<std::vector<std::size_t>>& next,
                                std::size_t num_symbols)
{
    const std::size_t n = next.size();
    std::vector<std::size_t> cls(n, 0);
    std::size_t count = n == 0 ? 0 : 1;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> fresh(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> sig;
            sig.reserve(num_symbols + 1);
            sig.push_back(cls[s]);
            for (std::size_t a = 0; a < num_symbols; ++a)
                sig.push_back(next[s][a] == npos ? npos : cls[next[s][a]]);
            auto [it, _] = ids.try_emplace(std::move(sig), ids.size());
            fresh[s] = it->second;
        }
        const std::size_t fresh_count = ids.size();
        cls = std::move(fresh);
        if (fresh_count == count)
            break;
        count = fresh_count;
    }
    return cls;
}

std::size_t default_subset_bound(std::size_t n)
{
    if (n >= 58)
        return std::numeric_limits<std::size_t>::max();
    const std::size_t pow = std::size_t{1} << n;
    return pow * std::max<std::size_t>(n, 1);
}

} // namespace sofic::detail
