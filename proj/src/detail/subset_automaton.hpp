#pragma once

#include <cstddef>
#include <vector>

#include "sofic/presentation.hpp"

namespace sofic::detail {

using StateSet = std::vector<StateIndex>; // sorted, duplicate free

/// Reachable part of the subset automaton of a presentation, empty set
/// excluded. Transitions to the empty set are recorded as npos.
struct SubsetAutomaton {
    std::vector<StateSet> sets;
    std::vector<std::vector<std::size_t>> next; // [set][symbol]
    std::vector<std::size_t> parent;            // BFS tree, npos at roots
    std::vector<SymbolIndex> parent_symbol;

    std::size_t size() const noexcept { return sets.size(); }
    /// Word read along the BFS tree from a root to `node`.
    std::vector<SymbolIndex> word_to(std::size_t node) const;
};

class SearchBoundExceeded : public Error {
public:
    using Error::Error;
};

StateSet image(const Presentation& p, const StateSet& from, SymbolIndex a);

/// Breadth-first determinization from the given roots. Throws
/// SearchBoundExceeded when more than `bound` subsets are discovered.
SubsetAutomaton determinize(const Presentation& p, const std::vector<StateSet>& roots,
                            std::size_t bound);

/// Moore refinement of a partial deterministic automaton in which every
/// state accepts: two states end up together iff they read the same words.
/// Class ids are numbered by first appearance.
std::vector<std::size_t> refine(const std::vector<std::vector<std::size_t>>& next,
                                std::size_t num_symbols);

/// Default bound on explored subsets for an n-state input: 2^n * n, saturated.
std::size_t default_subset_bound(std::size_t n);

} // namespace sofic::detail
