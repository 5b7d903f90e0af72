#pragma once

// Brute-force computations straight from the definitions, used to cross-check
// the fast algorithms on small inputs.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "sofic/fischer.hpp"
#include "sofic/presentation.hpp"
#include "sofic/tupleflow.hpp"

namespace sofic {

struct LanguageSample {
    /// by_length[L]: the words of length L readable along some path.
    std::vector<std::set<Word>> by_length;

    std::size_t max_length() const noexcept { return by_length.empty() ? 0 : by_length.size() - 1; }
    bool operator==(const LanguageSample&) const = default;
};

LanguageSample language(const Presentation& p, std::size_t max_length);

/// One periodic orbit of the image shift: the point w^∞ for a primitive word
/// w that is least among its rotations.
struct CensusRow {
    Word word;
    std::vector<SymbolIndex> symbols;
    std::size_t period = 0;
    /// Number of cover points mapping to w^∞.
    std::size_t preimages = 0;
    /// Periods of the cover orbits over this orbit, sorted.
    std::vector<std::size_t> orbit_lengths;
    /// Cover states occupied by the preimages where w starts, sorted.
    std::vector<StateIndex> fiber_states;
};

/// All periodic orbits of period <= max_period, by exhaustive matching of
/// words against the (right-resolving) cover.
std::vector<CensusRow> periodic_preimage_census(const Presentation& cover, std::size_t max_period);

/// Compares the census with the trimmed tuple graph:
///   a row with k >= 2 preimages must sit on a closed walk at the tuple of its
///   fiber, whose weight predicts the orbit lengths;
///   a row with one preimage must not label a closed walk through tuples of
///   size >= 2;
///   with `exact_multiplicity` (PET covers) every closed walk through size-k
///   tuples labeled by a power of a census word must have exactly k preimages.
///   The last two checks look at powers w^j so that cycles longer than the
///   period are seen.
/// Returns one message per disagreement.
std::vector<std::string> census_disagreements(const Presentation& cover, const TupleGraph& trimmed,
                                              const std::vector<CensusRow>& census,
                                              bool exact_multiplicity);

/// Pairs of equal-label paths in the cover.
struct FiberProduct {
    std::vector<std::pair<StateIndex, StateIndex>> pairs;
    struct PairEdge {
        std::size_t source = 0; ///< index into pairs
        std::size_t target = 0;
        std::size_t first_edge = 0; ///< cover edge indices
        std::size_t second_edge = 0;
    };
    std::vector<PairEdge> edges;
    /// Pairs that survive trimming (lie on a bi-infinite pair path).
    std::vector<bool> essential;
    /// Component of each essential off-diagonal pair (npos otherwise);
    /// components are the weakly connected pieces of the trimmed
    /// off-diagonal pair graph.
    std::vector<std::size_t> component;
    std::size_t num_components = 0;
};

FiberProduct fiber_product(const Presentation& cover);

struct FiberOptions {
    /// Longest periodic tail tried on each side of the sampled points.
    std::size_t cycle_bound = 6;
};

struct FiberVerdict {
    bool is_pet = false;
    std::string reason;
    /// Number of partners a point has in each component, over the sampled
    /// points of that component's image.
    std::vector<std::set<std::size_t>> partner_counts;
    std::size_t points_sampled = 0;
};

/// PET decided on the fiber product: the projection must be constant-to-one
/// on every component, and components with overlapping images must have
/// equal images. Merging of distinct equal-label paths fails directly.
/// Points are sampled as u^∞ m r^∞ with |u|, |r| <= cycle_bound.
FiberVerdict pet_by_fiber(const Presentation& cover, const FiberOptions& options = {});

/// States grouped by the words of length <= max_length readable from them.
/// Class ids are numbered by first appearance.
std::vector<std::size_t> follower_partition_by_words(const Presentation& p, std::size_t max_length);

struct StablePartition {
    std::vector<std::size_t> classes;
    std::size_t depth = 0; ///< least L after which the partition no longer changes
};

/// Raises the word length until two consecutive partitions agree.
StablePartition stable_follower_partition(const Presentation& p);

} // namespace sofic
