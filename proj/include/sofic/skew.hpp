#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sofic/integer_matrix.hpp"
#include "sofic/tupleflow.hpp"

namespace sofic {

/// Permutation of {1..k}, stored 0-based.
class Permutation {
public:
    Permutation() = default;
    static Permutation identity(std::size_t k);
    /// From one-line notation with 1-based images; throws unless bijective.
    static Permutation from_one_line(const std::vector<std::size_t>& images);

    std::size_t degree() const noexcept { return images_.size(); }
    /// 0-based image of 0-based t.
    std::size_t operator()(std::size_t t) const { return images_.at(t); }

    /// (outer ∘ inner)(t) = outer(inner(t))
    friend Permutation compose(const Permutation& outer, const Permutation& inner);
    Permutation inverse() const;
    bool is_identity() const noexcept;

    /// Cycles (0-based, each starting at its least element), fixed points included.
    std::vector<std::vector<std::size_t>> cycles() const;
    /// Sorted cycle lengths.
    std::vector<std::size_t> cycle_type() const;

    std::string to_cycle_string() const; ///< "(1 2 3)", "id"
    std::vector<std::size_t> one_line() const; ///< 1-based images

    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<std::uint32_t> images_;
};

/// Square matrix over Z_+ S_k: each cell is a multiset of permutations.
class GroupRingMatrix {
public:
    GroupRingMatrix() = default;
    GroupRingMatrix(std::size_t k, std::size_t dim) : k_(k), dim_(dim), cells_(dim * dim) {}

    std::size_t degree() const noexcept { return k_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Sorted multiset of the cell.
    const std::vector<Permutation>& at(std::size_t i, std::size_t j) const
    {
        return cells_[i * dim_ + j];
    }
    void add(std::size_t i, std::size_t j, Permutation g);

    std::string cell_string(std::size_t i, std::size_t j) const; ///< "id + (1 2 3)", "0"
    bool operator==(const GroupRingMatrix&) const = default;

private:
    std::size_t k_ = 0;
    std::size_t dim_ = 0;
    std::vector<std::vector<Permutation>> cells_;
};

/// Base graph of size-k tuples with skew label per edge.
struct PointExtension {
    std::size_t k = 0;
    std::vector<TupleVertex> vertices;
    std::vector<TupleEdge> edges;          ///< indices into `vertices`
    std::vector<Permutation> skew;         ///< one per edge
    std::vector<std::string> alphabet;
};

/// The permutation tau with an a-edge from i_t to j_tau(t) for every t.
Permutation skew_permutation(const Presentation& cover, const TupleVertex& from,
                             const TupleVertex& to, SymbolIndex symbol);

PointExtension point_extension(const Presentation& cover, const TupleGraph& trimmed, std::size_t k);

GroupRingMatrix build_Bk(const Presentation& cover, const TupleGraph& trimmed, std::size_t k);
GroupRingMatrix build_Bk(const PointExtension& ext);

IntMatrix augmentation(const GroupRingMatrix& m);
GroupRingMatrix opp(const GroupRingMatrix& m);

/// tau(E_L) ∘ ... ∘ tau(E_1): the earliest edge acts first.
Permutation cycle_weight(std::span<const Permutation> path_weights);

/// Orbit lengths of the k lifts of a base cycle of length L: L times the
/// cycle lengths of its weight, sorted.
std::vector<std::size_t> lifted_orbit_lengths(std::size_t base_length, const Permutation& weight);

/// Position-j lift of a path in the size-k component: the cover states
/// visited by the j-th (0-based) section. `vertex_path` has one more entry
/// than `path_weights`.
std::vector<StateIndex> section_states(const std::vector<TupleVertex>& vertex_path,
                                       std::span<const Permutation> path_weights, std::size_t j);

} // namespace sofic
