#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sofic/fischer.hpp"
#include "sofic/presentation.hpp"

namespace sofic {

class IntMatrix;

/// Strictly increasing list of cover states, written [i1 i2 ... ik].
struct TupleVertex {
    std::vector<StateIndex> entries;

    std::size_t size() const noexcept { return entries.size(); }
    auto operator<=>(const TupleVertex&) const = default;
};

/// Renders 1-based positions in the cover's state order: "[1 2 3]".
std::string to_string(const TupleVertex& v);

struct TupleEdge {
    std::size_t source = 0; ///< vertex index
    std::size_t target = 0;
    SymbolIndex symbol = 0;

    auto operator<=>(const TupleEdge&) const = default;
};

enum class TupleStage { raw, trimmed };

/// Labeled graph on ordered tuples of cover states. Vertices are sorted by
/// decreasing size, then lexicographically; edges by (source, target, symbol).
/// Every edge i -> j satisfies |i| >= |j|.
class TupleGraph {
public:
    TupleGraph() = default;
    TupleGraph(std::vector<std::string> alphabet, std::vector<TupleVertex> vertices,
               std::vector<TupleEdge> edges, TupleStage stage);

    const std::vector<TupleVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<TupleEdge>& edges() const noexcept { return edges_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    TupleStage stage() const noexcept { return stage_; }

    std::optional<std::size_t> find(const TupleVertex& v) const;
    /// The edge leaving `vertex` with `symbol`, if any (at most one exists).
    std::optional<std::size_t> edge_from(std::size_t vertex, SymbolIndex symbol) const;

    /// Vertex indices with |i| = k, in vertex order.
    std::vector<std::size_t> component(std::size_t k) const;
    /// Edge indices with both endpoints of size k.
    std::vector<std::size_t> component_edges(std::size_t k) const;
    /// Sizes k with a vertex of size k.
    std::set<std::size_t> sizes() const;
    /// Integer adjacency of the size-k component, in component() order.
    IntMatrix adjacency(std::size_t k) const;

    std::string edge_string(const TupleEdge& e) const; ///< "[1 2 3] -b-> [2 3]"

private:
    std::vector<std::string> alphabet_;
    std::vector<TupleVertex> vertices_;
    std::vector<TupleEdge> edges_;
    TupleStage stage_ = TupleStage::raw;
};

struct TupleWitness {
    TupleVertex from;
    TupleVertex to;
    std::string label;
};

struct ShiftClassReport {
    bool is_aft = true;
    bool is_pet = true;
    bool is_near_markov = true;
    /// Sizes k >= 2 with nonempty size-k component.
    std::set<std::size_t> multicard;
    /// For non-AFT covers multicard only bounds the multiplicity spectrum from below.
    bool multicard_is_lower_bound = false;

    std::optional<TupleWitness> aft_witness;
    std::optional<TupleWitness> pet_witness;
    /// Either the non-PET edge or a vertex whose in/out degree within its
    /// component differs from one.
    std::optional<std::variant<TupleWitness, TupleVertex>> near_markov_witness;
};

/// f(i, a): terminal states of a-edges leaving a state of i, sorted.
std::vector<StateIndex> successor(const Presentation& cover, const TupleVertex& i, SymbolIndex a);

TupleGraph build_tuple_graph(const Presentation& cover);
inline TupleGraph build_tuple_graph(const FischerCover& cover)
{
    return build_tuple_graph(cover.presentation);
}

/// Maximal subgraph in which every vertex has an incoming and an outgoing edge.
TupleGraph trim_tuple_graph(const TupleGraph& g);

ShiftClassReport classify(const TupleGraph& trimmed);

} // namespace sofic
