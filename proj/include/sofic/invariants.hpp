#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sofic/integer_matrix.hpp"
#include "sofic/skew.hpp"
#include "sofic/tupleflow.hpp"

namespace sofic {

struct SmithDecomposition {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
};

/// U * A * V = D with U, V unimodular and D diagonal, nonnegative, each
/// diagonal entry dividing the next (zeros last).
SmithDecomposition smith_normal_form(const IntMatrix& A);

/// Exact determinant by fraction-free elimination.
BigInt determinant(const IntMatrix& A);

/// Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dm with d1 | d2 | ... and every di >= 2.
struct AbelianGroup {
    std::vector<BigInt> invariant_factors;
    std::size_t free_rank = 0;

    bool is_trivial() const noexcept { return free_rank == 0 && invariant_factors.empty(); }
    bool is_finite() const noexcept { return free_rank == 0; }
    BigInt order() const; ///< product of the factors; 0 when infinite
    std::string to_string() const; ///< "Z^2 ⊕ Z/3", "0" when trivial

    bool operator==(const AbelianGroup&) const = default;
};

/// Cokernel of a square integer matrix.
AbelianGroup cokernel(const IntMatrix& M);

struct BowenFranks {
    AbelianGroup group; ///< cok(I - A)
    BigInt det;         ///< det(I - A)

    int det_sign() const { return det.sign(); }
};

BowenFranks bowen_franks(const IntMatrix& A);

/// Adjacency matrix of the underlying graph (edge counts, labels dropped).
IntMatrix adjacency_matrix(const Presentation& p);

/// Thrown by the flow-equivalence checks when an input lacks the required shape.
class InvariantPreconditionError : public Error {
public:
    using Error::Error;
};

bool is_essential_irreducible(const IntMatrix& A);
/// Irreducible and every row sums to one: the graph is one cycle.
bool is_single_cycle(const IntMatrix& A);

struct SftComparison {
    bool equivalent = false;
    BowenFranks first;
    BowenFranks second;
    bool first_is_cycle = false;
    bool second_is_cycle = false;
    std::string reason;
};

SftComparison sft_flow_equivalent(const IntMatrix& A, const IntMatrix& B);

/// Bipartite multigraph of preimage orbits (left) over image orbits (right).
struct MultiplicityGraph {
    struct RightVertex {
        std::size_t k = 0;                ///< size of the tuple component
        std::vector<TupleVertex> cycle;   ///< simple cycle in that component
        std::vector<std::string> labels;  ///< labels read around the cycle
        Permutation weight;
        std::size_t length = 0;
    };
    struct LeftVertex {
        std::size_t right = 0;  ///< index of the image orbit
        std::size_t length = 0; ///< preimage orbit length
        std::size_t w = 0;      ///< parallel edges to the image orbit
    };
    std::vector<RightVertex> right;
    std::vector<LeftVertex> left;

    /// Sorted list, one entry per right vertex, of the sorted weights w of its
    /// left neighbours. Orbit lengths do not enter.
    std::vector<std::vector<std::size_t>> canonical_form() const;
    std::string to_string() const; ///< "{[2]}" style rendering of canonical_form
};

/// Requires a near Markov classification of `trimmed`.
MultiplicityGraph multiplicity_graph(const Presentation& cover, const TupleGraph& trimmed,
                                     const ShiftClassReport& classification);

bool multiplicity_graph_iso(const MultiplicityGraph& g, const MultiplicityGraph& h);

struct InvariantTriple {
    BowenFranks bf;
    bool cover_is_cycle = false;
    MultiplicityGraph mugraph;
};

/// Throws InvariantPreconditionError unless the cover is near Markov.
InvariantTriple near_markov_invariant(const Presentation& cover);

struct NearMarkovComparison {
    bool equivalent = false;
    bool cover_flow_equivalent = false;
    bool mugraph_isomorphic = false;
    InvariantTriple first;
    InvariantTriple second;
};

/// `names` label the two shifts in precondition errors.
NearMarkovComparison near_markov_fe(const Presentation& cover_a, const Presentation& cover_b,
                                    const std::string& name_a = "first shift",
                                    const std::string& name_b = "second shift");

} // namespace sofic
