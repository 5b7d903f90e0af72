#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sofic {

using StateIndex = std::uint32_t;
using SymbolIndex = std::uint32_t;

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Edge with its label spelled out; used to build presentations.
struct LabeledEdge {
    StateIndex source = 0;
    StateIndex target = 0;
    std::string label;
};

struct Edge {
    StateIndex source = 0;
    StateIndex target = 0;
    SymbolIndex symbol = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Edge-labeled directed multigraph presenting a sofic shift.
///
/// States keep their declaration order; the index of a state is its position
/// in that order, and every order-dependent construction (tuple vertices in
/// particular) uses these indices. The alphabet is inferred from the edges and
/// kept sorted, so symbol indices are stable for equal label sets.
class Presentation {
public:
    Presentation() = default;
    Presentation(std::vector<std::string> states, std::vector<LabeledEdge> edges);

    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return states_.empty(); }

    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }

    const std::string& state_name(StateIndex s) const { return states_.at(s); }
    const std::string& label(const Edge& e) const { return alphabet_.at(e.symbol); }

    std::optional<StateIndex> find_state(std::string_view name) const;
    std::optional<SymbolIndex> find_symbol(std::string_view name) const;

    std::vector<LabeledEdge> labeled_edges() const;

    /// Edge indices leaving each state, in edge order.
    std::vector<std::vector<std::size_t>> out_edges() const;
    std::vector<std::vector<std::size_t>> in_edges() const;

    /// next[s][a] = target of the unique a-edge leaving s, or npos.
    /// Throws if the presentation is not right-resolving.
    std::vector<std::vector<std::size_t>> transition_table() const;

    bool operator==(const Presentation& other) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> alphabet_;
    std::vector<Edge> edges_;
};

struct ValidationReport {
    bool is_essential = true;
    bool is_irreducible = true;
    bool is_right_resolving = true;
    bool is_follower_separated = true;

    /// A state without an incoming or an outgoing edge.
    std::optional<StateIndex> stranded_state;
    /// A set of states closed under successors that is proper, or that
    /// carries no edge at all (empty graph, single state without a loop).
    std::optional<std::vector<StateIndex>> closed_subset;
    /// A state with two outgoing edges carrying the same symbol.
    std::optional<std::pair<StateIndex, SymbolIndex>> label_collision;
    /// Two distinct states with identical follower sets.
    std::optional<std::pair<StateIndex, StateIndex>> twin_states;

    bool ok() const noexcept
    {
        return is_essential && is_irreducible && is_right_resolving && is_follower_separated;
    }
};

Presentation parse(std::string_view text);
Presentation parse_file(const std::string& path);

/// Canonical text: states and symbols in natural order. Uses the matrix
/// section unless some label is spelled `0`, in which case the edge list is
/// emitted instead.
std::string render(const Presentation& p);

/// Reorders states into natural order of their names (what render emits).
Presentation canonicalize(const Presentation& p);

/// Natural ordering of tokens: digit runs compare numerically.
bool natural_less(std::string_view a, std::string_view b);

ValidationReport validate(const Presentation& p);

/// Follower-set classes of the states (class ids numbered by first
/// appearance). Works for any presentation; states are equivalent iff the
/// sets of words readable from them coincide.
std::vector<std::size_t> follower_classes(const Presentation& p);

/// Strongly connected component id per state and the component count.
std::pair<std::vector<std::size_t>, std::size_t>
strong_components(std::size_t num_vertices,
                  const std::vector<std::pair<std::size_t, std::size_t>>& arcs);

Presentation trim(const Presentation& p);
Presentation induced_subgraph(const Presentation& p, const std::vector<StateIndex>& keep);

Presentation symbol_expand(const Presentation& p, std::string_view symbol);
Presentation reverse(const Presentation& p);

/// Name of the expansion symbol for `symbol`, avoiding names in `alphabet`.
std::string expansion_symbol(std::string_view symbol, const std::vector<std::string>& alphabet);

} // namespace sofic
