#pragma once

#include <random>
#include <string>
#include <vector>

#include "sofic/integer_matrix.hpp"
#include "sofic/presentation.hpp"

namespace sofic::testing {

/// Random right-resolving presentation: every (state, symbol) slot carries an
/// edge with probability `density`.
inline Presentation random_right_resolving(std::mt19937_64& rng, std::size_t states,
                                          std::size_t symbols, double density)
{
    std::vector<std::string> names;
    for (std::size_t s = 0; s < states; ++s)
        names.push_back("s" + std::to_string(s + 1));
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<std::size_t> target(0, states - 1);
    std::vector<LabeledEdge> edges;
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t a = 0; a < symbols; ++a)
            if (coin(rng))
                edges.push_back({static_cast<StateIndex>(s), static_cast<StateIndex>(target(rng)),
                                 std::string(1, static_cast<char>('a' + a))});
    return Presentation(names, edges);
}

/// Random valid Fischer cover (irreducible, essential, right-resolving,
/// follower-separated) with at most `max_states` states and `max_symbols`
/// symbols, by rejection sampling.
inline Presentation random_cover(std::mt19937_64& rng, std::size_t max_states = 6,
                                 std::size_t max_symbols = 4)
{
    std::uniform_int_distribution<std::size_t> n_dist(1, max_states), m_dist(1, max_symbols);
    std::uniform_real_distribution<double> density(0.3, 0.9);
    for (;;) {
        const std::size_t n = n_dist(rng), m = m_dist(rng);
        auto p = random_right_resolving(rng, n, m, density(rng));
        if (!p.empty() && p.num_edges() > 0 && validate(p).ok())
            return p;
    }
}

/// Random square matrix with entries in [lo, hi].
inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo,
                               int hi)
{
    std::uniform_int_distribution<int> entry(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = entry(rng);
    return m;
}

/// Presentation of the edge shift of a nonnegative matrix, every edge with
/// its own label.
inline Presentation edge_shift(const IntMatrix& A)
{
    std::vector<std::string> names;
    for (std::size_t s = 0; s < A.rows(); ++s)
        names.push_back("v" + std::to_string(s + 1));
    std::vector<LabeledEdge> edges;
    std::size_t label = 0;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            for (int c = 0; c < A(i, j).convert_to<int>(); ++c)
                edges.push_back({static_cast<StateIndex>(i), static_cast<StateIndex>(j),
                                 "e" + std::to_string(++label)});
    return Presentation(names, edges);
}

} // namespace sofic::testing
