#include "sofic/invariants.hpp"

#include <algorithm>
#include <optional>

namespace sofic {

namespace {

using boost::multiprecision::abs;

// Position of a least-magnitude nonzero entry in the block [t.., t..].
std::optional<std::pair<std::size_t, std::size_t>> least_entry(const IntMatrix& D, std::size_t t)
{
    std::optional<std::pair<std::size_t, std::size_t>> best;
    BigInt best_abs;
    for (std::size_t i = t; i < D.rows(); ++i)
        for (std::size_t j = t; j < D.cols(); ++j) {
            if (D(i, j) == 0)
                continue;
            BigInt a = abs(D(i, j));
            if (!best || a < best_abs) {
                best = {i, j};
                best_abs = a;
                if (best_abs == 1)
                    return best;
            }
        }
    return best;
}

} // namespace

SmithDecomposition smith_normal_form(const IntMatrix& A)
{
    SmithDecomposition s{IntMatrix::identity(A.rows()), A, IntMatrix::identity(A.cols())};
    IntMatrix& D = s.D;
    const std::size_t r = std::min(A.rows(), A.cols());

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        D.swap_rows(a, b);
        s.U.swap_rows(a, b);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        D.swap_cols(a, b);
        s.V.swap_cols(a, b);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const BigInt& f) {
        D.add_row(dst, src, f);
        s.U.add_row(dst, src, f);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const BigInt& f) {
        D.add_col(dst, src, f);
        s.V.add_col(dst, src, f);
    };

    for (std::size_t t = 0; t < r; ++t) {
        auto pivot = least_entry(D, t);
        if (!pivot)
            break;
        swap_rows(t, pivot->first);
        swap_cols(t, pivot->second);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < D.rows(); ++i) {
                if (D(i, t) == 0)
                    continue;
                add_row(i, t, -(D(i, t) / D(t, t)));
                if (D(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < D.cols(); ++j) {
                if (D(t, j) == 0)
                    continue;
                add_col(j, t, -(D(t, j) / D(t, t)));
                if (D(t, j) != 0)
                    clean = false;
            }
            if (!clean) {
                // a remainder smaller than the pivot is left; make it the pivot
                std::size_t bi = t, bj = t;
                BigInt best = abs(D(t, t));
                for (std::size_t i = t + 1; i < D.rows(); ++i)
                    if (D(i, t) != 0 && abs(D(i, t)) < best) {
                        best = abs(D(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < D.cols(); ++j)
                    if (D(t, j) != 0 && abs(D(t, j)) < best) {
                        best = abs(D(t, j));
                        bi = t;
                        bj = j;
                    }
                swap_rows(t, bi);
                swap_cols(t, bj);
                continue;
            }
            std::optional<std::size_t> bad_row;
            for (std::size_t i = t + 1; i < D.rows() && !bad_row; ++i)
                for (std::size_t j = t + 1; j < D.cols(); ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
            if (!bad_row)
                break;
            add_row(t, *bad_row, 1);
        }
        if (D(t, t) < 0) {
            D.negate_row(t);
            s.U.negate_row(t);
        }
    }
    return s;
}

BigInt determinant(const IntMatrix& A)
{
    if (!A.square())
        throw Error("determinant of a non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0)
        return 1;
    IntMatrix M = A;
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && M(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            M.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

BigInt AbelianGroup::order() const
{
    if (free_rank > 0)
        return 0;
    BigInt o = 1;
    for (const auto& d : invariant_factors)
        o *= d;
    return o;
}

std::string AbelianGroup::to_string() const
{
    if (is_trivial())
        return "0";
    std::vector<std::string> parts;
    if (free_rank == 1)
        parts.push_back("Z");
    else if (free_rank > 1)
        parts.push_back("Z^" + std::to_string(free_rank));
    for (const auto& d : invariant_factors)
        parts.push_back("Z/" + d.str());
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? " ⊕ " : "") + parts[i];
    return out;
}

AbelianGroup cokernel(const IntMatrix& M)
{
    const auto snf = smith_normal_form(M);
    AbelianGroup g;
    const std::size_t r = std::min(M.rows(), M.cols());
    for (std::size_t i = 0; i < r; ++i) {
        const BigInt& d = snf.D(i, i);
        if (d == 0)
            ++g.free_rank;
        else if (d != 1)
            g.invariant_factors.push_back(d);
    }
    g.free_rank += M.rows() - r;
    return g;
}

BowenFranks bowen_franks(const IntMatrix& A)
{
    if (!A.square())
        throw Error("Bowen-Franks group of a non-square matrix");
    const IntMatrix M = IntMatrix::identity(A.rows()) - A;
    return {cokernel(M), determinant(M)};
}

IntMatrix adjacency_matrix(const Presentation& p)
{
    IntMatrix A(p.num_states(), p.num_states());
    for (const Edge& e : p.edges())
        A(e.source, e.target) += 1;
    return A;
}

bool is_essential_irreducible(const IntMatrix& A)
{
    if (!A.square() || A.rows() == 0)
        return false;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (A(i, j) < 0)
                return false;
            if (A(i, j) > 0)
                arcs.emplace_back(i, j);
        }
    if (arcs.empty())
        return false;
    return strong_components(A.rows(), arcs).second == 1;
}

bool is_single_cycle(const IntMatrix& A)
{
    if (!is_essential_irreducible(A))
        return false;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        BigInt row = 0;
        for (std::size_t j = 0; j < A.cols(); ++j)
            row += A(i, j);
        if (row != 1)
            return false;
    }
    return true;
}

SftComparison sft_flow_equivalent(const IntMatrix& A, const IntMatrix& B)
{
    if (!is_essential_irreducible(A))
        throw InvariantPreconditionError("first matrix is not essential and irreducible");
    if (!is_essential_irreducible(B))
        throw InvariantPreconditionError("second matrix is not essential and irreducible");
    SftComparison c;
    c.first = bowen_franks(A);
    c.second = bowen_franks(B);
    c.first_is_cycle = is_single_cycle(A);
    c.second_is_cycle = is_single_cycle(B);
    if (c.first_is_cycle && c.second_is_cycle) {
        c.equivalent = true;
        c.reason = "both graphs are single cycles";
    } else if (c.first_is_cycle != c.second_is_cycle) {
        c.equivalent = false;
        c.reason = "exactly one graph is a single cycle";
    } else if (c.first.group != c.second.group) {
        c.equivalent = false;
        c.reason = "Bowen-Franks groups differ";
    } else if (c.first.det_sign() != c.second.det_sign()) {
        c.equivalent = false;
        c.reason = "signs of det(I - A) differ";
    } else {
        c.equivalent = true;
        c.reason = "Bowen-Franks groups and determinant signs agree";
    }
    return c;
}

std::vector<std::vector<std::size_t>> MultiplicityGraph::canonical_form() const
{
    std::vector<std::vector<std::size_t>> out(right.size());
    for (const auto& l : left)
        out.at(l.right).push_back(l.w);
    for (auto& ws : out)
        std::sort(ws.begin(), ws.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::string MultiplicityGraph::to_string() const
{
    std::string out = "{";
    const auto form = canonical_form();
    for (std::size_t i = 0; i < form.size(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < form[i].size(); ++j)
            out += (j ? " " : "") + std::to_string(form[i][j]);
        out += ']';
    }
    return out + "}";
}

MultiplicityGraph multiplicity_graph(const Presentation& cover, const TupleGraph& g,
                                     const ShiftClassReport& classification)
{
    if (!classification.is_near_markov)
        throw InvariantPreconditionError("cover is not near Markov");
    MultiplicityGraph mg;
    for (std::size_t k : classification.multicard) {
        const auto verts = g.component(k);
        std::vector<std::size_t> out_edge(g.vertices().size(), npos);
        for (std::size_t e : g.component_edges(k))
            out_edge[g.edges()[e].source] = e;
        std::vector<bool> seen(g.vertices().size(), false);
        for (std::size_t start : verts) {
            if (seen[start])
                continue;
            MultiplicityGraph::RightVertex rv;
            rv.k = k;
            std::vector<Permutation> weights;
            for (std::size_t v = start; !seen[v];) {
                seen[v] = true;
                const std::size_t e = out_edge[v];
                if (e == npos)
                    throw Error("tuple component is not a union of cycles");
                const TupleEdge& te = g.edges()[e];
                rv.cycle.push_back(g.vertices()[v]);
                rv.labels.push_back(g.alphabet()[te.symbol]);
                weights.push_back(skew_permutation(cover, g.vertices()[v],
                                                   g.vertices()[te.target], te.symbol));
                v = te.target;
            }
            rv.length = rv.cycle.size();
            rv.weight = cycle_weight(weights);
            const std::size_t idx = mg.right.size();
            for (std::size_t len : rv.weight.cycle_type())
                mg.left.push_back({idx, rv.length * len, len});
            mg.right.push_back(std::move(rv));
        }
    }
    return mg;
}

bool multiplicity_graph_iso(const MultiplicityGraph& g, const MultiplicityGraph& h)
{
    return g.canonical_form() == h.canonical_form();
}

InvariantTriple near_markov_invariant(const Presentation& cover)
{
    const TupleGraph g = trim_tuple_graph(build_tuple_graph(cover));
    const ShiftClassReport cls = classify(g);
    if (!cls.is_near_markov)
        throw InvariantPreconditionError("cover is not near Markov");
    const IntMatrix A = adjacency_matrix(cover);
    return {bowen_franks(A), is_single_cycle(A), multiplicity_graph(cover, g, cls)};
}

NearMarkovComparison near_markov_fe(const Presentation& cover_a, const Presentation& cover_b,
                                    const std::string& name_a, const std::string& name_b)
{
    NearMarkovComparison c;
    auto triple = [](const Presentation& p, const std::string& name) {
        try {
            return near_markov_invariant(p);
        } catch (const InvariantPreconditionError& e) {
            throw InvariantPreconditionError(name + ": " + e.what());
        }
    };
    c.first = triple(cover_a, name_a);
    c.second = triple(cover_b, name_b);
    c.cover_flow_equivalent =
        sft_flow_equivalent(adjacency_matrix(cover_a), adjacency_matrix(cover_b)).equivalent;
    c.mugraph_isomorphic = multiplicity_graph_iso(c.first.mugraph, c.second.mugraph);
    c.equivalent = c.cover_flow_equivalent && c.mugraph_isomorphic;
    return c;
}

} // namespace sofic
