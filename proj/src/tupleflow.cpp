#include "sofic/tupleflow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "sofic/integer_matrix.hpp"

namespace sofic {

std::string to_string(const TupleVertex& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.entries.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(v.entries[i] + 1);
    }
    return out + "]";
}

namespace {

bool vertex_order(const TupleVertex& a, const TupleVertex& b)
{
    if (a.size() != b.size())
        return a.size() > b.size();
    return a.entries < b.entries;
}

} // namespace

TupleGraph::TupleGraph(std::vector<std::string> alphabet, std::vector<TupleVertex> vertices,
                       std::vector<TupleEdge> edges, TupleStage stage)
    : alphabet_(std::move(alphabet)), stage_(stage)
{
    std::vector<std::size_t> order(vertices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vertex_order(vertices[a], vertices[b]); });
    std::vector<std::size_t> where(vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        where[order[i]] = i;
        vertices_.push_back(vertices[order[i]]);
    }
    for (auto e : edges) {
        e.source = where[e.source];
        e.target = where[e.target];
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end());
}

std::optional<std::size_t> TupleGraph::find(const TupleVertex& v) const
{
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v, vertex_order);
    if (it != vertices_.end() && *it == v)
        return static_cast<std::size_t>(it - vertices_.begin());
    return std::nullopt;
}

std::optional<std::size_t> TupleGraph::edge_from(std::size_t vertex, SymbolIndex symbol) const
{
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].source == vertex && edges_[i].symbol == symbol)
            return i;
    return std::nullopt;
}

std::vector<std::size_t> TupleGraph::component(std::size_t k) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].size() == k)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> TupleGraph::component_edges(std::size_t k) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (vertices_[edges_[i].source].size() == k && vertices_[edges_[i].target].size() == k)
            out.push_back(i);
    return out;
}

std::set<std::size_t> TupleGraph::sizes() const
{
    std::set<std::size_t> out;
    for (const auto& v : vertices_)
        out.insert(v.size());
    return out;
}

IntMatrix TupleGraph::adjacency(std::size_t k) const
{
    const auto verts = component(k);
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < verts.size(); ++i)
        pos[verts[i]] = i;
    IntMatrix m(verts.size(), verts.size());
    for (std::size_t e : component_edges(k))
        m(pos[edges_[e].source], pos[edges_[e].target]) += 1;
    return m;
}

std::string TupleGraph::edge_string(const TupleEdge& e) const
{
    return to_string(vertices_[e.source]) + " -" + alphabet_[e.symbol] + "-> " +
           to_string(vertices_[e.target]);
}

std::vector<StateIndex> successor(const Presentation& cover, const TupleVertex& i, SymbolIndex a)
{
    std::vector<StateIndex> out;
    for (const Edge& e : cover.edges())
        if (e.symbol == a && std::binary_search(i.entries.begin(), i.entries.end(), e.source))
            out.push_back(e.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::size_t count_labeled(const Presentation& cover, const TupleVertex& i, SymbolIndex a)
{
    std::size_t n = 0;
    for (const Edge& e : cover.edges())
        if (e.symbol == a && std::binary_search(i.entries.begin(), i.entries.end(), e.source))
            ++n;
    return n;
}

} // namespace

TupleGraph build_tuple_graph(const Presentation& cover)
{
    if (cover.empty())
        return TupleGraph(cover.alphabet(), {}, {}, TupleStage::raw);
    const std::size_t m = cover.alphabet().size();

    std::vector<TupleVertex> vertices;
    std::map<TupleVertex, std::size_t> index;
    TupleVertex full;
    full.entries.resize(cover.num_states());
    std::iota(full.entries.begin(), full.entries.end(), StateIndex{0});
    index.emplace(full, 0);
    vertices.push_back(full);

    // V(m+1) = V(m) plus all nonempty f(i, a); a worklist reaches the same fixpoint
    for (std::size_t cur = 0; cur < vertices.size(); ++cur) {
        for (SymbolIndex a = 0; a < m; ++a) {
            TupleVertex j{successor(cover, vertices[cur], a)};
            if (j.entries.empty())
                continue;
            if (index.try_emplace(j, vertices.size()).second)
                vertices.push_back(std::move(j));
        }
    }

    std::vector<TupleEdge> edges;
    for (std::size_t s = 0; s < vertices.size(); ++s) {
        const TupleVertex& i = vertices[s];
        for (SymbolIndex a = 0; a < m; ++a) {
            TupleVertex j{successor(cover, i, a)};
            if (j.entries.empty())
                continue;
            if (i.size() > j.size() && j.size() == 1 && count_labeled(cover, i, a) < 2)
                continue;
            edges.push_back({s, index.at(j), a});
        }
    }
    return TupleGraph(cover.alphabet(), std::move(vertices), std::move(edges), TupleStage::raw);
}

TupleGraph trim_tuple_graph(const TupleGraph& g)
{
    const std::size_t n = g.vertices().size();
    std::vector<bool> alive(n, true);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
        for (const auto& e : g.edges())
            if (alive[e.source] && alive[e.target]) {
                ++outdeg[e.source];
                ++indeg[e.target];
            }
        for (std::size_t v = 0; v < n; ++v)
            if (alive[v] && (indeg[v] == 0 || outdeg[v] == 0)) {
                alive[v] = false;
                changed = true;
            }
    }
    std::vector<std::size_t> where(n, npos);
    std::vector<TupleVertex> vertices;
    for (std::size_t v = 0; v < n; ++v)
        if (alive[v]) {
            where[v] = vertices.size();
            vertices.push_back(g.vertices()[v]);
        }
    std::vector<TupleEdge> edges;
    for (const auto& e : g.edges())
        if (alive[e.source] && alive[e.target])
            edges.push_back({where[e.source], where[e.target], e.symbol});
    return TupleGraph(g.alphabet(), std::move(vertices), std::move(edges), TupleStage::trimmed);
}

ShiftClassReport classify(const TupleGraph& g)
{
    if (g.stage() != TupleStage::trimmed)
        throw Error("classify expects a trimmed tuple graph");
    ShiftClassReport r;
    const auto& V = g.vertices();
    auto witness = [&](const TupleEdge& e) {
        return TupleWitness{V[e.source], V[e.target], g.alphabet()[e.symbol]};
    };

    for (const auto& e : g.edges()) {
        const std::size_t from = V[e.source].size(), to = V[e.target].size();
        if (from >= 2 && to == 1 && r.is_aft) {
            r.is_aft = false;
            r.aft_witness = witness(e);
        }
        if (from != to && r.is_pet) {
            r.is_pet = false;
            r.pet_witness = witness(e);
        }
    }
    // a non-AFT witness is the more informative reason for failing PET
    if (!r.is_aft)
        r.pet_witness = r.aft_witness;

    for (std::size_t k : g.sizes())
        if (k >= 2)
            r.multicard.insert(k);
    r.multicard_is_lower_bound = !r.is_aft;

    if (!r.is_pet) {
        r.is_near_markov = false;
        r.near_markov_witness = *r.pet_witness;
        return r;
    }
    std::vector<std::size_t> indeg(V.size(), 0), outdeg(V.size(), 0);
    for (const auto& e : g.edges()) {
        ++outdeg[e.source];
        ++indeg[e.target];
    }
    for (std::size_t v = 0; v < V.size(); ++v) {
        if (V[v].size() >= 2 && (indeg[v] != 1 || outdeg[v] != 1)) {
            r.is_near_markov = false;
            r.near_markov_witness = V[v];
            break;
        }
    }
    return r;
}

} // namespace sofic
