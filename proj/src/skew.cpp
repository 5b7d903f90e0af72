#include "sofic/skew.hpp"

#include <algorithm>
#include <map>

namespace sofic {

Permutation Permutation::identity(std::size_t k)
{
    Permutation p;
    p.images_.resize(k);
    for (std::size_t t = 0; t < k; ++t)
        p.images_[t] = static_cast<std::uint32_t>(t);
    return p;
}

Permutation Permutation::from_one_line(const std::vector<std::size_t>& images)
{
    Permutation p;
    std::vector<bool> hit(images.size(), false);
    for (std::size_t v : images) {
        if (v < 1 || v > images.size() || hit[v - 1])
            throw Error("not a permutation");
        hit[v - 1] = true;
        p.images_.push_back(static_cast<std::uint32_t>(v - 1));
    }
    return p;
}

Permutation compose(const Permutation& outer, const Permutation& inner)
{
    if (outer.degree() != inner.degree())
        throw Error("permutation degree mismatch");
    Permutation p;
    p.images_.resize(inner.degree());
    for (std::size_t t = 0; t < inner.degree(); ++t)
        p.images_[t] = outer.images_[inner.images_[t]];
    return p;
}

Permutation Permutation::inverse() const
{
    Permutation p;
    p.images_.resize(images_.size());
    for (std::size_t t = 0; t < images_.size(); ++t)
        p.images_[images_[t]] = static_cast<std::uint32_t>(t);
    return p;
}

bool Permutation::is_identity() const noexcept
{
    for (std::size_t t = 0; t < images_.size(); ++t)
        if (images_[t] != t)
            return false;
    return true;
}

std::vector<std::vector<std::size_t>> Permutation::cycles() const
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t s = 0; s < images_.size(); ++s) {
        if (seen[s])
            continue;
        std::vector<std::size_t> cyc;
        for (std::size_t t = s; !seen[t]; t = images_[t]) {
            seen[t] = true;
            cyc.push_back(t);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

std::vector<std::size_t> Permutation::cycle_type() const
{
    std::vector<std::size_t> out;
    for (const auto& c : cycles())
        out.push_back(c.size());
    std::sort(out.begin(), out.end());
    return out;
}

std::string Permutation::to_cycle_string() const
{
    std::string out;
    for (const auto& c : cycles()) {
        if (c.size() < 2)
            continue;
        out += '(';
        for (std::size_t i = 0; i < c.size(); ++i)
            out += (i ? " " : "") + std::to_string(c[i] + 1);
        out += ')';
    }
    return out.empty() ? "id" : out;
}

std::vector<std::size_t> Permutation::one_line() const
{
    std::vector<std::size_t> out;
    for (auto v : images_)
        out.push_back(v + 1);
    return out;
}

void GroupRingMatrix::add(std::size_t i, std::size_t j, Permutation g)
{
    if (g.degree() != k_)
        throw Error("permutation degree does not match matrix");
    auto& cell = cells_.at(i * dim_ + j);
    cell.insert(std::upper_bound(cell.begin(), cell.end(), g), std::move(g));
}

std::string GroupRingMatrix::cell_string(std::size_t i, std::size_t j) const
{
    const auto& cell = at(i, j);
    if (cell.empty())
        return "0";
    std::string out;
    for (std::size_t t = 0; t < cell.size(); ++t)
        out += (t ? " + " : "") + cell[t].to_cycle_string();
    return out;
}

Permutation skew_permutation(const Presentation& cover, const TupleVertex& from,
                             const TupleVertex& to, SymbolIndex symbol)
{
    const std::size_t k = from.size();
    if (to.size() != k)
        throw Error("skew permutation needs tuples of equal size");
    std::vector<std::size_t> images(k, 0);
    std::vector<bool> hit(k, false);
    for (std::size_t t = 0; t < k; ++t) {
        bool found = false;
        for (const Edge& e : cover.edges()) {
            if (e.source != from.entries[t] || e.symbol != symbol)
                continue;
            auto it = std::find(to.entries.begin(), to.entries.end(), e.target);
            if (it == to.entries.end())
                continue;
            const auto pos = static_cast<std::size_t>(it - to.entries.begin());
            if (found || hit[pos])
                throw Error("edge " + to_string(from) + " -> " + to_string(to) +
                            " does not induce a bijection");
            images[t] = pos + 1;
            hit[pos] = true;
            found = true;
        }
        if (!found)
            throw Error("no '" + cover.alphabet().at(symbol) + "' edge from cover state " +
                        std::to_string(from.entries[t] + 1) + " into " + to_string(to));
    }
    return Permutation::from_one_line(images);
}

PointExtension point_extension(const Presentation& cover, const TupleGraph& g, std::size_t k)
{
    PointExtension ext;
    ext.k = k;
    ext.alphabet = g.alphabet();
    const auto verts = g.component(k);
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        pos[verts[i]] = i;
        ext.vertices.push_back(g.vertices()[verts[i]]);
    }
    for (std::size_t ei : g.component_edges(k)) {
        const TupleEdge& e = g.edges()[ei];
        ext.edges.push_back({pos.at(e.source), pos.at(e.target), e.symbol});
        ext.skew.push_back(skew_permutation(cover, g.vertices()[e.source], g.vertices()[e.target],
                                            e.symbol));
    }
    return ext;
}

GroupRingMatrix build_Bk(const PointExtension& ext)
{
    GroupRingMatrix m(ext.k, ext.vertices.size());
    for (std::size_t i = 0; i < ext.edges.size(); ++i)
        m.add(ext.edges[i].source, ext.edges[i].target, ext.skew[i]);
    return m;
}

GroupRingMatrix build_Bk(const Presentation& cover, const TupleGraph& g, std::size_t k)
{
    if (k < 2 || g.component(k).empty())
        throw Error("k = " + std::to_string(k) + " is not in the multiplicity set");
    return build_Bk(point_extension(cover, g, k));
}

IntMatrix augmentation(const GroupRingMatrix& m)
{
    IntMatrix out(m.dim(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            out(i, j) = m.at(i, j).size();
    return out;
}

GroupRingMatrix opp(const GroupRingMatrix& m)
{
    GroupRingMatrix out(m.degree(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            for (const auto& g : m.at(i, j))
                out.add(i, j, g.inverse());
    return out;
}

Permutation cycle_weight(std::span<const Permutation> path_weights)
{
    if (path_weights.empty())
        throw Error("cycle weight of an empty path");
    Permutation acc = path_weights.front();
    for (std::size_t i = 1; i < path_weights.size(); ++i)
        acc = compose(path_weights[i], acc);
    return acc;
}

std::vector<std::size_t> lifted_orbit_lengths(std::size_t base_length, const Permutation& weight)
{
    std::vector<std::size_t> out = weight.cycle_type();
    for (auto& l : out)
        l *= base_length;
    return out;
}

std::vector<StateIndex> section_states(const std::vector<TupleVertex>& vertex_path,
                                       std::span<const Permutation> path_weights, std::size_t j)
{
    if (vertex_path.size() != path_weights.size() + 1)
        throw Error("section path length mismatch");
    std::vector<StateIndex> out;
    std::size_t t = j;
    out.push_back(vertex_path.front().entries.at(t));
    for (std::size_t i = 0; i < path_weights.size(); ++i) {
        t = path_weights[i](t);
        out.push_back(vertex_path[i + 1].entries.at(t));
    }
    return out;
}

} // namespace sofic
