#include "sofic/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "detail/subset_automaton.hpp"

namespace sofic {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column)
{
}

Presentation::Presentation(std::vector<std::string> states, std::vector<LabeledEdge> edges)
    : states_(std::move(states))
{
    std::set<std::string> seen;
    for (const auto& s : states_) {
        if (s.empty())
            throw Error("empty state name");
        if (!seen.insert(s).second)
            throw Error("duplicate state name '" + s + "'");
    }
    std::set<std::string> symbols;
    for (const auto& e : edges) {
        if (e.source >= states_.size() || e.target >= states_.size())
            throw Error("edge endpoint out of range");
        if (e.label.empty())
            throw Error("empty edge label");
        symbols.insert(e.label);
    }
    alphabet_.assign(symbols.begin(), symbols.end());
    std::sort(alphabet_.begin(), alphabet_.end(),
              [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    edges_.reserve(edges.size());
    for (const auto& e : edges)
        edges_.push_back({e.source, e.target, *find_symbol(e.label)});
}

std::optional<StateIndex> Presentation::find_state(std::string_view name) const
{
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name)
            return static_cast<StateIndex>(i);
    return std::nullopt;
}

std::optional<SymbolIndex> Presentation::find_symbol(std::string_view name) const
{
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i] == name)
            return static_cast<SymbolIndex>(i);
    return std::nullopt;
}

std::vector<LabeledEdge> Presentation::labeled_edges() const
{
    std::vector<LabeledEdge> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_)
        out.push_back({e.source, e.target, alphabet_[e.symbol]});
    return out;
}

std::vector<std::vector<std::size_t>> Presentation::out_edges() const
{
    std::vector<std::vector<std::size_t>> out(states_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i)
        out[edges_[i].source].push_back(i);
    return out;
}

std::vector<std::vector<std::size_t>> Presentation::in_edges() const
{
    std::vector<std::vector<std::size_t>> in(states_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i)
        in[edges_[i].target].push_back(i);
    return in;
}

std::vector<std::vector<std::size_t>> Presentation::transition_table() const
{
    std::vector<std::vector<std::size_t>> next(states_.size(),
                                               std::vector<std::size_t>(alphabet_.size(), npos));
    for (const Edge& e : edges_) {
        auto& slot = next[e.source][e.symbol];
        if (slot != npos)
            throw Error("presentation is not right-resolving at state '" + states_[e.source] +
                        "' (symbol '" + alphabet_[e.symbol] + "')");
        slot = e.target;
    }
    return next;
}

bool Presentation::operator==(const Presentation& other) const
{
    if (states_ != other.states_)
        return false;
    auto mine = labeled_edges();
    auto theirs = other.labeled_edges();
    auto key = [](const LabeledEdge& e) { return std::tie(e.source, e.target, e.label); };
    auto less = [&](const LabeledEdge& a, const LabeledEdge& b) { return key(a) < key(b); };
    std::sort(mine.begin(), mine.end(), less);
    std::sort(theirs.begin(), theirs.end(), less);
    return std::equal(mine.begin(), mine.end(), theirs.begin(), theirs.end(),
                      [&](const LabeledEdge& a, const LabeledEdge& b) { return key(a) == key(b); });
}

bool natural_less(std::string_view a, std::string_view b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie])))
                ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je])))
                ++je;
            auto ra = a.substr(i, ie - i);
            auto rb = b.substr(j, je - j);
            while (ra.size() > 1 && ra.front() == '0')
                ra.remove_prefix(1);
            while (rb.size() > 1 && rb.front() == '0')
                rb.remove_prefix(1);
            if (ra.size() != rb.size())
                return ra.size() < rb.size();
            if (ra != rb)
                return ra < rb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j])
                return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j))
        return (a.size() - i) < (b.size() - j);
    return a < b; // tie-break leading zeros
}

// ---------------------------------------------------------------------------
// parsing

namespace {

bool is_symbol_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*';
}

bool is_state_char(char c)
{
    return !std::isspace(static_cast<unsigned char>(c)) && c != '|' && c != '#';
}

struct Line {
    std::size_t number;
    std::string text;
};

std::size_t first_non_space(const std::string& s, std::size_t from = 0)
{
    while (from < s.size() && std::isspace(static_cast<unsigned char>(s[from])))
        ++from;
    return from;
}

// tokens of a whitespace separated list, with 1-based columns
std::vector<std::pair<std::string, std::size_t>> split_tokens(const std::string& s, std::size_t from)
{
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t i = from;
    while ((i = first_non_space(s, i)) < s.size()) {
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
            ++j;
        out.emplace_back(s.substr(i, j - i), i + 1);
        i = j;
    }
    return out;
}

void parse_entry(const Line& line, std::size_t begin, std::size_t end, StateIndex row,
                 StateIndex col, std::vector<LabeledEdge>& edges)
{
    const std::string& s = line.text;
    std::size_t i = first_non_space(s, begin);
    std::size_t last = end;
    while (last > i && std::isspace(static_cast<unsigned char>(s[last - 1])))
        --last;
    if (i >= last)
        throw ParseError(line.number, begin + 1, "empty matrix entry");
    if (s.substr(i, last - i) == "0")
        return;

    std::vector<std::string> terms;
    for (;;) {
        i = first_non_space(s, i);
        std::size_t j = i;
        while (j < last && is_symbol_char(s[j]))
            ++j;
        if (j == i)
            throw ParseError(line.number, i + 1, "expected a symbol");
        std::string sym = s.substr(i, j - i);
        if (sym == "0")
            throw ParseError(line.number, i + 1, "symbol '0' cannot be used as a label inside a sum");
        terms.push_back(std::move(sym));
        i = first_non_space(s, j);
        if (i >= last)
            break;
        if (s[i] != '+')
            throw ParseError(line.number, i + 1, std::string("unexpected character '") + s[i] + "'");
        ++i;
    }
    for (auto& t : terms)
        edges.push_back({row, col, std::move(t)});
}

} // namespace

Presentation parse(std::string_view text)
{
    std::vector<Line> lines;
    {
        std::istringstream in{std::string(text)};
        std::string raw;
        std::size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (!raw.empty() && raw.back() == '\r')
                raw.pop_back();
            const std::size_t k = first_non_space(raw);
            if (k == raw.size() || raw[k] == '#')
                continue;
            lines.push_back({number, raw});
        }
    }

    std::size_t pos = 0;
    auto header = [&](std::string_view key) -> std::optional<std::size_t> {
        if (pos >= lines.size())
            return std::nullopt;
        const std::string& s = lines[pos].text;
        const std::size_t k = first_non_space(s);
        if (s.compare(k, key.size(), key) != 0)
            return std::nullopt;
        return k + key.size();
    };

    auto after = header("states:");
    if (!after)
        throw ParseError(pos < lines.size() ? lines[pos].number : 1, 1, "expected 'states:'");
    std::vector<std::string> states;
    std::set<std::string> seen;
    for (auto& [tok, col] : split_tokens(lines[pos].text, *after)) {
        if (!std::all_of(tok.begin(), tok.end(), is_state_char))
            throw ParseError(lines[pos].number, col, "invalid state name '" + tok + "'");
        if (!seen.insert(tok).second)
            throw ParseError(lines[pos].number, col, "duplicate state name '" + tok + "'");
        states.push_back(tok);
    }
    if (states.empty())
        throw ParseError(lines[pos].number, *after + 1, "no states declared");
    const std::size_t last_header_line = lines[pos].number;
    ++pos;

    std::vector<LabeledEdge> edges;
    const auto n = static_cast<StateIndex>(states.size());
    if (auto m = header("matrix:")) {
        if (first_non_space(lines[pos].text, *m) != lines[pos].text.size())
            throw ParseError(lines[pos].number, *m + 1, "unexpected text after 'matrix:'");
        ++pos;
        for (StateIndex row = 0; row < n; ++row) {
            if (pos >= lines.size())
                throw ParseError(lines.empty() ? 1 : lines.back().number + 1, 1,
                                 "matrix has fewer than " + std::to_string(n) + " rows");
            const Line& line = lines[pos++];
            std::size_t begin = 0;
            StateIndex col = 0;
            for (;;) {
                std::size_t bar = line.text.find('|', begin);
                const std::size_t end = bar == std::string::npos ? line.text.size() : bar;
                if (col >= n)
                    throw ParseError(line.number, begin + 1, "too many entries in row");
                parse_entry(line, begin, end, row, col, edges);
                ++col;
                if (bar == std::string::npos)
                    break;
                begin = bar + 1;
            }
            if (col != n)
                throw ParseError(line.number, line.text.size() + 1,
                                 "row has " + std::to_string(col) + " entries, expected " +
                                     std::to_string(n));
        }
    } else if (auto e = header("edges:")) {
        if (first_non_space(lines[pos].text, *e) != lines[pos].text.size())
            throw ParseError(lines[pos].number, *e + 1, "unexpected text after 'edges:'");
        ++pos;
        auto lookup = [&](const std::string& name, const Line& line, std::size_t col) {
            for (StateIndex i = 0; i < n; ++i)
                if (states[i] == name)
                    return i;
            throw ParseError(line.number, col, "undeclared state '" + name + "'");
        };
        for (; pos < lines.size(); ++pos) {
            const Line& line = lines[pos];
            auto toks = split_tokens(line.text, 0);
            if (toks.size() != 3)
                throw ParseError(line.number, 1, "expected 'source target label'");
            const StateIndex src = lookup(toks[0].first, line, toks[0].second);
            const StateIndex dst = lookup(toks[1].first, line, toks[1].second);
            const auto& sym = toks[2].first;
            if (!std::all_of(sym.begin(), sym.end(), is_symbol_char))
                throw ParseError(line.number, toks[2].second, "invalid symbol '" + sym + "'");
            edges.push_back({src, dst, sym});
        }
    } else {
        throw ParseError(pos < lines.size() ? lines[pos].number : last_header_line + 1, 1,
                         "expected 'matrix:' or 'edges:'");
    }
    if (pos < lines.size())
        throw ParseError(lines[pos].number, 1, "unexpected trailing content");
    return Presentation(std::move(states), std::move(edges));
}

Presentation parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Presentation canonicalize(const Presentation& p)
{
    std::vector<StateIndex> order(p.num_states());
    std::iota(order.begin(), order.end(), StateIndex{0});
    std::sort(order.begin(), order.end(), [&](StateIndex a, StateIndex b) {
        return natural_less(p.state_name(a), p.state_name(b));
    });
    std::vector<StateIndex> where(p.num_states());
    std::vector<std::string> names;
    for (std::size_t i = 0; i < order.size(); ++i) {
        where[order[i]] = static_cast<StateIndex>(i);
        names.push_back(p.state_name(order[i]));
    }
    std::vector<LabeledEdge> edges;
    for (const auto& e : p.labeled_edges())
        edges.push_back({where[e.source], where[e.target], e.label});
    return Presentation(std::move(names), std::move(edges));
}

std::string render(const Presentation& input)
{
    const Presentation p = canonicalize(input);
    std::ostringstream out;
    out << "states:";
    for (const auto& s : p.states())
        out << ' ' << s;
    out << '\n';

    // alphabet is already in natural order, so sorting by symbol index is enough
    std::vector<Edge> edges = p.edges();
    std::sort(edges.begin(), edges.end());

    if (p.find_symbol("0")) {
        out << "edges:\n";
        for (const Edge& e : edges)
            out << p.state_name(e.source) << ' ' << p.state_name(e.target) << ' ' << p.label(e)
                << '\n';
        return out.str();
    }

    const std::size_t n = p.num_states();
    std::vector<std::vector<std::string>> cells(n, std::vector<std::string>(n));
    for (const Edge& e : edges) {
        auto& c = cells[e.source][e.target];
        if (!c.empty())
            c += '+';
        c += p.label(e);
    }
    std::vector<std::size_t> width(n, 1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            width[j] = std::max(width[j], cells[i][j].size());
    out << "matrix:\n";
    for (std::size_t i = 0; i < n; ++i) {
        std::string row;
        for (std::size_t j = 0; j < n; ++j) {
            std::string c = cells[i][j].empty() ? "0" : cells[i][j];
            if (j + 1 < n)
                c.resize(width[j], ' ');
            row += c;
            if (j + 1 < n)
                row += " | ";
        }
        out << row << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// structure

std::pair<std::vector<std::size_t>, std::size_t>
strong_components(std::size_t num_vertices,
                  const std::vector<std::pair<std::size_t, std::size_t>>& arcs)
{
    std::vector<std::vector<std::size_t>> adj(num_vertices);
    for (auto [u, v] : arcs)
        adj[u].push_back(v);

    // iterative Tarjan
    std::vector<std::size_t> index(num_vertices, npos), low(num_vertices, 0),
        comp(num_vertices, npos);
    std::vector<bool> on_stack(num_vertices, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, components = 0;

    for (std::size_t root = 0; root < num_vertices; ++root) {
        if (index[root] != npos)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, it] = call.back();
            if (it < adj[v].size()) {
                const std::size_t w = adj[v][it++];
                if (index[w] == npos) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                const std::size_t done = v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().first] = std::min(low[call.back().first], low[done]);
                if (low[done] == index[done]) {
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = components;
                    } while (w != done);
                    ++components;
                }
            }
        }
    }
    return {comp, components};
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> arcs_of(const Presentation& p)
{
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (const Edge& e : p.edges())
        arcs.emplace_back(e.source, e.target);
    return arcs;
}

} // namespace

std::vector<std::size_t> follower_classes(const Presentation& p)
{
    std::vector<detail::StateSet> roots;
    for (StateIndex s = 0; s < p.num_states(); ++s)
        roots.push_back({s});
    const auto automaton = detail::determinize(p, roots, static_cast<std::size_t>(-1));
    const auto cls = detail::refine(automaton.next, p.alphabet().size());
    // roots are interned first, in order, unless two roots coincide (they cannot)
    std::map<std::size_t, std::size_t> renumber;
    std::vector<std::size_t> out(p.num_states());
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        auto [it, _] = renumber.try_emplace(cls[s], renumber.size());
        out[s] = it->second;
    }
    return out;
}

ValidationReport validate(const Presentation& p)
{
    ValidationReport r;
    const std::size_t n = p.num_states();

    std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
    for (const Edge& e : p.edges()) {
        ++outdeg[e.source];
        ++indeg[e.target];
    }
    for (StateIndex s = 0; s < n; ++s) {
        if (indeg[s] == 0 || outdeg[s] == 0) {
            r.is_essential = false;
            r.stranded_state = s;
            break;
        }
    }

    auto [comp, count] = strong_components(n, arcs_of(p));
    if (n == 0 || p.num_edges() == 0) {
        r.is_irreducible = false;
        std::vector<StateIndex> all(n);
        std::iota(all.begin(), all.end(), StateIndex{0});
        r.closed_subset = all;
    } else if (count > 1) {
        r.is_irreducible = false;
        // a sink component of the condensation is closed under successors
        std::vector<bool> has_exit(count, false);
        for (const Edge& e : p.edges())
            if (comp[e.source] != comp[e.target])
                has_exit[comp[e.source]] = true;
        std::size_t sink = 0;
        while (has_exit[sink])
            ++sink;
        std::vector<StateIndex> closed;
        for (StateIndex s = 0; s < n; ++s)
            if (comp[s] == sink)
                closed.push_back(s);
        r.closed_subset = closed;
    }

    std::vector<std::vector<bool>> used(n, std::vector<bool>(p.alphabet().size(), false));
    for (const Edge& e : p.edges()) {
        if (used[e.source][e.symbol]) {
            r.is_right_resolving = false;
            r.label_collision = std::make_pair(e.source, e.symbol);
            break;
        }
        used[e.source][e.symbol] = true;
    }

    const auto cls = follower_classes(p);
    std::map<std::size_t, StateIndex> first;
    for (StateIndex s = 0; s < n; ++s) {
        auto [it, inserted] = first.try_emplace(cls[s], s);
        if (!inserted) {
            r.is_follower_separated = false;
            r.twin_states = std::make_pair(it->second, s);
            break;
        }
    }
    return r;
}

Presentation induced_subgraph(const Presentation& p, const std::vector<StateIndex>& keep)
{
    std::vector<std::size_t> where(p.num_states(), npos);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        where[keep[i]] = i;
        names.push_back(p.state_name(keep[i]));
    }
    std::vector<LabeledEdge> edges;
    for (const Edge& e : p.edges())
        if (where[e.source] != npos && where[e.target] != npos)
            edges.push_back({static_cast<StateIndex>(where[e.source]),
                             static_cast<StateIndex>(where[e.target]), p.label(e)});
    return Presentation(std::move(names), std::move(edges));
}

Presentation trim(const Presentation& p)
{
    const std::size_t n = p.num_states();
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
        for (const Edge& e : p.edges()) {
            if (alive[e.source] && alive[e.target]) {
                ++outdeg[e.source];
                ++indeg[e.target];
            }
        }
        for (StateIndex s = 0; s < n; ++s) {
            if (alive[s] && (indeg[s] == 0 || outdeg[s] == 0)) {
                alive[s] = false;
                changed = true;
            }
        }
    }
    std::vector<StateIndex> keep;
    for (StateIndex s = 0; s < n; ++s)
        if (alive[s])
            keep.push_back(s);
    return induced_subgraph(p, keep);
}

std::string expansion_symbol(std::string_view symbol, const std::vector<std::string>& alphabet)
{
    std::string name = "*" + std::string(symbol);
    while (std::find(alphabet.begin(), alphabet.end(), name) != alphabet.end())
        name.insert(name.begin(), '*');
    return name;
}

Presentation symbol_expand(const Presentation& p, std::string_view symbol)
{
    const auto a = p.find_symbol(symbol);
    if (!a)
        throw Error("symbol '" + std::string(symbol) + "' is not in the alphabet");
    if (!validate(p).is_right_resolving)
        throw Error("symbol expansion requires a right-resolving presentation");

    const std::string star = expansion_symbol(symbol, p.alphabet());
    std::vector<std::string> names = p.states();
    std::vector<std::size_t> expanded(p.num_states(), npos);
    for (const Edge& e : p.edges())
        if (e.symbol == *a)
            expanded[e.target] = 0;

    std::vector<LabeledEdge> edges;
    for (StateIndex v = 0; v < p.num_states(); ++v) {
        if (expanded[v] == npos)
            continue;
        std::string name = p.state_name(v) + "_" + std::string(symbol);
        while (std::find(names.begin(), names.end(), name) != names.end())
            name += '\'';
        expanded[v] = names.size();
        names.push_back(std::move(name));
    }
    for (const Edge& e : p.edges()) {
        if (e.symbol == *a)
            edges.push_back({e.source, static_cast<StateIndex>(expanded[e.target]), p.label(e)});
        else
            edges.push_back({e.source, e.target, p.label(e)});
    }
    for (StateIndex v = 0; v < p.num_states(); ++v)
        if (expanded[v] != npos)
            edges.push_back({static_cast<StateIndex>(expanded[v]), v, star});
    return Presentation(std::move(names), std::move(edges));
}

Presentation reverse(const Presentation& p)
{
    std::vector<LabeledEdge> edges;
    for (const auto& e : p.labeled_edges())
        edges.push_back({e.target, e.source, e.label});
    return Presentation(p.states(), std::move(edges));
}

} // namespace sofic
