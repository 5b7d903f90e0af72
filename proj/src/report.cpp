#include "sofic/report.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sofic/fischer.hpp"
#include "sofic/invariants.hpp"
#include "sofic/oracle.hpp"
#include "sofic/presentation.hpp"
#include "sofic/skew.hpp"
#include "sofic/tupleflow.hpp"

#include "detail/subset_automaton.hpp"

namespace sofic::cli {

namespace {

using json = nlohmann::ordered_json;

// Problems with the user's input; reported with exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

Presentation load(const std::string& path)
{
    try {
        return parse_file(path);
    } catch (const ParseError& e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                         ": " + e.what());
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

std::string word_string(const Word& w)
{
    if (w.empty())
        return "(empty)";
    const bool short_labels =
        std::all_of(w.begin(), w.end(), [](const std::string& a) { return a.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i)
        out += (i && !short_labels ? " " : "") + w[i];
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

std::string witness_string(const TupleWitness& w)
{
    return to_string(w.from) + " -" + w.label + "-> " + to_string(w.to);
}

std::string witness_string(const std::variant<TupleWitness, TupleVertex>& w)
{
    if (const auto* edge = std::get_if<TupleWitness>(&w))
        return witness_string(*edge);
    return "vertex " + to_string(std::get<TupleVertex>(w)) + " does not have exactly one incoming and one outgoing edge";
}

std::vector<std::string> validation_failures(const Presentation& p, const ValidationReport& r)
{
    std::vector<std::string> out;
    if (!r.is_essential)
        out.push_back("not essential: state '" + p.state_name(*r.stranded_state) +
                      "' lacks an incoming or outgoing edge");
    if (!r.is_irreducible) {
        std::vector<std::string> names;
        if (r.closed_subset)
            for (auto s : *r.closed_subset)
                names.push_back(p.state_name(s));
        out.push_back("not irreducible: closed subset {" + join(names, ",") + "}");
    }
    if (!r.is_right_resolving)
        out.push_back("not right-resolving: state '" + p.state_name(r.label_collision->first) +
                      "' has two edges labeled '" + p.alphabet()[r.label_collision->second] + "'");
    if (!r.is_follower_separated)
        out.push_back("not follower-separated: states '" + p.state_name(r.twin_states->first) +
                      "' and '" + p.state_name(r.twin_states->second) + "' have equal follower sets");
    return out;
}

json validation_json(const Presentation& p, const ValidationReport& r)
{
    json j;
    j["essential"] = r.is_essential;
    j["irreducible"] = r.is_irreducible;
    j["right_resolving"] = r.is_right_resolving;
    j["follower_separated"] = r.is_follower_separated;
    j["failures"] = validation_failures(p, r);
    return j;
}

// Words leading from `from` to every state, by breadth-first search.
std::vector<Word> words_from(const Presentation& p, StateIndex from)
{
    std::vector<std::optional<Word>> word(p.num_states());
    word[from] = Word{};
    const auto out = p.out_edges();
    std::deque<StateIndex> queue{from};
    while (!queue.empty()) {
        const StateIndex s = queue.front();
        queue.pop_front();
        for (std::size_t e : out[s]) {
            const Edge& edge = p.edges()[e];
            if (word[edge.target])
                continue;
            Word w = *word[s];
            w.push_back(p.label(edge));
            word[edge.target] = std::move(w);
            queue.push_back(edge.target);
        }
    }
    std::vector<Word> result;
    for (auto& w : word)
        result.push_back(w.value_or(Word{}));
    return result;
}

struct CoverResult {
    FischerCover cover;
    bool verified = false; ///< the input itself was certified as a Fischer cover
    std::optional<MagicWordCertificate> certificate;
};

CoverResult obtain_cover(const Presentation& p, const CommonOptions& options)
{
    const FischerOptions fo{options.magic_bound};
    CoverResult r;
    if (options.assume_fischer) {
        auto v = verify_fischer(p, fo);
        if (!v.is_fischer()) {
            auto failures = validation_failures(p, v.report);
            if (!v.certificate)
                failures.push_back("no magic word found within the search bound");
            throw InputError("verify_fischer: input is not a Fischer cover (" +
                             join(failures, "; ") + ")");
        }
        r.verified = true;
        r.certificate = v.certificate;
        r.cover.presentation = p;
        for (StateIndex s = 0; s < p.num_states(); ++s)
            r.cover.provenance.push_back({s});
        for (auto w : words_from(p, v.certificate->state)) {
            Word full = v.certificate->word;
            full.insert(full.end(), w.begin(), w.end());
            r.cover.magic_words.push_back(std::move(full));
        }
        return r;
    }
    try {
        r.cover = fischer_cover(p, fo);
    } catch (const PreconditionError& e) {
        throw InputError(std::string("fischer_cover: ") + e.what() + " (" +
                         join(validation_failures(p, e.report()), "; ") + ")");
    } catch (const detail::SearchBoundExceeded& e) {
        throw InputError(std::string("fischer_cover: ") + e.what());
    }
    return r;
}

struct Analysis {
    std::string file;
    Presentation input;
    ValidationReport validation;
    CoverResult cover;
    TupleGraph trimmed;
    ShiftClassReport cls;
    std::vector<PointExtension> extensions; ///< one per k in multicard
    IntMatrix adjacency;
    BowenFranks bf;
    bool cover_is_cycle = false;
    std::optional<MultiplicityGraph> mugraph;
};

Analysis analyze(const std::string& path, const CommonOptions& options)
{
    Analysis a;
    a.file = path;
    a.input = load(path);
    a.validation = validate(a.input);
    a.cover = obtain_cover(a.input, options);
    const Presentation& cover = a.cover.cover.presentation;
    a.trimmed = trim_tuple_graph(build_tuple_graph(cover));
    a.cls = classify(a.trimmed);
    for (std::size_t k : a.cls.multicard)
        a.extensions.push_back(point_extension(cover, a.trimmed, k));
    a.adjacency = adjacency_matrix(cover);
    a.bf = bowen_franks(a.adjacency);
    a.cover_is_cycle = is_single_cycle(a.adjacency);
    if (a.cls.is_near_markov)
        a.mugraph = multiplicity_graph(cover, a.trimmed, a.cls);
    return a;
}

struct Check {
    std::string name;
    std::string status; ///< "agree", "disagree" or "skipped"
    std::string detail;
};

struct OracleSummary {
    std::vector<Check> checks;
    std::vector<CensusRow> census;
    std::optional<FiberVerdict> fiber;

    bool consistent() const
    {
        return std::none_of(checks.begin(), checks.end(),
                            [](const Check& c) { return c.status == "disagree"; });
    }
};

std::string state_list(const Presentation& p, const std::vector<StateIndex>& states)
{
    std::vector<std::string> names;
    for (auto s : states)
        names.push_back(p.state_name(s));
    return "{" + join(names, ",") + "}";
}

OracleSummary run_oracle(const Analysis& a, std::size_t word_bound, std::size_t period_bound)
{
    OracleSummary o;
    const Presentation& cover = a.cover.cover.presentation;
    auto add = [&](std::string name, bool ok, std::string detail) {
        o.checks.push_back({std::move(name), ok ? "agree" : "disagree", std::move(detail)});
    };

    {
        const auto li = language(a.input, word_bound);
        const auto lc = language(cover, word_bound);
        std::size_t count = 0;
        for (const auto& words : lc.by_length)
            count += words.size();
        add("language of input vs cover", li == lc,
            std::to_string(count) + " words up to length " + std::to_string(word_bound));
    }
    {
        const auto words = stable_follower_partition(cover);
        const auto refined = follower_classes(cover);
        const bool discrete =
            std::set<std::size_t>(refined.begin(), refined.end()).size() == cover.num_states();
        add("follower partition by words vs refinement", words.classes == refined && discrete,
            "stable at word length " + std::to_string(words.depth));
    }
    {
        const auto v = verify_fischer(cover);
        add("magic word certificate of cover", v.is_fischer(),
            v.certificate ? "word " + word_string(v.certificate->word) + " -> " +
                                cover.state_name(v.certificate->state)
                          : "no magic word found");
    }
    try {
        o.fiber = pet_by_fiber(cover, {period_bound});
        add("PET by fiber product vs tuple graph", o.fiber->is_pet == a.cls.is_pet,
            std::string("fiber product: ") + (o.fiber->is_pet ? "PET" : "not PET") + " (" +
                o.fiber->reason + "); tuple graph: " + (a.cls.is_pet ? "PET" : "not PET"));
    } catch (const Error& e) {
        o.checks.push_back({"PET by fiber product vs tuple graph", "skipped", e.what()});
    }
    {
        o.census = periodic_preimage_census(cover, period_bound);
        const auto problems = census_disagreements(cover, a.trimmed, o.census, a.cls.is_pet);
        add("periodic census vs tuple graph", problems.empty(),
            problems.empty() ? std::to_string(o.census.size()) + " orbits up to period " +
                                   std::to_string(period_bound)
                             : join(std::vector<std::string>(problems.begin(),
                                                             problems.begin() + std::min<std::size_t>(
                                                                                    problems.size(), 3)),
                                    "; ") +
                                   (problems.size() > 3
                                        ? "; and " + std::to_string(problems.size() - 3) + " more"
                                        : ""));
    }
    {
        std::vector<std::string> bad;
        for (const auto& ext : a.extensions)
            if (augmentation(build_Bk(ext)) != a.trimmed.adjacency(ext.k))
                bad.push_back("k = " + std::to_string(ext.k));
        add("augmentation of skew matrices vs tuple adjacency", bad.empty(),
            bad.empty() ? std::to_string(a.extensions.size()) + " components" : join(bad, ", "));
    }
    return o;
}

json matrix_json(const IntMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j).convert_to<long long>());
        rows.push_back(row);
    }
    return rows;
}

json group_ring_json(const GroupRingMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.push_back(m.cell_string(i, j));
        rows.push_back(row);
    }
    return rows;
}

json bf_json(const BowenFranks& bf)
{
    json j;
    j["group"] = bf.group.to_string();
    j["free_rank"] = bf.group.free_rank;
    json factors = json::array();
    for (const auto& d : bf.group.invariant_factors)
        factors.push_back(d.str());
    j["invariant_factors"] = factors;
    j["det"] = bf.det.str();
    j["det_sign"] = bf.det_sign();
    return j;
}

json mugraph_json(const MultiplicityGraph& g)
{
    json j;
    j["canonical"] = g.canonical_form();
    json right = json::array();
    for (const auto& r : g.right) {
        json v;
        v["k"] = r.k;
        json cyc = json::array();
        for (const auto& t : r.cycle)
            cyc.push_back(to_string(t));
        v["cycle"] = cyc;
        v["labels"] = r.labels;
        v["weight"] = r.weight.to_cycle_string();
        v["length"] = r.length;
        right.push_back(v);
    }
    j["right"] = right;
    json left = json::array();
    for (const auto& l : g.left)
        left.push_back(json{{"right", l.right}, {"length", l.length}, {"w", l.w}});
    j["left"] = left;
    return j;
}

json census_json(const std::vector<CensusRow>& census, const Presentation& cover)
{
    json rows = json::array();
    for (const auto& r : census)
        rows.push_back(json{{"period", r.period},
                            {"word", word_string(r.word)},
                            {"preimages", r.preimages},
                            {"orbit_lengths", r.orbit_lengths},
                            {"fiber", state_list(cover, r.fiber_states)}});
    return rows;
}

json oracle_json(const OracleSummary& o, const Presentation& cover)
{
    json j;
    j["consistent"] = o.consistent();
    json checks = json::array();
    for (const auto& c : o.checks)
        checks.push_back(json{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    j["checks"] = checks;
    j["census"] = census_json(o.census, cover);
    return j;
}

std::vector<std::string> multiplicity_vertices(const TupleGraph& g)
{
    std::vector<std::string> out;
    for (const auto& v : g.vertices())
        if (v.size() >= 2)
            out.push_back(to_string(v));
    return out;
}

std::vector<std::string> multiplicity_edges(const TupleGraph& g)
{
    std::vector<std::string> out;
    for (const auto& e : g.edges())
        if (g.vertices()[e.source].size() >= 2)
            out.push_back(g.edge_string(e));
    return out;
}

std::string multicard_interpretation(const ShiftClassReport& cls)
{
    return cls.multicard_is_lower_bound ? "uniformly-separated spectrum (lower bound)" : "exact";
}

json analysis_json(const Analysis& a, const OracleSummary* oracle)
{
    const Presentation& cover = a.cover.cover.presentation;
    json j;
    j["schema"] = schema_version;
    j["command"] = "analyze";
    j["input"] = json{{"file", a.file},
                      {"states", a.input.states()},
                      {"alphabet", a.input.alphabet()},
                      {"edges", a.input.num_edges()}};
    j["validation"] = validation_json(a.input, a.validation);

    json f;
    f["mode"] = a.cover.verified ? "verified" : "constructed";
    f["states"] = cover.states();
    json prov = json::array();
    for (const auto& p : a.cover.cover.provenance)
        prov.push_back(state_list(a.input, p));
    f["provenance"] = prov;
    json magic = json::array();
    for (const auto& w : a.cover.cover.magic_words)
        magic.push_back(word_string(w));
    f["magic_words"] = magic;
    if (a.cover.certificate)
        f["certificate"] = json{{"word", word_string(a.cover.certificate->word)},
                                {"state", cover.state_name(a.cover.certificate->state)}};
    j["fischer"] = f;

    j["cover"] = json{{"adjacency", matrix_json(a.adjacency)},
                      {"single_cycle", a.cover_is_cycle},
                      {"bowen_franks", bf_json(a.bf)}};

    json c;
    c["aft"] = a.cls.is_aft;
    c["pet"] = a.cls.is_pet;
    c["near_markov"] = a.cls.is_near_markov;
    c["aft_witness"] = a.cls.aft_witness ? json(witness_string(*a.cls.aft_witness)) : json(nullptr);
    c["pet_witness"] = a.cls.pet_witness ? json(witness_string(*a.cls.pet_witness)) : json(nullptr);
    c["near_markov_witness"] = a.cls.near_markov_witness
                                   ? json(witness_string(*a.cls.near_markov_witness))
                                   : json(nullptr);
    c["multicard"] = a.cls.multicard;
    c["multicard_interpretation"] = multicard_interpretation(a.cls);
    j["classification"] = c;

    j["tuple_graph"] = json{{"multiplicity_vertices", multiplicity_vertices(a.trimmed)},
                            {"edges", multiplicity_edges(a.trimmed)}};

    json skew = json::array();
    for (const auto& ext : a.extensions) {
        const auto B = build_Bk(ext);
        json vs = json::array();
        for (const auto& v : ext.vertices)
            vs.push_back(to_string(v));
        skew.push_back(json{{"k", ext.k},
                            {"vertices", vs},
                            {"augmented", matrix_json(augmentation(B))},
                            {"B", group_ring_json(B)},
                            {"opp", group_ring_json(opp(B))}});
    }
    j["skew"] = skew;

    if (a.mugraph)
        j["invariant_triple"] = json{{"group", a.bf.group.to_string()},
                                     {"det", a.bf.det.str()},
                                     {"mugraph", mugraph_json(*a.mugraph)}};
    else
        j["invariant_triple"] = nullptr;
    if (oracle)
        j["oracle"] = oracle_json(*oracle, cover);
    return j;
}

void print_matrix(std::ostream& out, const std::vector<std::vector<std::string>>& cells,
                  const std::string& indent)
{
    std::vector<std::size_t> width;
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) {
            width.resize(std::max(width.size(), row.size()), 0);
            width[j] = std::max(width[j], row[j].size());
        }
    for (const auto& row : cells) {
        out << indent << "[ ";
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? " | " : "") << std::left << std::setw(static_cast<int>(width[j])) << row[j];
        out << " ]\n";
    }
}

void print_census(std::ostream& out, const std::vector<CensusRow>& census, const Presentation& cover)
{
    out << "periodic census:\n";
    out << "  period  word        preimages  orbit lengths  fiber\n";
    for (const auto& r : census) {
        std::vector<std::string> lens;
        for (auto l : r.orbit_lengths)
            lens.push_back(std::to_string(l));
        out << "  " << std::left << std::setw(8) << r.period << std::setw(12) << word_string(r.word)
            << std::setw(11) << r.preimages << std::setw(15) << join(lens, " ")
            << state_list(cover, r.fiber_states) << "\n";
    }
}

void print_oracle(std::ostream& out, const OracleSummary& o, const Presentation& cover)
{
    out << "oracle checks:\n";
    for (const auto& c : o.checks)
        out << "  [" << c.status << "] " << c.name << ": " << c.detail << "\n";
    print_census(out, o.census, cover);
}

const char* yes(bool b) { return b ? "true" : "false"; }

void print_analysis(std::ostream& out, const Analysis& a, const OracleSummary* oracle)
{
    const Presentation& cover = a.cover.cover.presentation;
    out << "input: " << a.file << " (" << a.input.num_states() << " states, alphabet "
        << join(a.input.alphabet(), " ") << ")\n";
    const auto failures = validation_failures(a.input, a.validation);
    out << "validation: " << (failures.empty() ? "ok" : join(failures, "; ")) << "\n";
    if (a.cover.verified) {
        out << "fischer cover: input verified, magic word " << word_string(a.cover.certificate->word)
            << " -> " << cover.state_name(a.cover.certificate->state) << "\n";
    } else {
        out << "fischer cover: constructed, " << cover.num_states() << " states\n";
        for (StateIndex s = 0; s < cover.num_states(); ++s)
            out << "  " << s + 1 << ": " << cover.state_name(s) << " from "
                << state_list(a.input, a.cover.cover.provenance[s]) << ", magic word "
                << word_string(a.cover.cover.magic_words[s]) << "\n";
    }
    out << "AFT: " << yes(a.cls.is_aft);
    if (a.cls.aft_witness)
        out << " (witness " << witness_string(*a.cls.aft_witness) << ")";
    out << "\nPET: " << yes(a.cls.is_pet);
    if (a.cls.pet_witness)
        out << " (witness " << witness_string(*a.cls.pet_witness) << ")";
    out << "\nnear Markov: " << yes(a.cls.is_near_markov);
    if (a.cls.near_markov_witness)
        out << " (witness " << witness_string(*a.cls.near_markov_witness) << ")";
    std::vector<std::string> mc;
    for (auto k : a.cls.multicard)
        mc.push_back(std::to_string(k));
    out << "\nmulticard: {" << join(mc, ",") << "}";
    if (a.cls.multicard_is_lower_bound)
        out << " (" << multicard_interpretation(a.cls) << ")";
    out << "\nmultiplicity vertices: " << join(multiplicity_vertices(a.trimmed), " ") << "\n";
    out << "multiplicity edges:\n";
    for (const auto& e : multiplicity_edges(a.trimmed))
        out << "  " << e << "\n";
    for (const auto& ext : a.extensions) {
        const auto B = build_Bk(ext);
        std::vector<std::string> vs;
        for (const auto& v : ext.vertices)
            vs.push_back(to_string(v));
        out << "skew matrix B_" << ext.k << " over " << join(vs, " ") << ":\n";
        std::vector<std::vector<std::string>> cells(B.dim());
        for (std::size_t i = 0; i < B.dim(); ++i)
            for (std::size_t j = 0; j < B.dim(); ++j)
                cells[i].push_back(B.cell_string(i, j));
        print_matrix(out, cells, "  ");
        const auto A = augmentation(B);
        out << "  augmented: " << A.to_string() << "\n";
    }
    out << "cover Bowen-Franks group: " << a.bf.group.to_string() << ", det(I - A) = " << a.bf.det.str()
        << (a.cover_is_cycle ? " (single cycle)" : "") << "\n";
    if (a.mugraph)
        out << "invariant triple: (" << a.bf.group.to_string() << ", " << a.bf.det.str() << ", "
            << a.mugraph->to_string() << ")\n";
    if (oracle)
        print_oracle(out, *oracle, cover);
}

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const InvariantPreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_inconsistent;
    }
}

} // namespace

int cmd_analyze(const std::string& path, const AnalyzeOptions& options, std::ostream& out,
                std::ostream& err)
{
    return guarded(err, [&] {
        const Analysis a = analyze(path, options);
        std::optional<OracleSummary> oracle;
        if (options.with_oracle)
            oracle = run_oracle(a, options.word_bound, options.period_bound);
        if (options.json)
            out << analysis_json(a, oracle ? &*oracle : nullptr).dump(2) << "\n";
        else
            print_analysis(out, a, oracle ? &*oracle : nullptr);
        return oracle && !oracle->consistent() ? int{exit_inconsistent} : int{exit_ok};
    });
}

int cmd_oracle(const std::string& path, const OracleOptions& options, std::ostream& out,
               std::ostream& err)
{
    return guarded(err, [&] {
        const Analysis a = analyze(path, options);
        const OracleSummary o = run_oracle(a, options.word_bound, options.period_bound);
        if (options.json) {
            json j;
            j["schema"] = schema_version;
            j["command"] = "oracle";
            j["file"] = path;
            j["cover_states"] = a.cover.cover.presentation.states();
            j["oracle"] = oracle_json(o, a.cover.cover.presentation);
            out << j.dump(2) << "\n";
        } else {
            out << "input: " << path << "\n";
            print_oracle(out, o, a.cover.cover.presentation);
            out << (o.consistent() ? "all checks agree\n" : "DISAGREEMENT\n");
        }
        return o.consistent() ? int{exit_ok} : int{exit_inconsistent};
    });
}

int cmd_expand(const std::string& path, const std::string& symbol, std::ostream& out,
               std::ostream& err)
{
    return guarded(err, [&] {
        const Presentation p = load(path);
        if (!p.find_symbol(symbol))
            throw InputError("symbol '" + symbol + "' is not in the alphabet");
        try {
            out << render(symbol_expand(p, symbol));
        } catch (const Error& e) {
            throw InputError(e.what());
        }
        return int{exit_ok};
    });
}

int cmd_reverse(const std::string& path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        out << render(reverse(load(path)));
        return int{exit_ok};
    });
}

int cmd_fischer(const std::string& path, const CommonOptions& options, std::ostream& out,
                std::ostream& err)
{
    return guarded(err, [&] {
        const Presentation p = load(path);
        const FischerOptions fo{options.magic_bound};
        if (options.assume_fischer) {
            const auto v = verify_fischer(p, fo);
            auto failures = validation_failures(p, v.report);
            if (!v.certificate)
                failures.push_back("no magic word found within the search bound");
            if (options.json) {
                json j;
                j["schema"] = schema_version;
                j["command"] = "fischer";
                j["mode"] = "verify";
                j["is_fischer"] = v.is_fischer();
                j["validation"] = validation_json(p, v.report);
                j["certificate"] = v.certificate
                                       ? json{{"word", word_string(v.certificate->word)},
                                              {"state", p.state_name(v.certificate->state)}}
                                       : json(nullptr);
                out << j.dump(2) << "\n";
            } else if (v.is_fischer()) {
                out << "Fischer cover: magic word " << word_string(v.certificate->word) << " -> "
                    << p.state_name(v.certificate->state) << "\n";
            } else {
                out << "not a Fischer cover: " << join(failures, "; ") << "\n";
            }
            return v.is_fischer() ? int{exit_ok} : int{exit_false};
        }
        const CoverResult r = obtain_cover(p, options);
        const Presentation& c = r.cover.presentation;
        if (options.json) {
            json j;
            j["schema"] = schema_version;
            j["command"] = "fischer";
            j["mode"] = "construct";
            j["states"] = c.states();
            json prov = json::array(), magic = json::array();
            for (StateIndex s = 0; s < c.num_states(); ++s) {
                prov.push_back(state_list(p, r.cover.provenance[s]));
                magic.push_back(word_string(r.cover.magic_words[s]));
            }
            j["provenance"] = prov;
            j["magic_words"] = magic;
            j["presentation"] = render(c);
            out << j.dump(2) << "\n";
        } else {
            for (StateIndex s = 0; s < c.num_states(); ++s)
                out << "# " << c.state_name(s) << " from " << state_list(p, r.cover.provenance[s])
                    << ", magic word " << word_string(r.cover.magic_words[s]) << "\n";
            out << render(c);
        }
        return int{exit_ok};
    });
}

int cmd_fe(const std::string& path_a, const std::string& path_b, const FeOptions& options,
           std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const Presentation pa = load(path_a);
        const Presentation pb = load(path_b);
        json j;
        j["schema"] = schema_version;
        j["command"] = "fe";
        j["files"] = {path_a, path_b};
        bool verdict = false;
        std::vector<std::array<std::string, 3>> table;

        if (options.mode == FeMode::sft) {
            j["mode"] = "sft";
            const IntMatrix A = adjacency_matrix(pa), B = adjacency_matrix(pb);
            for (const auto& [m, name] : {std::pair{&A, &path_a}, std::pair{&B, &path_b}})
                if (!is_essential_irreducible(*m))
                    throw InputError(*name + ": graph is not essential and irreducible");
            const auto c = sft_flow_equivalent(A, B);
            verdict = c.equivalent;
            j["invariants"] = {bf_json(c.first), bf_json(c.second)};
            j["single_cycle"] = {c.first_is_cycle, c.second_is_cycle};
            j["reason"] = c.reason;
            table = {{"Bowen-Franks group", c.first.group.to_string(), c.second.group.to_string()},
                     {"det(I - A)", c.first.det.str(), c.second.det.str()},
                     {"single cycle", yes(c.first_is_cycle), yes(c.second_is_cycle)}};
            table.push_back({"reason", c.reason, ""});
        } else {
            j["mode"] = "near-markov";
            const CoverResult ca = obtain_cover(pa, options);
            const CoverResult cb = obtain_cover(pb, options);
            for (const auto& [c, name] : {std::pair{&ca, &path_a}, std::pair{&cb, &path_b}}) {
                const auto cls = classify(trim_tuple_graph(build_tuple_graph(c->cover.presentation)));
                if (!cls.is_near_markov)
                    throw InputError(*name + ": not near Markov (witness " +
                                     witness_string(*cls.near_markov_witness) + ")");
            }
            const auto c = near_markov_fe(ca.cover.presentation, cb.cover.presentation, path_a, path_b);
            verdict = c.equivalent;
            j["invariant_triples"] = {
                json{{"group", c.first.bf.group.to_string()},
                     {"det", c.first.bf.det.str()},
                     {"mugraph", mugraph_json(c.first.mugraph)}},
                json{{"group", c.second.bf.group.to_string()},
                     {"det", c.second.bf.det.str()},
                     {"mugraph", mugraph_json(c.second.mugraph)}}};
            j["covers_flow_equivalent"] = c.cover_flow_equivalent;
            j["mugraphs_isomorphic"] = c.mugraph_isomorphic;
            table = {{"Bowen-Franks group", c.first.bf.group.to_string(), c.second.bf.group.to_string()},
                     {"det(I - A)", c.first.bf.det.str(), c.second.bf.det.str()},
                     {"multiplicity graph", c.first.mugraph.to_string(), c.second.mugraph.to_string()},
                     {"covers flow equivalent", yes(c.cover_flow_equivalent), ""},
                     {"multiplicity graphs isomorphic", yes(c.mugraph_isomorphic), ""}};
        }
        j["flow_equivalent"] = verdict;
        if (options.json) {
            out << j.dump(2) << "\n";
        } else {
            std::array<std::string, 3> head{"", path_a, path_b};
            std::size_t w0 = head[0].size(), w1 = head[1].size();
            for (const auto& row : table) {
                w0 = std::max(w0, row[0].size());
                if (!row[2].empty())
                    w1 = std::max(w1, row[1].size());
            }
            auto line = [&](const std::array<std::string, 3>& row) {
                std::string l = row[0] + std::string(w0 - row[0].size() + 2, ' ') + row[1];
                if (!row[2].empty())
                    l += std::string(w1 + 2 - std::min(w1 + 1, row[1].size()), ' ') + row[2];
                out << l << "\n";
            };
            line(head);
            for (const auto& row : table)
                line(row);
            out << "flow equivalent: " << yes(verdict) << "\n";
        }
        return verdict ? int{exit_ok} : int{exit_false};
    });
}

} // namespace sofic::cli
