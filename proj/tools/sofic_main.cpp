#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "sofic/report.hpp"

namespace cli = sofic::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Analyze labeled-graph presentations of irreducible sofic shifts"};
    app.require_subcommand(1);

    bool json = false, assume_fischer = false;
    std::optional<std::size_t> magic_bound;
    std::size_t word_bound = 8, period_bound = 6;
    auto common = [&](CLI::App* sub) {
        sub->add_flag("--json", json, "emit a single JSON document");
        sub->add_flag("--assume-fischer", assume_fischer,
                      "verify that the input is a Fischer cover instead of constructing one");
        sub->add_option("--magic-bound", magic_bound, "cap on subsets explored in the subset construction");
    };
    auto bounds = [&](CLI::App* sub) {
        sub->add_option("--word-bound,--words", word_bound, "longest word compared by the oracle")
            ->capture_default_str();
        sub->add_option("--period-bound,--period", period_bound, "longest period in the census")
            ->capture_default_str();
    };

    std::string file, file_b, symbol;

    auto* analyze = app.add_subcommand("analyze", "classify a shift and compute its invariants");
    analyze->add_option("file", file, "presentation file")->required();
    bool with_oracle = false;
    analyze->add_flag("--oracle", with_oracle, "append the brute-force cross-checks");
    common(analyze);
    bounds(analyze);

    auto* fe = app.add_subcommand("fe", "decide flow equivalence of two shifts");
    std::string mode = "sft";
    fe->add_option("--mode", mode, "sft or near-markov")
        ->check(CLI::IsMember({"sft", "near-markov"}))
        ->capture_default_str();
    fe->add_option("first", file, "first presentation")->required();
    fe->add_option("second", file_b, "second presentation")->required();
    common(fe);

    auto* expand = app.add_subcommand("expand", "symbol expansion at one symbol");
    expand->add_option("file", file, "presentation file")->required();
    expand->add_option("symbol", symbol, "symbol to expand")->required();

    auto* reverse = app.add_subcommand("reverse", "time reversal");
    reverse->add_option("file", file, "presentation file")->required();

    auto* oracle = app.add_subcommand("oracle", "run the brute-force cross-checks");
    oracle->add_option("file", file, "presentation file")->required();
    common(oracle);
    bounds(oracle);

    auto* fischer = app.add_subcommand("fischer", "construct or verify the right Fischer cover");
    fischer->add_option("file", file, "presentation file")->required();
    common(fischer);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_invalid;
    }

    cli::CommonOptions base;
    base.json = json;
    base.assume_fischer = assume_fischer;
    base.magic_bound = magic_bound;

    if (*analyze) {
        cli::AnalyzeOptions o;
        static_cast<cli::CommonOptions&>(o) = base;
        o.with_oracle = with_oracle;
        o.word_bound = word_bound;
        o.period_bound = period_bound;
        return cli::cmd_analyze(file, o, std::cout, std::cerr);
    }
    if (*fe) {
        cli::FeOptions o;
        static_cast<cli::CommonOptions&>(o) = base;
        o.mode = mode == "sft" ? cli::FeMode::sft : cli::FeMode::near_markov;
        return cli::cmd_fe(file, file_b, o, std::cout, std::cerr);
    }
    if (*expand)
        return cli::cmd_expand(file, symbol, std::cout, std::cerr);
    if (*reverse)
        return cli::cmd_reverse(file, std::cout, std::cerr);
    if (*oracle) {
        cli::OracleOptions o;
        static_cast<cli::CommonOptions&>(o) = base;
        o.word_bound = word_bound;
        o.period_bound = period_bound;
        return cli::cmd_oracle(file, o, std::cout, std::cerr);
    }
    return cli::cmd_fischer(file, base, std::cout, std::cerr);
}
