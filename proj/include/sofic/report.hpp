#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace sofic::cli {

inline constexpr const char* schema_version = "sofic-report/1";

enum ExitCode : int {
    exit_ok = 0,
    exit_false = 1,
    exit_invalid = 2,
    exit_inconsistent = 3,
};

struct CommonOptions {
    bool json = false;
    bool assume_fischer = false;
    std::optional<std::size_t> magic_bound;
};

struct AnalyzeOptions : CommonOptions {
    bool with_oracle = false;
    std::size_t word_bound = 8;
    std::size_t period_bound = 6;
};

struct OracleOptions : CommonOptions {
    std::size_t word_bound = 8;
    std::size_t period_bound = 6;
};

enum class FeMode { sft, near_markov };

struct FeOptions : CommonOptions {
    FeMode mode = FeMode::sft;
};

// Each command writes its report to `out` and diagnostics to `err`, and
// returns the process exit code.
int cmd_analyze(const std::string& path, const AnalyzeOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_fe(const std::string& path_a, const std::string& path_b, const FeOptions& options,
           std::ostream& out, std::ostream& err);
int cmd_expand(const std::string& path, const std::string& symbol, std::ostream& out,
               std::ostream& err);
int cmd_reverse(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& path, const OracleOptions& options, std::ostream& out,
               std::ostream& err);
int cmd_fischer(const std::string& path, const CommonOptions& options, std::ostream& out,
                std::ostream& err);

} // namespace sofic::cli
