#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sofic/presentation.hpp"

namespace sofic {

using Word = std::vector<std::string>;

struct FischerOptions {
    /// Cap on subsets explored by the subset construction; 2^n * n if unset.
    std::optional<std::size_t> magic_bound;
};

/// Right Fischer cover together with where each state came from.
struct FischerCover {
    Presentation presentation;
    /// provenance[s]: input states whose follower sets' union is the follower
    /// set denoted by cover state s (sorted input indices).
    std::vector<std::vector<StateIndex>> provenance;
    /// A magic word leading to each cover state.
    std::vector<Word> magic_words;
};

struct MagicWordCertificate {
    Word word;
    StateIndex state = 0; ///< the singleton the word synchronizes to
};

struct FischerVerification {
    ValidationReport report;
    std::optional<MagicWordCertificate> certificate;

    bool is_fischer() const noexcept { return report.ok() && certificate.has_value(); }
};

/// Thrown when the input does not meet the cover construction's
/// preconditions; carries the validation report.
class PreconditionError : public Error {
public:
    PreconditionError(const std::string& what, ValidationReport report)
        : Error(what), report_(std::move(report))
    {
    }
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Builds the right Fischer cover of the irreducible sofic shift presented
/// by `p` (essential and irreducible; need not be right-resolving).
///
/// Determinizes from the full state set, trims, merges subsets with equal
/// follower sets, and keeps the part reachable from a subset of least
/// cardinality. Such a subset is reached only by magic words, and every state
/// reachable from it again denotes the follower set of a magic word.
FischerCover fischer_cover(const Presentation& p, const FischerOptions& options = {});

FischerVerification verify_fischer(const Presentation& p, const FischerOptions& options = {});

/// Labeled-graph isomorphism (state names ignored).
bool isomorphic(const Presentation& a, const Presentation& b);

} // namespace sofic
