#pragma once

#include <string>
#include <vector>

#include "opengloss/model.hpp"

namespace opengloss {

// generation-strict enforces the generation-time arities (1-4 senses per
// POS, 3-6 collocations, 1-3 examples, 3-5 synonyms); ingestion-lenient
// downgrades arity breaches to warnings and rejects only structural
// corruption.
enum class ValidationMode {
    GenerationStrict,
    IngestionLenient,
};

enum class Severity {
    Error,     // structural corruption; the entry is rejected
    Warning,   // contract breach tolerated on ingestion
    Coverage,  // missing optional content, recorded for statistics
};

struct ValidationIssue {
    Severity severity = Severity::Warning;
    std::string field;  // dotted path, e.g. "pos_entries[1].senses"
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
};

struct ValidationOutcome {
    std::vector<ValidationIssue> issues;

    bool ok() const {
        for (const auto& i : issues)
            if (i.severity == Severity::Error) return false;
        return true;
    }
    std::size_t count(Severity s) const {
        std::size_t n = 0;
        for (const auto& i : issues) n += (i.severity == s) ? 1 : 0;
        return n;
    }
};

std::string_view to_string(Severity severity);

// Pure function: same entry and mode always produce the same outcome.
ValidationOutcome validate_entry(const LexemeEntry& entry, ValidationMode mode);

}  // namespace opengloss
