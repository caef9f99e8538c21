#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opengloss/backend.hpp"
#include "opengloss/model.hpp"
#include "opengloss/pipeline.hpp"
#include "opengloss/store.hpp"

namespace opengloss {

enum class QaVerdict {
    Pass,
    NeedsReview,
    Flagged,
};

std::string_view to_string(QaVerdict verdict);
std::optional<QaVerdict> parse_qa_verdict(std::string_view text);

enum class QaDimension {
    HeadwordStructure,
    Definition,
    Encyclopedia,
    Etymology,
    Examples,
    Hypernym,
    Hyponym,
    Synonym,
    Antonym,
};

inline constexpr std::size_t kQaDimensionCount = 9;

std::string_view to_string(QaDimension dimension);
std::optional<QaDimension> parse_qa_dimension(std::string_view text);

enum class QaSeverity {
    Minor,
    Major,
};

std::string_view to_string(QaSeverity severity);

// Structural findings that mirror deliberate design choices (inflected-form
// and proper-noun headwords) rather than content defects.
enum class QaFlagKind {
    None,
    InflectedForm,
    ProperNoun,
};

struct QaIssue {
    QaDimension dimension = QaDimension::Definition;
    QaSeverity severity = QaSeverity::Minor;
    std::string note;
    bool design_aligned = false;
    QaFlagKind kind = QaFlagKind::None;
};

// strict-traditional reproduces the conservative behavior where design-
// aligned structure findings flag the entry; wordnet-aligned treats them as
// confirmations and caps their effect at needs-review.
enum class QaPolicy {
    StrictTraditional,
    WordnetAligned,
};

struct QaResult {
    std::string lemma;
    QaVerdict verdict = QaVerdict::Pass;
    std::vector<QaIssue> issues;
    std::optional<std::string> transport_note;  // judge unavailable
};

struct QaReport {
    std::int64_t sample_size = 0;
    std::map<QaVerdict, std::int64_t> verdict_counts;
    std::map<QaVerdict, double> verdict_fractions;
    std::map<QaDimension, std::int64_t> dimension_flag_counts;  // entries with >=1 issue
    std::map<QaDimension, double> dimension_clean_fractions;
    std::int64_t inflected_count = 0;
    std::int64_t proper_noun_count = 0;
    std::int64_t design_aligned_union = 0;
    std::int64_t all_core_content_clean = 0;  // no def/enc/ety/example issues
    double multi_flag_overlap = 0.0;  // flagged entries with >= 2 distinct dimensions
};

// Uniform sample without replacement over the index's lemma-sorted order,
// reproducible from the seed. Throws std::invalid_argument when n exceeds
// the population.
std::vector<std::string> sample_lemmas(const LemmaIndex& index, std::size_t n, std::uint64_t seed);

// Streams the shards and returns the sampled entries in sample order.
std::vector<LexemeEntry> sample_entries(const std::vector<std::filesystem::path>& shards,
                                        const LemmaIndex& index, std::size_t n,
                                        std::uint64_t seed);

// Deterministic structural checks: inflected-form candidates via suffix
// stripping (-s/-es/-ed/-ing/-er/-est, recovered base in the vocabulary) and
// proper-noun candidates via leading uppercase with no lowercase headword.
// Both come back design-aligned.
std::vector<QaIssue> rule_check_structure(const LexemeEntry& entry,
                                          const std::set<std::string>& vocabulary);

// Pure verdict derivation from the issue multiset under a policy.
QaVerdict derive_verdict(const std::vector<QaIssue>& issues, QaPolicy policy);

// Judge-backed assessment merged with the structural rule checks.
QaResult judge_entry(const LexemeEntry& entry, GenerationBackend& judge,
                     const std::set<std::string>& vocabulary,
                     QaPolicy policy = QaPolicy::WordnetAligned, const RetryPolicy& retry = {});

QaReport aggregate_report(const std::vector<QaResult>& results);

nlohmann::json qa_report_json(const QaReport& report);

// Plain-text table with the profile rows: verdict distribution, the
// design-aligned breakdown, per-dimension flags, and clean-content counts.
std::string qa_report_text(const QaReport& report);

}  // namespace opengloss
