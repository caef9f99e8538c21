#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "opengloss/graph.hpp"
#include "opengloss/model.hpp"

namespace opengloss {

struct DatasetOverview {
    std::int64_t total_lexemes = 0;
    std::int64_t total_senses = 0;
    // Mean over all lexemes mirrors the headline number; the with-senses
    // variant uses only lexemes carrying at least one sense.
    std::optional<double> mean_senses_all;
    std::optional<double> mean_senses_with_senses;
    std::int64_t max_senses = 0;
    std::int64_t etymology_count = 0;
    double etymology_fraction = 0.0;
    std::int64_t encyclopedia_count = 0;
    double encyclopedia_fraction = 0.0;
    std::int64_t single_word_count = 0;
    std::int64_t mwe_count = 0;  // lemma contains an internal space
};

struct Bucket {
    std::string label;
    std::int64_t count = 0;
    double fraction = 0.0;

    bool operator==(const Bucket&) const = default;
};

struct NumericSummary {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    std::int64_t count = 0;
};

struct Distribution {
    std::vector<Bucket> buckets;
    std::int64_t population = 0;
    std::optional<NumericSummary> summary;
};

struct PolysemyStats {
    Distribution buckets;                       // "1", "2-4", "5-9", "10+"
    std::map<std::int64_t, std::int64_t> per_count;  // sense count -> lexemes
    std::int64_t zero_sense_count = 0;          // incomplete entries, counted apart
    std::optional<double> median_senses;
};

struct RelationCoverage {
    std::int64_t senses_with = 0;
    std::int64_t total_items = 0;
    double coverage = 0.0;            // senses_with / sense population
    std::optional<double> mean_when_present;
};

struct CoverageStats {
    std::int64_t sense_population = 0;
    RelationCoverage synonyms, antonyms, hypernyms, hyponyms, examples;
    // Both denominators for enrichment coverage: per lexeme and per sense.
    double etymology_sense_fraction = 0.0;
    double encyclopedia_sense_fraction = 0.0;
};

struct TextLengthStats {
    NumericSummary definition_chars;     // Unicode scalar values
    NumericSummary encyclopedia_words;   // whitespace tokens
};

struct EdgeDistribution {
    std::map<EdgeType, std::int64_t> counts;  // multiplicity sums
    std::int64_t sense_level_total = 0;
    std::int64_t pos_level_total = 0;    // collocation + inflection
    std::int64_t other_total = 0;        // derivations + historical
    std::int64_t grand_total = 0;
    // Fractions within each split.
    std::map<EdgeType, double> sense_level_fraction;
    std::map<EdgeType, double> pos_level_fraction;
};

// Everything the one-pass collector produces.
struct CorpusStats {
    DatasetOverview overview;
    Distribution pos_distribution;  // unit: sense
    PolysemyStats polysemy;
    CoverageStats coverage;
    TextLengthStats text_length;
    std::int64_t rejected_entries = 0;
};

// Streaming accumulator; associative merges keep shard-parallel runs
// deterministic.
class StatsCollector {
public:
    void add(const LexemeEntry& entry);
    void merge(const StatsCollector& other);
    CorpusStats finalize() const;

private:
    std::int64_t lexemes_ = 0;
    std::int64_t senses_ = 0;
    std::int64_t max_senses_ = 0;
    std::int64_t with_etymology_ = 0;
    std::int64_t with_encyclopedia_ = 0;
    std::int64_t single_word_ = 0;
    std::int64_t mwe_ = 0;
    std::int64_t zero_sense_ = 0;
    std::map<std::int64_t, std::int64_t> sense_histogram_;
    std::map<PartOfSpeech, std::int64_t> pos_senses_;
    struct Cov {
        std::int64_t with = 0;
        std::int64_t items = 0;
    };
    Cov syn_, ant_, hyper_, hypo_, ex_;
    std::int64_t senses_under_ety_ = 0;
    std::int64_t senses_under_enc_ = 0;
    std::map<std::int64_t, std::int64_t> def_lengths_;   // codepoints -> senses
    std::map<std::int64_t, std::int64_t> enc_lengths_;   // words -> entries
};

// Per-operation entry points (vector fixtures and shard streams).
DatasetOverview overview_stats(const std::vector<LexemeEntry>& entries);
Distribution pos_distribution(const std::vector<LexemeEntry>& entries);
PolysemyStats polysemy_histogram(const std::vector<LexemeEntry>& entries);
CoverageStats coverage_stats(const std::vector<LexemeEntry>& entries);
TextLengthStats text_length_stats(const std::vector<LexemeEntry>& entries);

CorpusStats collect_stats(const std::vector<std::filesystem::path>& shards, int jobs = 1);

EdgeDistribution edge_distribution(const SemanticGraph& graph);

struct OverlapStats {
    std::int64_t shared = 0;
    std::int64_t left_only = 0;
    std::int64_t right_only = 0;
    std::int64_t left_size = 0;
    std::int64_t right_size = 0;
    double shared_fraction_left = 0.0;   // shared / left_size
    double shared_fraction_right = 0.0;  // shared / right_size
};

OverlapStats vocab_overlap(const std::set<std::string>& left, const std::set<std::string>& right);

// Reads a newline-delimited wordlist, normalizing each line (underscores map
// to spaces first when the flag is set; lines empty after normalization are
// dropped).
std::set<std::string> load_wordlist(const std::filesystem::path& path, bool underscore_normalize);

OverlapStats vocab_overlap_file(const std::set<std::string>& vocabulary,
                                const std::filesystem::path& wordlist,
                                bool underscore_normalize);

// Machine-readable reports.
nlohmann::json stats_report_json(const CorpusStats& stats);
nlohmann::json edge_distribution_json(const EdgeDistribution& dist);
nlohmann::json connectivity_json(const ConnectivityStats& stats);
nlohmann::json overlap_json(const OverlapStats& stats);
std::string stats_report_csv(const CorpusStats& stats);

}  // namespace opengloss
