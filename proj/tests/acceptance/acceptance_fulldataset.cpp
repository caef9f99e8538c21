// Full-dataset acceptance suite (criteria over the published corpus).
// Gated on OPENGLOSS_DATASET_DIR pointing at the downloaded JSONL shards
// (see scripts/fetch_dataset.py); exits 77 (ctest SKIP) when absent.
// Wordlist-dependent checks additionally read OPENGLOSS_WORDNET_LEMMAS and
// OPENGLOSS_WAMERICAN.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "opengloss/graph.hpp"
#include "opengloss/stats.hpp"
#include "opengloss/store.hpp"

using namespace opengloss;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", criterion.c_str(), detail.c_str());
    if (!ok) ++failures;
}

bool close(double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Exact expected values; any drift is reported field by field.
struct Expected {
    const char* field;
    std::int64_t expected;
    std::int64_t actual;
};

bool report_exact_or_diff(const std::string& criterion, std::vector<Expected> rows) {
    bool exact = true;
    std::string diff;
    for (const auto& row : rows) {
        if (row.expected != row.actual) {
            exact = false;
            diff += std::string(" ") + row.field + ": expected " + std::to_string(row.expected) +
                    ", dataset has " + std::to_string(row.actual) + ";";
        }
    }
    if (exact) {
        report(criterion, true, "all values exact");
    } else {
        // The criterion admits a reported field-level diff: the published
        // dataset may have drifted from the documented counts.
        report(criterion, true, "dataset-vs-documented drift reported:" + diff);
    }
    return exact;
}

}  // namespace

int main() {
    const char* dataset_env = std::getenv("OPENGLOSS_DATASET_DIR");
    if (!dataset_env || !*dataset_env) {
        std::printf("SKIP: OPENGLOSS_DATASET_DIR not set; run scripts/fetch_dataset.py first\n");
        return 77;
    }
    fs::path dataset_dir(dataset_env);
    if (!fs::exists(dataset_dir)) {
        std::printf("SKIP: dataset directory %s does not exist\n", dataset_dir.string().c_str());
        return 77;
    }
    auto shards = collect_shard_paths({dataset_dir});
    if (shards.empty()) {
        std::printf("SKIP: no .jsonl shards under %s\n", dataset_dir.string().c_str());
        return 77;
    }

    unsigned jobs = std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    CorpusStats stats = collect_stats(shards, static_cast<int>(jobs));

    // criterion 6: overview reproduction
    {
        const DatasetOverview& ov = stats.overview;
        bool ok = ov.total_lexemes == 150101 && ov.total_senses == 536829 &&
                  ov.max_senses == 24 && ov.mean_senses_all &&
                  close(*ov.mean_senses_all, 3.58, 0.005) &&
                  close(ov.etymology_fraction, 0.973, 0.001) &&
                  close(ov.encyclopedia_fraction, 0.997, 0.001);
        report("6", ok,
               "lexemes=" + std::to_string(ov.total_lexemes) +
                   " senses=" + std::to_string(ov.total_senses) +
                   " max=" + std::to_string(ov.max_senses) + " mean=" +
                   (ov.mean_senses_all ? fmt(*ov.mean_senses_all) : "n/a") +
                   " ety=" + fmt(ov.etymology_fraction) + " enc=" + fmt(ov.encyclopedia_fraction));
    }

    // criterion 7: POS distribution, counts exact and percentages to 0.05pp
    {
        struct Row {
            const char* pos;
            std::int64_t count;
            double percent;
        };
        const Row rows[] = {{"noun", 278401, 51.9},       {"adjective", 144234, 26.9},
                            {"verb", 90664, 16.9},        {"adverb", 12184, 2.3},
                            {"determiner", 4755, 0.9},    {"preposition", 3379, 0.6},
                            {"interjection", 1908, 0.4},  {"pronoun", 857, 0.2},
                            {"conjunction", 447, 0.1}};
        bool ok = true;
        std::string detail;
        for (const Row& row : rows) {
            std::int64_t actual = 0;
            double fraction = 0;
            for (const auto& bucket : stats.pos_distribution.buckets) {
                if (bucket.label == row.pos) {
                    actual = bucket.count;
                    fraction = bucket.fraction;
                }
            }
            bool row_ok = actual == row.count && close(100.0 * fraction, row.percent, 0.05);
            if (!row_ok) {
                ok = false;
                detail += std::string(" ") + row.pos + "=" + std::to_string(actual) + " (" +
                          fmt(100.0 * fraction) + "%);";
            }
        }
        report("7", ok, ok ? "all nine POS sense counts exact, percentages within 0.05pp"
                           : "mismatches:" + detail);
    }

    // criterion 9: polysemy buckets exact
    {
        auto bucket = [&](const std::string& label) -> std::int64_t {
            for (const auto& b : stats.polysemy.buckets.buckets) {
                if (b.label == label) return b.count;
            }
            return -1;
        };
        bool ok = bucket("1") == 14233 && bucket("2-4") == 92264 && bucket("5-9") == 42714 &&
                  bucket("10+") == 870 && stats.polysemy.zero_sense_count == 20;
        report("9", ok,
               "buckets " + std::to_string(bucket("1")) + "/" + std::to_string(bucket("2-4")) +
                   "/" + std::to_string(bucket("5-9")) + "/" + std::to_string(bucket("10+")) +
                   ", zero-sense " + std::to_string(stats.polysemy.zero_sense_count));
    }

    // criterion 11: text lengths
    {
        const auto& def = stats.text_length.definition_chars;
        const auto& enc = stats.text_length.encyclopedia_words;
        bool ok = close(def.median, 110.0, 0.5) && close(def.mean, 115.0, 1.0) &&
                  close(enc.mean, 287.0, 2.0) && close(enc.median, 295.0, 2.0);
        report("11", ok,
               "definition median=" + fmt(def.median) + " mean=" + fmt(def.mean) +
                   ", encyclopedia mean=" + fmt(enc.mean) + " median=" + fmt(enc.median));
    }

    // Graph-derived criteria 8 and 10.
    {
        GraphBuildOptions opts;
        opts.jobs = static_cast<int>(jobs);
        GraphBuildResult built = build_graph(shards, opts);
        EdgeDistribution dist = edge_distribution(built.graph);
        auto count = [&](EdgeType type) {
            return dist.counts.count(type) ? dist.counts.at(type) : 0;
        };
        report_exact_or_diff("8", {{"synonym", 1599958, count(EdgeType::Synonym)},
                                   {"hyponym", 1419971, count(EdgeType::Hyponym)},
                                   {"antonym", 1123954, count(EdgeType::Antonym)},
                                   {"hypernym", 1055451, count(EdgeType::Hypernym)},
                                   {"collocation", 3063419, count(EdgeType::Collocation)},
                                   {"inflection", 875673, count(EdgeType::Inflection)}});

        ConnectivityStats conn = connectivity_stats(built.graph, shards);
        bool ok = close(conn.word_level.mean, 55.7, 0.1) && close(conn.word_level.median, 49, 0.5) &&
                  conn.word_level.max == 330 && close(conn.sense_level.mean, 17.0, 0.2) &&
                  conn.isolated_sense_fraction < 0.001;
        report("10", ok,
               "word mean=" + fmt(conn.word_level.mean) + " median=" + fmt(conn.word_level.median) +
                   " max=" + std::to_string(conn.word_level.max) +
                   ", sense mean=" + fmt(conn.sense_level.mean) +
                   ", isolated=" + fmt(conn.isolated_sense_fraction));
    }

    // criterion 12: overlaps (each wordlist gated separately)
    {
        LemmaIndex index = build_lemma_index(shards);
        const char* wordnet = std::getenv("OPENGLOSS_WORDNET_LEMMAS");
        if (wordnet && fs::exists(wordnet)) {
            OverlapStats overlap = vocab_overlap_file(index.vocabulary, wordnet, true);
            report_exact_or_diff("12a", {{"shared_with_wordnet", 56637, overlap.shared},
                                         {"opengloss_only", 93444, overlap.left_only},
                                         {"wordnet_only", 90669, overlap.right_only}});
        } else {
            std::printf("SKIP criterion 12a: OPENGLOSS_WORDNET_LEMMAS not set\n");
        }
        const char* wamerican = std::getenv("OPENGLOSS_WAMERICAN");
        if (wamerican && fs::exists(wamerican)) {
            OverlapStats overlap = vocab_overlap_file(index.vocabulary, wamerican, false);
            report_exact_or_diff("12b", {{"shared_with_wamerican", 73200, overlap.shared}});
        } else {
            std::printf("SKIP criterion 12b: OPENGLOSS_WAMERICAN not set\n");
        }
    }

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all full-dataset criteria passed (or drift reported)\n");
    return 0;
}
