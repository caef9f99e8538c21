#include "opengloss/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "opengloss/normalize.hpp"
#include "opengloss/store.hpp"

namespace opengloss {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

NumericSummary summarize_histogram(const std::map<std::int64_t, std::int64_t>& histogram) {
    NumericSummary s;
    for (const auto& [value, count] : histogram) s.count += count;
    if (s.count == 0) return s;
    s.min = histogram.begin()->first;
    s.max = histogram.rbegin()->first;
    double sum = 0;
    for (const auto& [value, count] : histogram) {
        sum += static_cast<double>(value) * static_cast<double>(count);
    }
    s.mean = sum / static_cast<double>(s.count);

    // Median from cumulative counts.
    std::int64_t lo_rank = (s.count - 1) / 2;
    std::int64_t hi_rank = s.count / 2;
    std::optional<std::int64_t> lo, hi;
    std::int64_t seen = 0;
    for (const auto& [value, count] : histogram) {
        if (!lo && seen + count > lo_rank) lo = value;
        if (!hi && seen + count > hi_rank) hi = value;
        seen += count;
        if (lo && hi) break;
    }
    s.median = (static_cast<double>(*lo) + static_cast<double>(*hi)) / 2.0;

    double var = 0;
    for (const auto& [value, count] : histogram) {
        double delta = static_cast<double>(value) - s.mean;
        var += delta * delta * static_cast<double>(count);
    }
    s.stddev = std::sqrt(var / static_cast<double>(s.count));
    return s;
}

void merge_histogram(std::map<std::int64_t, std::int64_t>& into,
                     const std::map<std::int64_t, std::int64_t>& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace

void StatsCollector::add(const LexemeEntry& entry) {
    ++lexemes_;
    std::int64_t senses = static_cast<std::int64_t>(entry.sense_count());
    senses_ += senses;
    max_senses_ = std::max(max_senses_, senses);
    if (senses == 0) {
        ++zero_sense_;
    } else {
        ++sense_histogram_[senses];
    }
    if (entry.etymology) with_etymology_ += 1;
    if (entry.encyclopedia) with_encyclopedia_ += 1;
    if (entry.lemma.find(' ') != std::string::npos) {
        ++mwe_;
    } else {
        ++single_word_;
    }
    if (entry.encyclopedia) {
        ++enc_lengths_[entry.encyclopedia->word_count];
    }
    for (const auto& pe : entry.pos_entries) {
        pos_senses_[pe.pos] += static_cast<std::int64_t>(pe.senses.size());
        for (const auto& sense : pe.senses) {
            auto tally = [](Cov& cov, std::size_t n) {
                if (n > 0) {
                    ++cov.with;
                    cov.items += static_cast<std::int64_t>(n);
                }
            };
            tally(syn_, sense.synonyms.size());
            tally(ant_, sense.antonyms.size());
            tally(hyper_, sense.hypernyms.size());
            tally(hypo_, sense.hyponyms.size());
            tally(ex_, sense.examples.size());
            ++def_lengths_[static_cast<std::int64_t>(codepoint_count(sense.definition))];
            if (entry.etymology) ++senses_under_ety_;
            if (entry.encyclopedia) ++senses_under_enc_;
        }
    }
}

void StatsCollector::merge(const StatsCollector& o) {
    lexemes_ += o.lexemes_;
    senses_ += o.senses_;
    max_senses_ = std::max(max_senses_, o.max_senses_);
    with_etymology_ += o.with_etymology_;
    with_encyclopedia_ += o.with_encyclopedia_;
    single_word_ += o.single_word_;
    mwe_ += o.mwe_;
    zero_sense_ += o.zero_sense_;
    merge_histogram(sense_histogram_, o.sense_histogram_);
    for (const auto& [pos, n] : o.pos_senses_) pos_senses_[pos] += n;
    auto merge_cov = [](Cov& a, const Cov& b) {
        a.with += b.with;
        a.items += b.items;
    };
    merge_cov(syn_, o.syn_);
    merge_cov(ant_, o.ant_);
    merge_cov(hyper_, o.hyper_);
    merge_cov(hypo_, o.hypo_);
    merge_cov(ex_, o.ex_);
    senses_under_ety_ += o.senses_under_ety_;
    senses_under_enc_ += o.senses_under_enc_;
    merge_histogram(def_lengths_, o.def_lengths_);
    merge_histogram(enc_lengths_, o.enc_lengths_);
}

CorpusStats StatsCollector::finalize() const {
    CorpusStats out;

    DatasetOverview& ov = out.overview;
    ov.total_lexemes = lexemes_;
    ov.total_senses = senses_;
    ov.max_senses = max_senses_;
    if (lexemes_ > 0) {
        ov.mean_senses_all = static_cast<double>(senses_) / static_cast<double>(lexemes_);
    }
    std::int64_t with_senses = lexemes_ - zero_sense_;
    if (with_senses > 0) {
        ov.mean_senses_with_senses =
            static_cast<double>(senses_) / static_cast<double>(with_senses);
    }
    ov.etymology_count = with_etymology_;
    ov.encyclopedia_count = with_encyclopedia_;
    if (lexemes_ > 0) {
        ov.etymology_fraction = static_cast<double>(with_etymology_) / static_cast<double>(lexemes_);
        ov.encyclopedia_fraction =
            static_cast<double>(with_encyclopedia_) / static_cast<double>(lexemes_);
    }
    ov.single_word_count = single_word_;
    ov.mwe_count = mwe_;

    Distribution& pos = out.pos_distribution;
    pos.population = senses_;
    for (PartOfSpeech p : all_parts_of_speech()) {
        std::int64_t count = pos_senses_.count(p) ? pos_senses_.at(p) : 0;
        double fraction =
            senses_ > 0 ? static_cast<double>(count) / static_cast<double>(senses_) : 0.0;
        pos.buckets.push_back({std::string(to_string(p)), count, fraction});
    }

    PolysemyStats& poly = out.polysemy;
    poly.per_count = sense_histogram_;
    poly.zero_sense_count = zero_sense_;
    poly.buckets.population = with_senses;
    auto bucket_count = [&](std::int64_t lo, std::int64_t hi) {
        std::int64_t n = 0;
        for (const auto& [senses, count] : sense_histogram_) {
            if (senses >= lo && (hi < 0 || senses <= hi)) n += count;
        }
        return n;
    };
    struct Range {
        const char* label;
        std::int64_t lo, hi;
    };
    for (const Range& r : {Range{"1", 1, 1}, Range{"2-4", 2, 4}, Range{"5-9", 5, 9},
                           Range{"10+", 10, -1}}) {
        std::int64_t count = bucket_count(r.lo, r.hi);
        double fraction = with_senses > 0
                              ? static_cast<double>(count) / static_cast<double>(with_senses)
                              : 0.0;
        poly.buckets.buckets.push_back({r.label, count, fraction});
    }
    if (with_senses > 0) {
        poly.median_senses = summarize_histogram(sense_histogram_).median;
    }

    CoverageStats& cov = out.coverage;
    cov.sense_population = senses_;
    auto fill = [&](RelationCoverage& rc, const Cov& c) {
        rc.senses_with = c.with;
        rc.total_items = c.items;
        rc.coverage = senses_ > 0 ? static_cast<double>(c.with) / static_cast<double>(senses_) : 0.0;
        if (c.with > 0) {
            rc.mean_when_present = static_cast<double>(c.items) / static_cast<double>(c.with);
        }
    };
    fill(cov.synonyms, syn_);
    fill(cov.antonyms, ant_);
    fill(cov.hypernyms, hyper_);
    fill(cov.hyponyms, hypo_);
    fill(cov.examples, ex_);
    if (senses_ > 0) {
        cov.etymology_sense_fraction =
            static_cast<double>(senses_under_ety_) / static_cast<double>(senses_);
        cov.encyclopedia_sense_fraction =
            static_cast<double>(senses_under_enc_) / static_cast<double>(senses_);
    }

    out.text_length.definition_chars = summarize_histogram(def_lengths_);
    out.text_length.encyclopedia_words = summarize_histogram(enc_lengths_);
    return out;
}

namespace {

CorpusStats stats_of(const std::vector<LexemeEntry>& entries) {
    StatsCollector collector;
    for (const auto& entry : entries) collector.add(entry);
    return collector.finalize();
}

}  // namespace

DatasetOverview overview_stats(const std::vector<LexemeEntry>& entries) {
    return stats_of(entries).overview;
}
Distribution pos_distribution(const std::vector<LexemeEntry>& entries) {
    return stats_of(entries).pos_distribution;
}
PolysemyStats polysemy_histogram(const std::vector<LexemeEntry>& entries) {
    return stats_of(entries).polysemy;
}
CoverageStats coverage_stats(const std::vector<LexemeEntry>& entries) {
    return stats_of(entries).coverage;
}
TextLengthStats text_length_stats(const std::vector<LexemeEntry>& entries) {
    return stats_of(entries).text_length;
}

CorpusStats collect_stats(const std::vector<fs::path>& shards, int jobs) {
    std::vector<StatsCollector> partial(shards.size());
    std::vector<std::int64_t> rejected(shards.size(), 0);
    auto run_shard = [&](std::size_t i) {
        for_each_entry(
            {shards[i]}, [&](const LexemeEntry& entry) { partial[i].add(entry); },
            [&](const Rejection&) { ++rejected[i]; });
    };
    if (jobs <= 1 || shards.size() <= 1) {
        for (std::size_t i = 0; i < shards.size(); ++i) run_shard(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::size_t worker_count = std::min(static_cast<std::size_t>(jobs), shards.size());
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= shards.size()) return;
                    run_shard(i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }
    StatsCollector total;
    std::int64_t total_rejected = 0;
    for (std::size_t i = 0; i < shards.size(); ++i) {
        total.merge(partial[i]);
        total_rejected += rejected[i];
    }
    CorpusStats stats = total.finalize();
    stats.rejected_entries = total_rejected;
    return stats;
}

EdgeDistribution edge_distribution(const SemanticGraph& graph) {
    EdgeDistribution dist;
    dist.counts = graph.edge_counts();
    for (EdgeType type : all_edge_types()) {
        std::int64_t count = dist.counts.count(type) ? dist.counts.at(type) : 0;
        dist.grand_total += count;
        if (edge_category(type) == EdgeCategory::SenseLevel) {
            dist.sense_level_total += count;
        } else if (type == EdgeType::Collocation || type == EdgeType::Inflection) {
            dist.pos_level_total += count;
        } else {
            dist.other_total += count;
        }
    }
    for (EdgeType type : all_edge_types()) {
        std::int64_t count = dist.counts.count(type) ? dist.counts.at(type) : 0;
        if (edge_category(type) == EdgeCategory::SenseLevel && dist.sense_level_total > 0) {
            dist.sense_level_fraction[type] =
                static_cast<double>(count) / static_cast<double>(dist.sense_level_total);
        }
        if ((type == EdgeType::Collocation || type == EdgeType::Inflection) &&
            dist.pos_level_total > 0) {
            dist.pos_level_fraction[type] =
                static_cast<double>(count) / static_cast<double>(dist.pos_level_total);
        }
    }
    return dist;
}

OverlapStats vocab_overlap(const std::set<std::string>& left, const std::set<std::string>& right) {
    OverlapStats out;
    out.left_size = static_cast<std::int64_t>(left.size());
    out.right_size = static_cast<std::int64_t>(right.size());
    for (const auto& lemma : left) {
        if (right.count(lemma)) {
            ++out.shared;
        } else {
            ++out.left_only;
        }
    }
    out.right_only = out.right_size - out.shared;
    if (out.left_size > 0) {
        out.shared_fraction_left =
            static_cast<double>(out.shared) / static_cast<double>(out.left_size);
    }
    if (out.right_size > 0) {
        out.shared_fraction_right =
            static_cast<double>(out.shared) / static_cast<double>(out.right_size);
    }
    return out;
}

std::set<std::string> load_wordlist(const fs::path& path, bool underscore_normalize) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open wordlist " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (underscore_normalize) {
            std::replace(line.begin(), line.end(), '_', ' ');
        }
        std::string lemma = normalize_lemma_lenient(line);
        if (!lemma.empty()) words.insert(std::move(lemma));
    }
    return words;
}

OverlapStats vocab_overlap_file(const std::set<std::string>& vocabulary, const fs::path& wordlist,
                                bool underscore_normalize) {
    return vocab_overlap(vocabulary, load_wordlist(wordlist, underscore_normalize));
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json summary_json(const NumericSummary& s) {
    return {{"mean", s.mean},   {"median", s.median}, {"stddev", s.stddev},
            {"min", s.min},     {"max", s.max},       {"count", s.count}};
}

json distribution_json(const Distribution& d) {
    json buckets = json::array();
    for (const auto& b : d.buckets) {
        buckets.push_back({{"label", b.label}, {"count", b.count}, {"fraction", b.fraction}});
    }
    json out = {{"population", d.population}, {"buckets", std::move(buckets)}};
    if (d.summary) out["summary"] = summary_json(*d.summary);
    return out;
}

json relation_coverage_json(const RelationCoverage& rc) {
    json out = {{"senses_with", rc.senses_with},
                {"total_items", rc.total_items},
                {"coverage", rc.coverage}};
    if (rc.mean_when_present) out["mean_when_present"] = *rc.mean_when_present;
    return out;
}

}  // namespace

json stats_report_json(const CorpusStats& stats) {
    const DatasetOverview& ov = stats.overview;
    json overview = {{"total_lexemes", ov.total_lexemes},
                     {"total_senses", ov.total_senses},
                     {"max_senses", ov.max_senses},
                     {"etymology", {{"count", ov.etymology_count}, {"fraction", ov.etymology_fraction}}},
                     {"encyclopedia",
                      {{"count", ov.encyclopedia_count}, {"fraction", ov.encyclopedia_fraction}}},
                     {"single_word_count", ov.single_word_count},
                     {"mwe_count", ov.mwe_count}};
    if (ov.mean_senses_all) overview["mean_senses"] = *ov.mean_senses_all;
    if (ov.mean_senses_with_senses) {
        overview["mean_senses_with_senses"] = *ov.mean_senses_with_senses;
    }

    json polysemy = distribution_json(stats.polysemy.buckets);
    polysemy["zero_sense_count"] = stats.polysemy.zero_sense_count;
    if (stats.polysemy.median_senses) polysemy["median_senses"] = *stats.polysemy.median_senses;
    json per_count = json::object();
    for (const auto& [senses, count] : stats.polysemy.per_count) {
        per_count[std::to_string(senses)] = count;
    }
    polysemy["per_count"] = std::move(per_count);

    json coverage = {{"sense_population", stats.coverage.sense_population},
                     {"synonyms", relation_coverage_json(stats.coverage.synonyms)},
                     {"antonyms", relation_coverage_json(stats.coverage.antonyms)},
                     {"hypernyms", relation_coverage_json(stats.coverage.hypernyms)},
                     {"hyponyms", relation_coverage_json(stats.coverage.hyponyms)},
                     {"examples", relation_coverage_json(stats.coverage.examples)},
                     {"etymology_sense_fraction", stats.coverage.etymology_sense_fraction},
                     {"encyclopedia_sense_fraction", stats.coverage.encyclopedia_sense_fraction}};

    return {{"overview", std::move(overview)},
            {"pos_distribution", distribution_json(stats.pos_distribution)},
            {"polysemy", std::move(polysemy)},
            {"coverage", std::move(coverage)},
            {"text_length",
             {{"definition_chars", summary_json(stats.text_length.definition_chars)},
              {"encyclopedia_words", summary_json(stats.text_length.encyclopedia_words)}}},
            {"rejected_entries", stats.rejected_entries}};
}

json edge_distribution_json(const EdgeDistribution& dist) {
    json counts = json::object();
    for (const auto& [type, count] : dist.counts) {
        counts[std::string(to_string(type))] = count;
    }
    json sense_fraction = json::object();
    for (const auto& [type, f] : dist.sense_level_fraction) {
        sense_fraction[std::string(to_string(type))] = f;
    }
    json pos_fraction = json::object();
    for (const auto& [type, f] : dist.pos_level_fraction) {
        pos_fraction[std::string(to_string(type))] = f;
    }
    return {{"counts", std::move(counts)},
            {"sense_level_total", dist.sense_level_total},
            {"pos_level_total", dist.pos_level_total},
            {"other_total", dist.other_total},
            {"grand_total", dist.grand_total},
            {"sense_level_fraction", std::move(sense_fraction)},
            {"pos_level_fraction", std::move(pos_fraction)}};
}

json connectivity_json(const ConnectivityStats& stats) {
    auto degree = [](const DegreeSummary& d) -> json {
        return {{"mean", d.mean}, {"median", d.median}, {"max", d.max}, {"stddev", d.stddev}};
    };
    return {{"sense_level", degree(stats.sense_level)},
            {"word_level", degree(stats.word_level)},
            {"isolated_sense_fraction", stats.isolated_sense_fraction},
            {"sense_population", stats.sense_population},
            {"word_population", stats.word_population}};
}

json overlap_json(const OverlapStats& stats) {
    return {{"shared", stats.shared},
            {"left_only", stats.left_only},
            {"right_only", stats.right_only},
            {"left_size", stats.left_size},
            {"right_size", stats.right_size},
            {"shared_fraction_left", stats.shared_fraction_left},
            {"shared_fraction_right", stats.shared_fraction_right}};
}

std::string stats_report_csv(const CorpusStats& stats) {
    std::string out = "table,metric,value\n";
    auto row = [&](const std::string& table, const std::string& metric, const std::string& value) {
        out += table + "," + metric + "," + value + "\n";
    };
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    // Percentages render to one decimal place; raw fractions stay full
    // precision in the JSON report.
    auto pct = [](double fraction) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
        return std::string(buf);
    };
    const DatasetOverview& ov = stats.overview;
    row("overview", "total_lexemes", std::to_string(ov.total_lexemes));
    row("overview", "total_senses", std::to_string(ov.total_senses));
    if (ov.mean_senses_all) row("overview", "mean_senses", num(*ov.mean_senses_all));
    row("overview", "max_senses", std::to_string(ov.max_senses));
    row("overview", "etymology_count", std::to_string(ov.etymology_count));
    row("overview", "etymology_fraction", num(ov.etymology_fraction));
    row("overview", "encyclopedia_count", std::to_string(ov.encyclopedia_count));
    row("overview", "encyclopedia_fraction", num(ov.encyclopedia_fraction));
    row("overview", "single_word_count", std::to_string(ov.single_word_count));
    row("overview", "mwe_count", std::to_string(ov.mwe_count));
    for (const auto& b : stats.pos_distribution.buckets) {
        row("pos_distribution", b.label + "_count", std::to_string(b.count));
        row("pos_distribution", b.label + "_percent", pct(b.fraction));
    }
    for (const auto& b : stats.polysemy.buckets.buckets) {
        row("polysemy", b.label + "_count", std::to_string(b.count));
        row("polysemy", b.label + "_percent", pct(b.fraction));
    }
    row("polysemy", "zero_sense_count", std::to_string(stats.polysemy.zero_sense_count));
    auto cov_rows = [&](const std::string& name, const RelationCoverage& rc) {
        row("coverage", name + "_coverage", num(rc.coverage));
        if (rc.mean_when_present) row("coverage", name + "_mean", num(*rc.mean_when_present));
    };
    cov_rows("synonyms", stats.coverage.synonyms);
    cov_rows("antonyms", stats.coverage.antonyms);
    cov_rows("hypernyms", stats.coverage.hypernyms);
    cov_rows("hyponyms", stats.coverage.hyponyms);
    cov_rows("examples", stats.coverage.examples);
    row("text_length", "definition_mean_chars", num(stats.text_length.definition_chars.mean));
    row("text_length", "definition_median_chars", num(stats.text_length.definition_chars.median));
    row("text_length", "encyclopedia_mean_words", num(stats.text_length.encyclopedia_words.mean));
    row("text_length", "encyclopedia_median_words",
        num(stats.text_length.encyclopedia_words.median));
    return out;
}

}  // namespace opengloss
