#include "opengloss/qa.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "opengloss/json_io.hpp"
#include "opengloss/normalize.hpp"

namespace opengloss {

using nlohmann::json;

std::string_view to_string(QaVerdict verdict) {
    switch (verdict) {
        case QaVerdict::Pass: return "pass";
        case QaVerdict::NeedsReview: return "needs_review";
        case QaVerdict::Flagged: return "flagged";
    }
    return "pass";
}

std::optional<QaVerdict> parse_qa_verdict(std::string_view text) {
    for (QaVerdict v : {QaVerdict::Pass, QaVerdict::NeedsReview, QaVerdict::Flagged}) {
        if (text == to_string(v)) return v;
    }
    return std::nullopt;
}

std::string_view to_string(QaDimension dimension) {
    switch (dimension) {
        case QaDimension::HeadwordStructure: return "headword-structure";
        case QaDimension::Definition: return "definition";
        case QaDimension::Encyclopedia: return "encyclopedia";
        case QaDimension::Etymology: return "etymology";
        case QaDimension::Examples: return "examples";
        case QaDimension::Hypernym: return "hypernym";
        case QaDimension::Hyponym: return "hyponym";
        case QaDimension::Synonym: return "synonym";
        case QaDimension::Antonym: return "antonym";
    }
    return "definition";
}

namespace {

constexpr QaDimension kAllDimensions[] = {
    QaDimension::HeadwordStructure, QaDimension::Definition, QaDimension::Encyclopedia,
    QaDimension::Etymology,         QaDimension::Examples,   QaDimension::Hypernym,
    QaDimension::Hyponym,           QaDimension::Synonym,    QaDimension::Antonym};

}  // namespace

std::optional<QaDimension> parse_qa_dimension(std::string_view text) {
    for (QaDimension d : kAllDimensions) {
        if (text == to_string(d)) return d;
    }
    return std::nullopt;
}

std::string_view to_string(QaSeverity severity) {
    return severity == QaSeverity::Major ? "major" : "minor";
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

struct SampleRng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

}  // namespace

std::vector<std::string> sample_lemmas(const LemmaIndex& index, std::size_t n,
                                       std::uint64_t seed) {
    if (n > index.slots.size()) {
        throw std::invalid_argument("sample size " + std::to_string(n) +
                                    " exceeds population " + std::to_string(index.slots.size()));
    }
    std::vector<std::string> lemmas;
    lemmas.reserve(index.slots.size());
    for (const auto& [lemma, slot] : index.slots) lemmas.push_back(lemma);

    // Partial Fisher-Yates with a fixed generator keeps draws reproducible
    // across platforms.
    SampleRng rng{seed ^ 0x5851f42d4c957f2dULL};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next() % (lemmas.size() - i));
        std::swap(lemmas[i], lemmas[j]);
    }
    lemmas.resize(n);
    return lemmas;
}

std::vector<LexemeEntry> sample_entries(const std::vector<std::filesystem::path>& shards,
                                        const LemmaIndex& index, std::size_t n,
                                        std::uint64_t seed) {
    std::vector<std::string> wanted = sample_lemmas(index, n, seed);
    std::unordered_set<std::string> wanted_set(wanted.begin(), wanted.end());
    std::map<std::string, LexemeEntry> found;
    for_each_entry(shards, [&](const LexemeEntry& entry) {
        if (wanted_set.count(entry.lemma)) found[entry.lemma] = entry;  // last wins, as indexed
    });
    std::vector<LexemeEntry> out;
    out.reserve(wanted.size());
    for (const auto& lemma : wanted) {
        auto it = found.find(lemma);
        if (it != found.end()) out.push_back(it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural rule checks

namespace {

// Candidate base forms for a stripped suffix, lexicographic recovery only.
std::vector<std::string> base_candidates(const std::string& lemma, const std::string& suffix) {
    if (lemma.size() <= suffix.size() || !lemma.ends_with(suffix)) return {};
    std::string stem = lemma.substr(0, lemma.size() - suffix.size());
    if (codepoint_count(stem) < 2) return {};  // "ring" must not recover base "r"
    std::vector<std::string> out{stem};
    if (suffix != "s" && suffix != "es") {
        out.push_back(stem + "e");  // baked -> bake
    }
    if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
        out.push_back(stem.substr(0, stem.size() - 1));  // running -> run
    }
    return out;
}

}  // namespace

std::vector<QaIssue> rule_check_structure(const LexemeEntry& entry,
                                          const std::set<std::string>& vocabulary) {
    std::vector<QaIssue> issues;
    const std::string& lemma = entry.lemma;

    static const char* const suffixes[] = {"es", "s", "ed", "ing", "er", "est"};
    std::optional<std::string> base;
    for (const char* suffix : suffixes) {
        for (const auto& candidate : base_candidates(lemma, suffix)) {
            if (candidate != lemma && vocabulary.count(candidate)) {
                base = candidate;
                break;
            }
        }
        if (base) break;
    }
    if (base) {
        QaIssue issue;
        issue.dimension = QaDimension::HeadwordStructure;
        issue.severity = QaSeverity::Major;
        issue.design_aligned = true;
        issue.kind = QaFlagKind::InflectedForm;
        issue.note = "headword looks like an inflected form of '" + *base + "'";
        issues.push_back(std::move(issue));
    }

    if (starts_uppercase(lemma)) {
        std::string lowered = to_lower(lemma);
        if (lowered != lemma && !vocabulary.count(lowered)) {
            QaIssue issue;
            issue.dimension = QaDimension::HeadwordStructure;
            issue.severity = QaSeverity::Major;
            issue.design_aligned = true;
            issue.kind = QaFlagKind::ProperNoun;
            issue.note = "headword looks like a proper noun";
            issues.push_back(std::move(issue));
        }
    }
    return issues;
}

// ---------------------------------------------------------------------------
// Verdicts

QaVerdict derive_verdict(const std::vector<QaIssue>& issues, QaPolicy policy) {
    bool any = false;
    bool hard_major = false;
    bool design_aligned = false;
    for (const auto& issue : issues) {
        any = true;
        if (issue.design_aligned) {
            design_aligned = true;
        } else if (issue.severity == QaSeverity::Major) {
            hard_major = true;
        }
    }
    if (hard_major) return QaVerdict::Flagged;
    if (design_aligned && policy == QaPolicy::StrictTraditional) return QaVerdict::Flagged;
    if (any) return QaVerdict::NeedsReview;
    return QaVerdict::Pass;
}

QaResult judge_entry(const LexemeEntry& entry, GenerationBackend& judge,
                     const std::set<std::string>& vocabulary, QaPolicy policy,
                     const RetryPolicy& retry) {
    QaResult result;
    result.lemma = entry.lemma;
    result.issues = rule_check_structure(entry, vocabulary);

    json context = {{"lemma", entry.lemma},
                    {"entry", entry_to_json(entry)},
                    {"instructions", std::string(prompt_template(AgentRole::QaJudge))}};

    int max_attempts = std::max(1, retry.max_attempts);
    std::vector<std::string> diagnostics;
    bool judged = false;
    for (int attempt = 1; attempt <= max_attempts && !judged; ++attempt) {
        json ctx = context;
        ctx["attempt"] = attempt;
        ctx["requirements"] = diagnostics;
        std::string raw;
        try {
            raw = judge.generate(AgentRole::QaJudge, ctx,
                                 default_sampling_params(AgentRole::QaJudge));
        } catch (const TransportError& e) {
            diagnostics.push_back(e.what());
            continue;
        }
        json doc = json::parse(raw, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("issues") ||
            !doc["issues"].is_array()) {
            diagnostics.push_back("judge output must be a JSON object with an 'issues' array");
            continue;
        }
        bool parsed_all = true;
        std::vector<QaIssue> judged_issues;
        for (const auto& item : doc["issues"]) {
            if (!item.is_object()) {
                parsed_all = false;
                break;
            }
            auto dimension = parse_qa_dimension(item.value("dimension", ""));
            std::string severity_text = item.value("severity", "");
            if (!dimension || (severity_text != "minor" && severity_text != "major")) {
                parsed_all = false;
                break;
            }
            QaIssue issue;
            issue.dimension = *dimension;
            issue.severity = severity_text == "major" ? QaSeverity::Major : QaSeverity::Minor;
            issue.note = item.value("note", "");
            judged_issues.push_back(std::move(issue));
        }
        if (!parsed_all) {
            diagnostics.push_back("judge issue entries need a known dimension and minor/major severity");
            continue;
        }
        for (auto& issue : judged_issues) result.issues.push_back(std::move(issue));
        judged = true;
    }

    if (!judged) {
        // Judge never produced a usable assessment: park the entry for
        // human review rather than inventing a verdict.
        result.transport_note =
            diagnostics.empty() ? "judge unavailable" : diagnostics.back();
        result.verdict = QaVerdict::NeedsReview;
        if (derive_verdict(result.issues, policy) == QaVerdict::Flagged) {
            result.verdict = QaVerdict::Flagged;
        }
        return result;
    }

    result.verdict = derive_verdict(result.issues, policy);
    return result;
}

// ---------------------------------------------------------------------------
// Aggregation

QaReport aggregate_report(const std::vector<QaResult>& results) {
    QaReport report;
    report.sample_size = static_cast<std::int64_t>(results.size());
    for (QaVerdict v : {QaVerdict::Pass, QaVerdict::NeedsReview, QaVerdict::Flagged}) {
        report.verdict_counts[v] = 0;
    }
    for (QaDimension d : kAllDimensions) report.dimension_flag_counts[d] = 0;

    std::int64_t multi_flag = 0;
    std::int64_t flagged_total = 0;
    for (const auto& result : results) {
        ++report.verdict_counts[result.verdict];
        std::set<QaDimension> dims;
        bool inflected = false, proper = false, aligned = false;
        for (const auto& issue : result.issues) {
            dims.insert(issue.dimension);
            if (issue.kind == QaFlagKind::InflectedForm) inflected = true;
            if (issue.kind == QaFlagKind::ProperNoun) proper = true;
            if (issue.design_aligned) aligned = true;
        }
        for (QaDimension d : dims) ++report.dimension_flag_counts[d];
        if (inflected) ++report.inflected_count;
        if (proper) ++report.proper_noun_count;
        if (aligned) ++report.design_aligned_union;
        bool core_clean = !dims.count(QaDimension::Definition) &&
                          !dims.count(QaDimension::Encyclopedia) &&
                          !dims.count(QaDimension::Etymology) &&
                          !dims.count(QaDimension::Examples);
        if (core_clean) ++report.all_core_content_clean;
        if (result.verdict == QaVerdict::Flagged) {
            ++flagged_total;
            if (dims.size() >= 2) ++multi_flag;
        }
    }
    if (report.sample_size > 0) {
        for (const auto& [v, count] : report.verdict_counts) {
            report.verdict_fractions[v] =
                static_cast<double>(count) / static_cast<double>(report.sample_size);
        }
        for (const auto& [d, count] : report.dimension_flag_counts) {
            report.dimension_clean_fractions[d] =
                1.0 - static_cast<double>(count) / static_cast<double>(report.sample_size);
        }
    }
    if (flagged_total > 0) {
        report.multi_flag_overlap =
            static_cast<double>(multi_flag) / static_cast<double>(flagged_total);
    }
    return report;
}

json qa_report_json(const QaReport& report) {
    json verdicts = json::object();
    for (const auto& [v, count] : report.verdict_counts) {
        verdicts[std::string(to_string(v))] = {
            {"count", count},
            {"fraction", report.verdict_fractions.count(v) ? report.verdict_fractions.at(v) : 0.0}};
    }
    json dimensions = json::object();
    for (const auto& [d, count] : report.dimension_flag_counts) {
        dimensions[std::string(to_string(d))] = {
            {"flagged", count},
            {"clean_fraction", report.dimension_clean_fractions.count(d)
                                   ? report.dimension_clean_fractions.at(d)
                                   : 1.0}};
    }
    return {{"sample_size", report.sample_size},
            {"verdicts", std::move(verdicts)},
            {"dimensions", std::move(dimensions)},
            {"inflected_count", report.inflected_count},
            {"proper_noun_count", report.proper_noun_count},
            {"design_aligned_union", report.design_aligned_union},
            {"all_core_content_clean", report.all_core_content_clean},
            {"multi_flag_overlap", report.multi_flag_overlap}};
}

std::string qa_report_text(const QaReport& report) {
    std::ostringstream os;
    auto pct = [&](std::int64_t count) {
        if (report.sample_size == 0) return 0.0;
        return 100.0 * static_cast<double>(count) / static_cast<double>(report.sample_size);
    };
    auto row = [&](const std::string& label, std::int64_t count, double percent) {
        os << "  " << label;
        for (std::size_t i = label.size(); i < 36; ++i) os << ' ';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%8lld  %5.1f%%", static_cast<long long>(count), percent);
        os << buf << '\n';
    };

    os << "Quality profile (" << report.sample_size << " entries)\n";
    os << "Overall\n";
    row("High confidence (pass)", report.verdict_counts.at(QaVerdict::Pass),
        pct(report.verdict_counts.at(QaVerdict::Pass)));
    row("Acceptable, minor issues", report.verdict_counts.at(QaVerdict::NeedsReview),
        pct(report.verdict_counts.at(QaVerdict::NeedsReview)));
    row("Flagged for analysis", report.verdict_counts.at(QaVerdict::Flagged),
        pct(report.verdict_counts.at(QaVerdict::Flagged)));
    os << "Design-aligned structure findings\n";
    row("Inflected forms", report.inflected_count, pct(report.inflected_count));
    row("Proper nouns", report.proper_noun_count, pct(report.proper_noun_count));
    row("Either (union)", report.design_aligned_union, pct(report.design_aligned_union));
    os << "Per-dimension flags\n";
    for (QaDimension d : kAllDimensions) {
        row(std::string(to_string(d)) + " flags", report.dimension_flag_counts.at(d),
            pct(report.dimension_flag_counts.at(d)));
    }
    os << "Core content\n";
    row("All core content clean", report.all_core_content_clean,
        pct(report.all_core_content_clean));
    char buf[64];
    std::snprintf(buf, sizeof buf, "  Multi-flag overlap among flagged: %5.1f%%\n",
                  100.0 * report.multi_flag_overlap);
    os << buf;
    return os.str();
}

}  // namespace opengloss
