#include <doctest.h>

#include <algorithm>
#include <map>

#include "opengloss/qa.hpp"

#include "helpers.hpp"

using namespace opengloss;
using nlohmann::json;

namespace {

LexemeEntry bare_entry(const std::string& lemma) {
    LexemeEntry entry;
    entry.lemma = lemma;
    PartOfSpeechEntry pe;
    pe.pos = PartOfSpeech::Noun;
    LexicalSense sense;
    sense.definition = "about " + lemma;
    pe.senses.push_back(sense);
    entry.pos_entries.push_back(pe);
    return entry;
}

std::filesystem::path make_population(const testutil::TempDir& dir, int n) {
    std::vector<LexemeEntry> entries;
    for (int i = 0; i < n; ++i) entries.push_back(bare_entry("w" + std::to_string(100 + i)));
    return testutil::write_shard(dir, "population.jsonl", entries);
}

}  // namespace

TEST_CASE("sampling is uniform without replacement and seed-reproducible") {
    testutil::TempDir dir("sample");
    auto shard = make_population(dir, 100);
    LemmaIndex index = build_lemma_index({shard});

    auto a = sample_lemmas(index, 10, 7);
    auto b = sample_lemmas(index, 10, 7);
    CHECK(a == b);
    auto c = sample_lemmas(index, 10, 8);
    CHECK(a != c);

    std::set<std::string> unique(a.begin(), a.end());
    CHECK(unique.size() == 10);  // without replacement

    auto everything = sample_lemmas(index, 100, 3);
    std::set<std::string> all(everything.begin(), everything.end());
    CHECK(all.size() == 100);

    CHECK_THROWS_AS(sample_lemmas(index, 101, 1), std::invalid_argument);
}

TEST_CASE("sample_entries returns entries in sample order") {
    testutil::TempDir dir("sampler");
    auto shard = make_population(dir, 30);
    LemmaIndex index = build_lemma_index({shard});
    auto lemmas = sample_lemmas(index, 12, 99);
    auto entries = sample_entries({shard}, index, 12, 99);
    REQUIRE(entries.size() == lemmas.size());
    for (std::size_t i = 0; i < lemmas.size(); ++i) CHECK(entries[i].lemma == lemmas[i]);
}

TEST_CASE("chi-square uniformity of single draws over a 100-lemma fixture") {
    testutil::TempDir dir("chisq");
    auto shard = make_population(dir, 100);
    LemmaIndex index = build_lemma_index({shard});

    std::map<std::string, std::int64_t> counts;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        auto pick = sample_lemmas(index, 1, static_cast<std::uint64_t>(i) + 1);
        ++counts[pick[0]];
    }
    double expected = static_cast<double>(draws) / 100.0;
    double chi2 = 0.0;
    for (const auto& [lemma, slot] : index.slots) {
        double observed = counts.count(lemma) ? static_cast<double>(counts.at(lemma)) : 0.0;
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    // 99 degrees of freedom, alpha 0.001 -> critical value 148.23.
    CHECK(chi2 < 148.23);
}

TEST_CASE("inflected-form heuristics recover bases through the vocabulary") {
    std::set<std::string> vocabulary = {"run", "dog", "bake", "tall", "ring"};

    auto issues = rule_check_structure(bare_entry("running"), vocabulary);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == QaFlagKind::InflectedForm);
    CHECK(issues[0].design_aligned);
    CHECK(issues[0].dimension == QaDimension::HeadwordStructure);
    CHECK(issues[0].note.find("'run'") != std::string::npos);

    CHECK(rule_check_structure(bare_entry("dogs"), vocabulary).size() == 1);
    CHECK(rule_check_structure(bare_entry("baked"), vocabulary).size() == 1);
    CHECK(rule_check_structure(bare_entry("tallest"), vocabulary).size() == 1);

    // "ring" must not recover the implausible base "r".
    CHECK(rule_check_structure(bare_entry("ring"), vocabulary).empty());
    CHECK(rule_check_structure(bare_entry("stone"), vocabulary).empty());
}

TEST_CASE("proper-noun heuristic: leading uppercase without a lowercase headword") {
    std::set<std::string> vocabulary = {"polish"};
    auto issues = rule_check_structure(bare_entry("London"), vocabulary);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == QaFlagKind::ProperNoun);
    CHECK(issues[0].design_aligned);

    // "Polish" has a lowercase counterpart in the vocabulary: not flagged.
    CHECK(rule_check_structure(bare_entry("Polish"), vocabulary).empty());
}

TEST_CASE("verdict derivation is pure over the issue multiset") {
    QaIssue minor{QaDimension::Synonym, QaSeverity::Minor, "m", false, QaFlagKind::None};
    QaIssue major{QaDimension::Hyponym, QaSeverity::Major, "M", false, QaFlagKind::None};
    QaIssue aligned{QaDimension::HeadwordStructure, QaSeverity::Major, "d", true,
                    QaFlagKind::InflectedForm};

    for (QaPolicy policy : {QaPolicy::StrictTraditional, QaPolicy::WordnetAligned}) {
        CHECK(derive_verdict({}, policy) == QaVerdict::Pass);
        CHECK(derive_verdict({minor}, policy) == QaVerdict::NeedsReview);
        CHECK(derive_verdict({major}, policy) == QaVerdict::Flagged);
        CHECK(derive_verdict({minor, major}, policy) == QaVerdict::Flagged);
    }
}

TEST_CASE("design-aligned issues alone never flag under wordnet-aligned policy") {
    // Exhaustive over issue-set compositions of the three issue kinds.
    QaIssue minor{QaDimension::Synonym, QaSeverity::Minor, "m", false, QaFlagKind::None};
    QaIssue major{QaDimension::Hyponym, QaSeverity::Major, "M", false, QaFlagKind::None};
    QaIssue inflected{QaDimension::HeadwordStructure, QaSeverity::Major, "d", true,
                      QaFlagKind::InflectedForm};
    QaIssue proper{QaDimension::HeadwordStructure, QaSeverity::Major, "p", true,
                   QaFlagKind::ProperNoun};

    for (int mask = 0; mask < 16; ++mask) {
        std::vector<QaIssue> issues;
        if (mask & 1) issues.push_back(minor);
        if (mask & 2) issues.push_back(major);
        if (mask & 4) issues.push_back(inflected);
        if (mask & 8) issues.push_back(proper);
        bool only_design = !issues.empty() && !(mask & 1) && !(mask & 2);
        bool any_design = (mask & 4) || (mask & 8);

        QaVerdict aligned = derive_verdict(issues, QaPolicy::WordnetAligned);
        if (only_design) {
            CHECK(aligned == QaVerdict::NeedsReview);  // downgraded, never flagged
        }
        if (mask & 2) {
            CHECK(aligned == QaVerdict::Flagged);  // hard majors still flag
        }

        QaVerdict strict = derive_verdict(issues, QaPolicy::StrictTraditional);
        if (any_design || (mask & 2)) {
            CHECK(strict == QaVerdict::Flagged);  // conservative behavior
        }
    }
}

namespace {

class ScriptedJudge : public GenerationBackend {
public:
    explicit ScriptedJudge(json issues) : issues_(std::move(issues)) {}
    std::string generate(AgentRole, const json&, const SamplingParams&) override {
        return json{{"issues", issues_}, {"summary", "scripted"}}.dump();
    }

private:
    json issues_;
};

class BrokenJudge : public GenerationBackend {
public:
    std::string generate(AgentRole, const json&, const SamplingParams&) override {
        ++calls;
        throw TransportError("judge offline");
    }
    int calls = 0;
};

}  // namespace

TEST_CASE("judge_entry merges scripted issues with rule checks") {
    std::set<std::string> vocabulary = {"stone"};
    ScriptedJudge clean(json::array());
    QaResult pass = judge_entry(bare_entry("stone"), clean, vocabulary);
    CHECK(pass.verdict == QaVerdict::Pass);
    CHECK(pass.issues.empty());

    ScriptedJudge harsh(json::array(
        {{{"dimension", "hyponym"}, {"severity", "major"}, {"note", "wrong taxon"}}}));
    QaResult flagged = judge_entry(bare_entry("stone"), harsh, vocabulary);
    CHECK(flagged.verdict == QaVerdict::Flagged);
    REQUIRE(flagged.issues.size() == 1);
    CHECK(flagged.issues[0].dimension == QaDimension::Hyponym);
}

TEST_CASE("judge transport failure parks the entry as needs-review with a note") {
    std::set<std::string> vocabulary = {"stone"};
    BrokenJudge broken;
    QaResult result = judge_entry(bare_entry("stone"), broken, vocabulary,
                                  QaPolicy::WordnetAligned, {3});
    CHECK(result.verdict == QaVerdict::NeedsReview);
    CHECK(result.transport_note.has_value());
    CHECK(broken.calls == 3);
}

TEST_CASE("gold set: replay judge verdicts match the hand labels") {
    std::filesystem::path root = std::filesystem::path(OPENGLOSS_FIXTURES_DIR) / "qa_gold";
    json labels_doc = json::parse(testutil::slurp(root / "labels.json"));
    REQUIRE(labels_doc["policy"] == "wordnet-aligned");
    const json& labels = labels_doc["labels"];
    REQUIRE(labels.size() == 20);

    LemmaIndex index = build_lemma_index({root / "entries.jsonl"});
    std::map<std::string, LexemeEntry> entries;
    for_each_entry({root / "entries.jsonl"},
                   [&](const LexemeEntry& e) { entries[e.lemma] = e; });

    ReplayBackend judge(root / "judge");
    int agreements = 0;
    for (auto it = labels.begin(); it != labels.end(); ++it) {
        REQUIRE(entries.count(it.key()) == 1);
        QaResult result = judge_entry(entries.at(it.key()), judge, index.vocabulary,
                                      QaPolicy::WordnetAligned);
        QaVerdict expected = *parse_qa_verdict(it.value().get<std::string>());
        if (result.verdict == expected) {
            ++agreements;
        } else {
            MESSAGE("disagreement on '" << it.key() << "': got " << to_string(result.verdict)
                                        << ", labeled " << to_string(expected));
        }
    }
    CHECK(agreements >= 18);
}

TEST_CASE("aggregate: all-pass profile") {
    std::vector<QaResult> results;
    for (int i = 0; i < 5; ++i) {
        QaResult r;
        r.lemma = "w" + std::to_string(i);
        r.verdict = QaVerdict::Pass;
        results.push_back(r);
    }
    QaReport report = aggregate_report(results);
    CHECK(report.sample_size == 5);
    CHECK(report.verdict_counts.at(QaVerdict::Pass) == 5);
    CHECK(report.verdict_fractions.at(QaVerdict::Pass) == doctest::Approx(1.0));
    for (const auto& [dim, count] : report.dimension_flag_counts) CHECK(count == 0);
    CHECK(report.design_aligned_union == 0);
    CHECK(report.multi_flag_overlap == doctest::Approx(0.0));
    CHECK(report.all_core_content_clean == 5);
}

TEST_CASE("aggregate: multi-flag overlap over flagged entries") {
    QaIssue syn{QaDimension::Synonym, QaSeverity::Major, "", false, QaFlagKind::None};
    QaIssue ant{QaDimension::Antonym, QaSeverity::Major, "", false, QaFlagKind::None};
    QaResult a{"a", QaVerdict::Flagged, {syn, ant}, std::nullopt};
    QaResult b{"b", QaVerdict::Flagged, {syn}, std::nullopt};
    QaReport report = aggregate_report({a, b});
    CHECK(report.multi_flag_overlap == doctest::Approx(0.5));
    CHECK(report.dimension_flag_counts.at(QaDimension::Synonym) == 2);
    CHECK(report.dimension_flag_counts.at(QaDimension::Antonym) == 1);
    CHECK(report.dimension_clean_fractions.at(QaDimension::Antonym) == doctest::Approx(0.5));
}

TEST_CASE("aggregation is permutation-invariant") {
    testutil::Rng rng{17};
    std::vector<QaResult> results;
    for (int i = 0; i < 24; ++i) {
        QaResult r;
        r.lemma = "w" + std::to_string(i);
        int k = static_cast<int>(rng.below(3));
        r.verdict = k == 0 ? QaVerdict::Pass : k == 1 ? QaVerdict::NeedsReview : QaVerdict::Flagged;
        if (rng.chance(50)) {
            r.issues.push_back({QaDimension::Definition, QaSeverity::Minor, "", false,
                                QaFlagKind::None});
        }
        if (rng.chance(30)) {
            r.issues.push_back({QaDimension::HeadwordStructure, QaSeverity::Major, "", true,
                                QaFlagKind::InflectedForm});
        }
        results.push_back(r);
    }
    QaReport forward = aggregate_report(results);
    std::reverse(results.begin(), results.end());
    QaReport backward = aggregate_report(results);
    CHECK(qa_report_json(forward) == qa_report_json(backward));
}

TEST_CASE("report emitters cover counts and the table layout") {
    QaIssue inflected{QaDimension::HeadwordStructure, QaSeverity::Major, "", true,
                      QaFlagKind::InflectedForm};
    QaIssue proper{QaDimension::HeadwordStructure, QaSeverity::Major, "", true,
                   QaFlagKind::ProperNoun};
    QaResult a{"running", QaVerdict::NeedsReview, {inflected}, std::nullopt};
    QaResult b{"London", QaVerdict::NeedsReview, {proper}, std::nullopt};
    QaResult c{"both", QaVerdict::NeedsReview, {inflected, proper}, std::nullopt};
    QaReport report = aggregate_report({a, b, c});
    CHECK(report.inflected_count == 2);
    CHECK(report.proper_noun_count == 2);
    CHECK(report.design_aligned_union == 3);

    json doc = qa_report_json(report);
    CHECK(doc["sample_size"] == 3);
    CHECK(doc["inflected_count"] == 2);
    std::string text = qa_report_text(report);
    CHECK(text.find("Inflected forms") != std::string::npos);
    CHECK(text.find("Either (union)") != std::string::npos);
}
