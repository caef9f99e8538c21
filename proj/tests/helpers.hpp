#pragma once

// Shared test utilities: a portable rng, a procedural entry generator, and
// tempdir/shard helpers.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "opengloss/json_io.hpp"
#include "opengloss/model.hpp"
#include "opengloss/normalize.hpp"

namespace testutil {

struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
    bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
};

inline std::string random_word(Rng& rng) {
    static const char* words[] = {"stone",  "river",  "light",  "cloud", "forest", "meadow",
                                  "copper", "silver", "branch", "petal", "ember",  "valley",
                                  "ridge",  "harbor", "willow", "cedar", "maple",  "reef",
                                  "dune",   "plain",  "crest",  "glade", "marsh",  "tundra"};
    std::string w = words[rng.below(std::size(words))];
    if (rng.chance(25)) w += words[rng.below(std::size(words))];  // compounds
    return w;
}

inline std::vector<std::string> random_words(Rng& rng, int lo, int hi) {
    int n = rng.range(lo, hi);
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(random_word(rng));
    return out;
}

// Arbitrary well-formed-ish entry: exercises optional fields, extras,
// accents, and multi-word lemmas. Not guaranteed to satisfy strict arities.
inline opengloss::LexemeEntry random_entry(Rng& rng) {
    using namespace opengloss;
    LexemeEntry entry;
    entry.lemma = random_word(rng);
    if (rng.chance(20)) entry.lemma += " " + random_word(rng);  // MWE
    if (rng.chance(10)) entry.lemma = "Caf\xC3\xA9 " + entry.lemma;

    int pos_count = rng.range(1, 3);
    auto all = all_parts_of_speech();
    for (int p = 0; p < pos_count; ++p) {
        PartOfSpeechEntry pe;
        pe.pos = all[(rng.below(all.size()) + p * 3) % all.size()];
        bool duplicate = false;
        for (const auto& existing : entry.pos_entries) {
            if (existing.pos == pe.pos) duplicate = true;
        }
        if (duplicate) continue;
        int senses = rng.range(1, 4);
        for (int s = 0; s < senses; ++s) {
            LexicalSense sense;
            sense.definition = "A " + random_word(rng) + " related to " + random_word(rng) + ".";
            sense.synonyms = random_words(rng, 0, 5);
            sense.antonyms = random_words(rng, 0, 3);
            sense.hypernyms = random_words(rng, 0, 4);
            sense.hyponyms = random_words(rng, 0, 4);
            int examples = rng.range(0, 3);
            for (int e = 0; e < examples; ++e) {
                sense.examples.push_back("The " + entry.lemma + " rests by the " +
                                         random_word(rng) + ".");
            }
            pe.senses.push_back(std::move(sense));
        }
        if (rng.chance(70)) {
            pe.morphology.inflections.push_back({entry.lemma + "s", "plural"});
        }
        if (rng.chance(30)) {
            pe.morphology.derivations.push_back({entry.lemma + "ness", PartOfSpeech::Noun});
        }
        pe.collocations = random_words(rng, 0, 6);
        entry.pos_entries.push_back(std::move(pe));
    }

    if (rng.chance(80)) {
        Etymology ety;
        int steps = rng.range(1, 3);
        for (int i = 0; i < steps; ++i) {
            EtymologyStep step{"Latin", random_word(rng) + "us", std::nullopt};
            if (rng.chance(50)) step.gloss = random_word(rng);
            ety.trail.push_back(std::move(step));
        }
        if (rng.chance(40)) ety.cognates.push_back({"Old Norse", random_word(rng)});
        if (rng.chance(25)) {
            ety.components = {entry.lemma.substr(0, entry.lemma.size() / 2) + "-",
                              entry.lemma.substr(entry.lemma.size() / 2)};
        }
        if (rng.chance(30)) ety.notes = "recorded in period dictionaries";
        entry.etymology = std::move(ety);
    }
    if (rng.chance(90)) {
        EncyclopediaEntry enc;
        int words = rng.range(30, 60);
        std::string body = "The " + entry.lemma;
        for (int i = 0; i < words; ++i) body += " " + random_word(rng);
        enc.body = body;
        enc.word_count = opengloss::count_words(body);
        entry.encyclopedia = std::move(enc);
    }
    if (rng.chance(10)) {
        entry.is_stopword = true;
        entry.stopword_reason = "function word";
    }
    entry.metadata.timestamp = "2025-01-01T00:00:00Z";
    entry.metadata.schema_version = "1.0";
    if (rng.chance(40)) {
        entry.extras["source_model"] = "fixture";
        entry.extras["batch"] = static_cast<int>(rng.below(100));
    }
    return entry;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("opengloss_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& line : lines) out << line << '\n';
}

inline std::filesystem::path write_shard(const TempDir& dir, const std::string& name,
                                         const std::vector<opengloss::LexemeEntry>& entries) {
    std::vector<std::string> lines;
    lines.reserve(entries.size());
    for (const auto& entry : entries) lines.push_back(opengloss::serialize_entry(entry));
    auto path = dir.file(name);
    write_lines(path, lines);
    return path;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace testutil
