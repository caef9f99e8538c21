#include "opengloss/validate.hpp"

#include <set>
#include <sstream>

#include "opengloss/normalize.hpp"

namespace opengloss {

std::string_view to_string(Severity severity) {
    switch (severity) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Coverage: return "coverage";
    }
    return "warning";
}

namespace {

struct Collector {
    ValidationOutcome out;
    ValidationMode mode;

    void add(Severity sev, std::string field, std::string message) {
        out.issues.push_back({sev, std::move(field), std::move(message)});
    }
    // Generation-time contract breach: hard in strict mode, downgraded on
    // ingestion.
    void arity(std::string field, std::string message, Severity lenient_sev = Severity::Warning) {
        Severity sev = mode == ValidationMode::GenerationStrict ? Severity::Error : lenient_sev;
        add(sev, std::move(field), std::move(message));
    }
};

std::string path(std::string_view base, std::size_t i, std::string_view tail = {}) {
    std::ostringstream os;
    os << base << '[' << i << ']';
    if (!tail.empty()) os << '.' << tail;
    return os.str();
}

void check_lemma_list(Collector& c, const std::vector<std::string>& items, const std::string& field) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        std::string norm = normalize_lemma_lenient(item);
        if (!seen.insert(norm).second) {
            c.arity(field, "duplicate item '" + norm + "' after normalization");
        }
    }
}

void check_sense(Collector& c, const LexicalSense& sense, const std::string& base) {
    if (sense.definition.empty()) {
        c.arity(base + ".definition", "definition is empty");
    }
    if (c.mode == ValidationMode::GenerationStrict) {
        if (sense.examples.size() < 1 || sense.examples.size() > 3) {
            c.add(Severity::Error, base + ".examples",
                  "example count " + std::to_string(sense.examples.size()) + " outside 1-3");
        }
        if (sense.synonyms.size() < 3 || sense.synonyms.size() > 5) {
            c.add(Severity::Error, base + ".synonyms",
                  "synonym count " + std::to_string(sense.synonyms.size()) + " outside 3-5");
        }
    } else {
        if (sense.examples.empty()) {
            c.add(Severity::Coverage, base + ".examples", "sense has no usage examples");
        } else if (sense.examples.size() > 3) {
            c.add(Severity::Warning, base + ".examples",
                  "example count " + std::to_string(sense.examples.size()) + " above 3");
        }
        // Synonym arity is a generation-time contract only; observed data
        // runs lower and is accepted as-is.
    }
    check_lemma_list(c, sense.synonyms, base + ".synonyms");
    check_lemma_list(c, sense.antonyms, base + ".antonyms");
    check_lemma_list(c, sense.hypernyms, base + ".hypernyms");
    check_lemma_list(c, sense.hyponyms, base + ".hyponyms");
}

void check_pos_entry(Collector& c, const LexemeEntry& entry, const PartOfSpeechEntry& pe,
                     const std::string& base) {
    if (pe.senses.size() < 1 || pe.senses.size() > 4) {
        c.arity(base + ".senses", "sense count " + std::to_string(pe.senses.size()) +
                                      (pe.senses.size() > 4 ? " > 4" : " < 1"));
    }
    for (std::size_t i = 0; i < pe.senses.size(); ++i) {
        check_sense(c, pe.senses[i], path(base + ".senses", i));
    }

    if (pe.collocations.size() < 3 || pe.collocations.size() > 6) {
        c.arity(base + ".collocations",
                "collocation count " + std::to_string(pe.collocations.size()) + " outside 3-6",
                Severity::Coverage);
    }

    std::set<std::pair<std::string, std::string>> inflection_pairs;
    for (std::size_t i = 0; i < pe.morphology.inflections.size(); ++i) {
        const auto& infl = pe.morphology.inflections[i];
        if (infl.form == entry.lemma) {
            c.arity(path(base + ".morphology.inflections", i), "form equals owning lemma");
        }
        if (!inflection_pairs.insert({infl.form, infl.feature}).second) {
            c.arity(path(base + ".morphology.inflections", i),
                    "duplicate (form, feature) pair '" + infl.form + "', '" + infl.feature + "'");
        }
    }
    for (std::size_t i = 0; i < pe.morphology.derivations.size(); ++i) {
        if (pe.morphology.derivations[i].form == entry.lemma) {
            c.arity(path(base + ".morphology.derivations", i), "form equals owning lemma");
        }
    }
}

}  // namespace

ValidationOutcome validate_entry(const LexemeEntry& entry, ValidationMode mode) {
    Collector c{.out = {}, .mode = mode};

    if (entry.lemma.empty()) {
        c.add(Severity::Error, "lemma", "lemma is empty");
    } else if (normalize_lemma_lenient(entry.lemma) != entry.lemma) {
        c.add(Severity::Error, "lemma", "lemma is not in normalized form");
    }

    std::set<PartOfSpeech> seen_pos;
    for (std::size_t i = 0; i < entry.pos_entries.size(); ++i) {
        const auto& pe = entry.pos_entries[i];
        if (!seen_pos.insert(pe.pos).second) {
            c.add(Severity::Error, path("pos_entries", i, "pos"),
                  std::string("duplicate part of speech '") + std::string(to_string(pe.pos)) + "'");
        }
        check_pos_entry(c, entry, pe, path("pos_entries", i));
    }

    if (!entry.etymology.has_value()) {
        // Stopwords are exempt from etymology enrichment.
        if (!entry.is_stopword) {
            c.add(Severity::Coverage, "etymology", "entry has no etymology");
        }
    }
    if (!entry.encyclopedia.has_value()) {
        c.add(Severity::Coverage, "encyclopedia", "entry has no encyclopedia");
    } else {
        std::int64_t recomputed = count_words(entry.encyclopedia->body);
        if (entry.encyclopedia->word_count != recomputed) {
            c.add(Severity::Warning, "encyclopedia.word_count",
                  "stored word count " + std::to_string(entry.encyclopedia->word_count) +
                      " != recomputed " + std::to_string(recomputed));
        }
    }

    return std::move(c.out);
}

}  // namespace opengloss
