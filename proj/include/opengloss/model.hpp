#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opengloss/edge_type.hpp"
#include "opengloss/pos.hpp"

namespace opengloss {

// One distinct meaning of a lexeme within one part of speech, together with
// its semantic neighborhood. All relation targets are lemma strings.
struct LexicalSense {
    std::string definition;
    std::vector<std::string> synonyms;
    std::vector<std::string> antonyms;
    std::vector<std::string> hypernyms;
    std::vector<std::string> hyponyms;
    std::vector<std::string> examples;

    bool operator==(const LexicalSense&) const = default;
};

struct Inflection {
    std::string form;
    std::string feature;  // e.g. "plural", "past", "comparative"

    bool operator==(const Inflection&) const = default;
};

struct Derivation {
    std::string form;
    PartOfSpeech target_pos = PartOfSpeech::Noun;

    bool operator==(const Derivation&) const = default;
};

struct Morphology {
    std::vector<Inflection> inflections;
    std::vector<Derivation> derivations;

    bool empty() const { return inflections.empty() && derivations.empty(); }
    bool operator==(const Morphology&) const = default;
};

struct PartOfSpeechEntry {
    PartOfSpeech pos = PartOfSpeech::Noun;
    std::vector<LexicalSense> senses;  // ordered; generation contract 1-4
    Morphology morphology;
    std::vector<std::string> collocations;  // generation contract 3-6

    bool operator==(const PartOfSpeechEntry&) const = default;
};

struct EtymologyStep {
    std::string language;
    std::string form;
    std::optional<std::string> gloss;

    bool operator==(const EtymologyStep&) const = default;
};

struct Cognate {
    std::string language;
    std::string form;

    bool operator==(const Cognate&) const = default;
};

// Historical record. The trail is ordered oldest form first; the last step is
// the immediate precursor of the modern lemma. Cognates live here only and
// never become graph edges. Components record morpheme decomposition
// ("photo-" + "synthesis") and feed morpheme-component edges.
struct Etymology {
    std::vector<EtymologyStep> trail;
    std::vector<Cognate> cognates;
    std::vector<std::string> components;
    std::optional<std::string> notes;

    bool operator==(const Etymology&) const = default;
};

struct EncyclopediaEntry {
    std::string body;
    std::int64_t word_count = 0;  // whitespace-token count of body, derived

    bool operator==(const EncyclopediaEntry&) const = default;
};

struct EntryMetadata {
    std::string timestamp;
    std::string schema_version;
    std::vector<std::string> validation_flags;

    bool operator==(const EntryMetadata&) const = default;
};

inline constexpr std::string_view kSchemaVersion = "1.0";

// Root record for one headword. `extras` is an opaque bag preserving any
// unrecognized top-level fields from the source JSON so that re-serialization
// loses nothing.
struct LexemeEntry {
    std::string lemma;  // normalized
    std::vector<PartOfSpeechEntry> pos_entries;
    std::optional<Etymology> etymology;
    std::optional<EncyclopediaEntry> encyclopedia;
    bool is_stopword = false;
    std::optional<std::string> stopword_reason;
    EntryMetadata metadata;
    nlohmann::json extras = nlohmann::json::object();

    std::size_t sense_count() const {
        std::size_t n = 0;
        for (const auto& pe : pos_entries) n += pe.senses.size();
        return n;
    }

    const PartOfSpeechEntry* find_pos(PartOfSpeech pos) const {
        for (const auto& pe : pos_entries)
            if (pe.pos == pos) return &pe;
        return nullptr;
    }

    bool operator==(const LexemeEntry&) const = default;
};

// A directed, typed relationship between lemmas. Sense-level relations carry
// the owning POS and 0-based sense index; lexeme-level and historical
// relations carry neither.
struct LexemeEdge {
    std::string source;
    std::string target;
    EdgeType relation = EdgeType::Synonym;
    std::optional<PartOfSpeech> source_pos;
    std::optional<std::int32_t> sense_index;
    EdgePriority priority = EdgePriority::Medium;
    std::optional<double> weight;  // opaque; unused by validators

    bool operator==(const LexemeEdge&) const = default;
};

}  // namespace opengloss
