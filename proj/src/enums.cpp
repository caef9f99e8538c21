#include "opengloss/edge_type.hpp"
#include "opengloss/pos.hpp"

namespace opengloss {

std::string_view to_string(PartOfSpeech pos) {
    switch (pos) {
        case PartOfSpeech::Noun: return "noun";
        case PartOfSpeech::Verb: return "verb";
        case PartOfSpeech::Adjective: return "adjective";
        case PartOfSpeech::Adverb: return "adverb";
        case PartOfSpeech::Determiner: return "determiner";
        case PartOfSpeech::Preposition: return "preposition";
        case PartOfSpeech::Conjunction: return "conjunction";
        case PartOfSpeech::Pronoun: return "pronoun";
        case PartOfSpeech::Interjection: return "interjection";
    }
    return "noun";
}

std::optional<PartOfSpeech> parse_part_of_speech(std::string_view text) {
    for (PartOfSpeech pos : all_parts_of_speech()) {
        if (text == to_string(pos)) return pos;
    }
    return std::nullopt;
}

std::string_view to_string(EdgeType type) {
    switch (type) {
        case EdgeType::Synonym: return "synonym";
        case EdgeType::Antonym: return "antonym";
        case EdgeType::Hypernym: return "hypernym";
        case EdgeType::Hyponym: return "hyponym";
        case EdgeType::Collocation: return "collocation";
        case EdgeType::Inflection: return "inflection";
        case EdgeType::NounDerivation: return "noun-derivation";
        case EdgeType::VerbDerivation: return "verb-derivation";
        case EdgeType::AdjectiveDerivation: return "adjective-derivation";
        case EdgeType::AdverbDerivation: return "adverb-derivation";
        case EdgeType::Cognate: return "cognate";
        case EdgeType::MorphemeComponent: return "morpheme-component";
        case EdgeType::EtymologyParent: return "etymology-parent";
    }
    return "synonym";
}

std::optional<EdgeType> parse_edge_type(std::string_view text) {
    for (EdgeType type : all_edge_types()) {
        if (text == to_string(type)) return type;
    }
    return std::nullopt;
}

std::string_view to_string(EdgePriority priority) {
    switch (priority) {
        case EdgePriority::High: return "high";
        case EdgePriority::Medium: return "medium";
        case EdgePriority::Low: return "low";
    }
    return "low";
}

std::optional<EdgePriority> parse_edge_priority(std::string_view text) {
    if (text == "high") return EdgePriority::High;
    if (text == "medium") return EdgePriority::Medium;
    if (text == "low") return EdgePriority::Low;
    return std::nullopt;
}

EdgeCategory edge_category(EdgeType type) {
    switch (type) {
        case EdgeType::Synonym:
        case EdgeType::Antonym:
        case EdgeType::Hypernym:
        case EdgeType::Hyponym:
            return EdgeCategory::SenseLevel;
        case EdgeType::Collocation:
        case EdgeType::Inflection:
        case EdgeType::NounDerivation:
        case EdgeType::VerbDerivation:
        case EdgeType::AdjectiveDerivation:
        case EdgeType::AdverbDerivation:
            return EdgeCategory::LexemeLevel;
        case EdgeType::Cognate:
        case EdgeType::MorphemeComponent:
        case EdgeType::EtymologyParent:
            return EdgeCategory::Historical;
    }
    return EdgeCategory::Historical;
}

EdgePriority classify_priority(EdgeType type) {
    switch (type) {
        case EdgeType::Hypernym:
        case EdgeType::Hyponym:
        case EdgeType::Antonym:
            return EdgePriority::High;
        case EdgeType::Synonym:
        case EdgeType::NounDerivation:
        case EdgeType::VerbDerivation:
        case EdgeType::AdjectiveDerivation:
        case EdgeType::AdverbDerivation:
            return EdgePriority::Medium;
        case EdgeType::Collocation:
        case EdgeType::Inflection:
        case EdgeType::Cognate:
        case EdgeType::MorphemeComponent:
        case EdgeType::EtymologyParent:
            return EdgePriority::Low;
    }
    return EdgePriority::Low;
}

EdgeType derivation_edge_type(PartOfSpeech target_pos) {
    switch (target_pos) {
        case PartOfSpeech::Verb: return EdgeType::VerbDerivation;
        case PartOfSpeech::Adjective: return EdgeType::AdjectiveDerivation;
        case PartOfSpeech::Adverb: return EdgeType::AdverbDerivation;
        default: return EdgeType::NounDerivation;
    }
}

}  // namespace opengloss
