#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "opengloss/pos.hpp"

namespace opengloss {

// The 13 relation types of the semantic graph. Ordinal order is the
// canonical order used when sorting edge lists.
enum class EdgeType {
    Synonym,
    Antonym,
    Hypernym,
    Hyponym,
    Collocation,
    Inflection,
    NounDerivation,
    VerbDerivation,
    AdjectiveDerivation,
    AdverbDerivation,
    Cognate,
    MorphemeComponent,
    EtymologyParent,
};

inline constexpr std::size_t kEdgeTypeCount = 13;

// Every relation belongs to exactly one of these.
enum class EdgeCategory {
    SenseLevel,
    LexemeLevel,
    Historical,
};

enum class EdgePriority {
    High,
    Medium,
    Low,
};

constexpr std::array<EdgeType, kEdgeTypeCount> all_edge_types() {
    return {EdgeType::Synonym,
            EdgeType::Antonym,
            EdgeType::Hypernym,
            EdgeType::Hyponym,
            EdgeType::Collocation,
            EdgeType::Inflection,
            EdgeType::NounDerivation,
            EdgeType::VerbDerivation,
            EdgeType::AdjectiveDerivation,
            EdgeType::AdverbDerivation,
            EdgeType::Cognate,
            EdgeType::MorphemeComponent,
            EdgeType::EtymologyParent};
}

std::string_view to_string(EdgeType type);
std::optional<EdgeType> parse_edge_type(std::string_view text);

std::string_view to_string(EdgePriority priority);
std::optional<EdgePriority> parse_edge_priority(std::string_view text);

EdgeCategory edge_category(EdgeType type);

// Priority is a pure function of the relation type:
// hypernym/hyponym/antonym carry the taxonomy and opposition backbone (high),
// synonym and the four derivations describe lexical structure (medium),
// everything surface- or history-level is low.
EdgePriority classify_priority(EdgeType type);

// Derivation relation for a derived form with the given target POS.
EdgeType derivation_edge_type(PartOfSpeech target_pos);

}  // namespace opengloss
