#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace opengloss {

// The nine part-of-speech labels. Order is the canonical ordinal order used
// for sorting and serialization.
enum class PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Determiner,
    Preposition,
    Conjunction,
    Pronoun,
    Interjection,
};

inline constexpr std::size_t kPartOfSpeechCount = 9;

constexpr std::array<PartOfSpeech, kPartOfSpeechCount> all_parts_of_speech() {
    return {PartOfSpeech::Noun,        PartOfSpeech::Verb,
            PartOfSpeech::Adjective,   PartOfSpeech::Adverb,
            PartOfSpeech::Determiner,  PartOfSpeech::Preposition,
            PartOfSpeech::Conjunction, PartOfSpeech::Pronoun,
            PartOfSpeech::Interjection};
}

std::string_view to_string(PartOfSpeech pos);

// Returns nullopt for anything outside the nine canonical labels.
std::optional<PartOfSpeech> parse_part_of_speech(std::string_view text);

}  // namespace opengloss
