#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opengloss {

struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical lemma form: Unicode NFC, trimmed, internal whitespace runs
// collapsed to a single space. Case is preserved; proper nouns are distinct
// headwords. Throws NormalizationError if nothing is left after trimming.
std::string normalize_lemma(std::string_view raw);

// Same normalization but empty output is returned instead of thrown; used
// where empty input is data, not an error.
std::string normalize_lemma_lenient(std::string_view raw);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

// Whitespace-delimited token count; the measure behind encyclopedia word
// counts.
std::int64_t count_words(std::string_view text);

// True when every codepoint is alphabetic (Unicode Alphabetic property).
bool is_alphabetic(std::string_view utf8);

// True when the first codepoint has the Uppercase property.
bool starts_uppercase(std::string_view utf8);

// Lowercased copy (full Unicode lowercasing).
std::string to_lower(std::string_view utf8);

}  // namespace opengloss
