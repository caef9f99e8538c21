#include "opengloss/backend.hpp"

namespace opengloss {

// Prompt templates, versioned here and keyed by role. They travel in the
// "instructions" field of every backend call context; remote backends are
// expected to prepend them to the model input verbatim.

namespace {

constexpr std::string_view kOverviewPrompt = R"(You are a lexicographer cataloguing an English headword.
Given the lemma, decide which of the nine part-of-speech categories apply
(noun, verb, adjective, adverb, determiner, preposition, conjunction,
pronoun, interjection), whether the lemma is a function-word stopword (and
why), and an approximate number of distinct senses per part of speech
(between 1 and 4).
Respond with a single JSON object:
{"pos": [..], "is_stopword": bool, "stopword_reason": str|null,
 "sense_counts": {"<pos>": int, ..}}
Return JSON only, no commentary.)";

constexpr std::string_view kPosDetailsPrompt = R"(You are a lexicographer writing the entry body for one part of speech of
an English headword. Produce the requested number of senses (1-4). Every
sense needs: a concise definition (roughly 50-150 characters), 3-5
synonyms, antonyms when applicable, 2-4 hypernyms, 2-4 hyponyms, and 1-3
natural example sentences using the headword. Also produce the morphology
(inflected forms with feature labels, derived forms with their part of
speech) and 3-6 common collocations.
Respond with a single JSON object:
{"senses": [{"definition": str, "synonyms": [..], "antonyms": [..],
  "hypernyms": [..], "hyponyms": [..], "examples": [..]}, ..],
 "morphology": {"inflections": [{"form": str, "feature": str}, ..],
  "derivations": [{"form": str, "pos": str}, ..]},
 "collocations": [..]}
Return JSON only, no commentary.)";

constexpr std::string_view kEtymologyPrompt = R"(You are a historical linguist sketching the development of an English
headword. Trace its precursor forms oldest-first (language, form, optional
gloss), list cross-linguistic cognates, note morpheme components when the
word is a composition, and add a short scholarly note when warranted.
Respond with a single JSON object:
{"trail": [{"language": str, "form": str, "gloss": str|null}, ..],
 "cognates": [{"language": str, "form": str}, ..],
 "components": [..], "notes": str|null}
Return JSON only, no commentary.)";

constexpr std::string_view kEncyclopediaPrompt = R"(You are writing a compact encyclopedia entry for an English headword
aimed at students. Cover what the concept is, its key characteristics,
typical applications or contexts, and historical development, in clear
educational prose of 200-400 words. Do not quote existing reference works.
Respond with a single JSON object: {"body": str}
Return JSON only, no commentary.)";

constexpr std::string_view kQaJudgePrompt = R"(You are auditing one dictionary entry for quality. Evaluate entry
structure (headword validity, part-of-speech fit), definitional quality,
encyclopedia quality, etymology plausibility, example naturalness, and the
semantic relationships (hypernyms, hyponyms, synonyms, antonyms). Report
each problem as an issue with a dimension (headword-structure, definition,
encyclopedia, etymology, examples, hypernym, hyponym, synonym, antonym), a
severity (minor or major), and a short note.
Respond with a single JSON object:
{"issues": [{"dimension": str, "severity": str, "note": str}, ..],
 "summary": str}
Return JSON only, no commentary.)";

}  // namespace

std::string_view prompt_template(AgentRole role) {
    switch (role) {
        case AgentRole::Overview: return kOverviewPrompt;
        case AgentRole::PosDetails: return kPosDetailsPrompt;
        case AgentRole::Etymology: return kEtymologyPrompt;
        case AgentRole::Encyclopedia: return kEncyclopediaPrompt;
        case AgentRole::QaJudge: return kQaJudgePrompt;
    }
    return kOverviewPrompt;
}

}  // namespace opengloss
