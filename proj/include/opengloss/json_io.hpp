#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "opengloss/model.hpp"

namespace opengloss {

struct ParseError : std::runtime_error {
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), byte_offset(offset) {}
    std::size_t byte_offset = 0;
};

// One UTF-8 JSON object -> entry. Recognized fields map onto the model,
// anything else is preserved verbatim in extras. The lemma is normalized on
// the way in; encyclopedia word counts are recomputed from the body.
LexemeEntry parse_entry(std::string_view line);

LexemeEntry entry_from_json(const nlohmann::json& doc);

nlohmann::json entry_to_json(const LexemeEntry& entry);

// Canonical single-line serialization (sorted keys, no trailing newline).
// parse_entry(serialize_entry(e)) == e, extras included.
std::string serialize_entry(const LexemeEntry& entry);

nlohmann::json edge_to_json(const LexemeEdge& edge);
LexemeEdge edge_from_json(const nlohmann::json& doc);

}  // namespace opengloss
